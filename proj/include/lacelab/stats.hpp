#pragma once

#include <cstddef>
#include <vector>

namespace lacelab {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double r2 = 0;
  int n = 0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Fit y = A + B x^{-mu} + C x^{-2 mu} + ... (`terms` powers of x^{-mu}):
/// mu by golden-section search on the residual, coefficients by linear
/// least squares for each mu.
struct PowerCorrectionFit {
  double A = 0, B = 0, C = 0, mu = 0;
  double rms = 0;
  std::vector<double> coef;  // A, B, C, ...
};
PowerCorrectionFit fit_power_correction(const std::vector<double>& x, const std::vector<double>& y,
                                        double mu_lo, double mu_hi, int terms = 1);

/// Fixed-exponent version: y = c0 + c1 x^{-mu} + ... + c_k x^{-k mu}.
/// Returns the coefficients; `rms` receives the residual.
std::vector<double> fit_power_series(const std::vector<double>& x, const std::vector<double>& y, double mu,
                                     int terms, double* rms = nullptr);

struct Interval {
  double lo = 0, hi = 0;
};

/// Wilson score interval for k successes in n trials at normal quantile z.
Interval wilson_interval(long k, long n, double z = 1.959963984540054);

/// Kendall's tau of a sequence against its index, with the one-sided p-value
/// for the alternative "monotone increasing" (normal approximation with tie
/// correction; exact enumeration for n <= 9).
struct KendallResult {
  double tau = 0;
  double z = 0;
  double p_increasing = 1;
};
KendallResult kendall_trend(const std::vector<double>& y);

double normal_cdf(double z);
double normal_quantile(double p);
/// Two-sided normal quantile giving simultaneous coverage 1 - level over m intervals.
double bonferroni_z(double level, std::size_t m);

/// Fay-Feuer gamma interval for a sum of independent weighted Poisson-like counts:
/// `sum` = sum w_i, `sumsq` = sum w_i^2, `wmax` = max w_i; coverage from z.
Interval gamma_interval(double sum, double sumsq, double wmax, double z = 1.959963984540054);

}  // namespace lacelab
