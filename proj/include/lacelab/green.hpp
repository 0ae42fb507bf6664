#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacelab/stats.hpp"
#include "lacelab/stepdist.hpp"
#include "lacelab/torus.hpp"

namespace lacelab {

struct GreenEntry {
  Site x{};
  double value = 0;
  std::string method;   // "Renewal", "NeumannFFT" or "SpectralQuad"
  double err = 0;
};

struct GreenTable {
  LatticeParams params;
  DistKind kind = DistKind::PowerLaw;
  double p = 1;
  std::vector<GreenEntry> entries;

  std::optional<double> value(const Site& x) const;
  /// Largest relative increase along each ray beyond radius r0 (0 if monotone).
  double ray_monotonicity_defect(double r0) const;
};

struct GreenOptions {
  long M = 128;          // torus side for the FFT routes
  double tolerance = 1e-10;
  long max_terms = 1L << 20;
};

/// S_p = sum_n p^n D^{*n}. Subordinated walks with separable blocks are summed exactly on Z^d
/// through the renewal weights of 1/(1 - p Phi); other walks through the truncated geometric
/// series on the torus with tail and wrap certificates.
GreenTable green_neumann(const StepDistribution& D, double p, const std::vector<Site>& xs, const GreenOptions& o = {});
/// S_p by FFT of 1/(1 - p D^(k)) on the M^d grid (p < 1).
GreenTable green_spectral(const StepDistribution& D, double p, const std::vector<Site>& xs, long M);
/// Full torus field of S_p (p < 1) from the spectral route.
TorusField green_spectral_field(const StepDistribution& D, double p, long M);
/// Truncated torus Neumann field sum_{n<=N} p^n D_M^{*n}, with the number of terms used.
TorusField green_neumann_field(const KernelLadder& ladder, double p, long N);

/// Gamma((d-a)/2) / (2^a pi^{d/2} Gamma(a/2)), a = alpha ^ 2.
double gamma_alpha(int d, double alpha);

struct AsymptoticConstants {
  double gammaAlpha = 0;
  double vAlpha = 0;
  double amplitude = 0;   // gamma_alpha / v_alpha
  double lambda = 0;
  double mu = 0;
};
AsymptoticConstants asymptotic_constants(const StepDistribution& D);

struct RayFit {
  std::string ray;
  std::vector<double> r, ratio;      // S_1(x) |x|^{d-alpha^2}
  double limit = 0;                  // constant term of the series fit on the last decade
  std::vector<double> series;        // coefficients of r^{-j mu0}, j = 0..3
  double fit_rms = 0;
  double mu_fit = 0;                 // free fit A + B r^{-mu} on the same window
  double relative_deviation = 0;     // |limit / amplitude - 1|
  double last_point_deviation = 0;   // |ratio(rmax)/amplitude - 1|
  double residual_mu = 0;            // log-log slope of |ratio - amplitude|
};

struct AsymptoticReport {
  AsymptoticConstants constants;
  std::vector<RayFit> rays;
  double kappa = 0.5;
  double r_min = 0;                  // L^{1+kappa}
  bool range_ok = false;
  double worst_deviation = 0;        // max over rays of relative_deviation
  double mu = 0;                     // fitted correction exponent (mean over rays)
  double mu0 = 0;                    // structural exponent used for the limit estimate
  nlohmann::json to_json() const;
};

/// Rays: the first axis and the main diagonal.
std::vector<Site> ray_sites(int d, long rmax, bool diagonal);

/// Leading correction exponent of S_1 r^{d - alpha^2} predicted by the small-k
/// expansion of 1 - D^: |2 - alpha| for alpha < 4, else 2.
double structural_correction_exponent(double alpha);

/// Along each ray, S_1(x)|x|^{d - alpha^2} for |x| > L^{1 + kappa}. The limit is
/// extrapolated from A + sum_j B_j r^{-j mu0} (j <= 3) over the last decade.
AsymptoticReport asymptotic_ratio(const GreenTable& table, const AsymptoticConstants& c, double kappa = 0.5);

/// sup_{x != o} S_1(x) <x>_L^{d - alpha^2}, with the region beyond the table bounded
/// by the fitted envelope. CertificateError if the envelope has not settled.
double lambda_constant(const GreenTable& table, const AsymptoticReport& fit);

}  // namespace lacelab
