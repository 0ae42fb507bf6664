#include "lacelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace lacelab {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

double bonferroni_z(double level, std::size_t m) {
  return normal_quantile(1 - level / (2.0 * double(std::max<std::size_t>(m, 1))));
}

Interval gamma_interval(double sum, double sumsq, double wmax, double z) {
  const double a = 1 - normal_cdf(z);  // one tail
  Interval r;
  if (sum > 0 && sumsq > 0) r.lo = boost::math::gamma_p_inv(sum * sum / sumsq, a) * sumsq / sum;
  const double s = sum + wmax, v = sumsq + wmax * wmax;
  if (s > 0) r.hi = boost::math::gamma_p_inv(s * s / v, 1 - a) * v / s;
  return r;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 points");
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.n = int(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.r2 = syy > 0 ? 1 - rss / syy : 1;
  f.slope_stderr = x.size() > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0;
  return f;
}

namespace {
// Least squares y = c0 + c1 z + ... + c_k z^k by Householder QR; returns rms residual.
double fit_poly(const std::vector<double>& z, const std::vector<double>& y, int k, std::vector<double>& c) {
  const std::size_t n = z.size(), m = std::size_t(k) + 1;
  std::vector<std::vector<double>> a(m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double p = 1;
    for (std::size_t j = 0; j < m; ++j, p *= z[i]) a[j][i] = p;
  }
  std::vector<double> b = y;
  for (std::size_t j = 0; j < m; ++j) {
    double nrm = 0;
    for (std::size_t i = j; i < n; ++i) nrm += a[j][i] * a[j][i];
    nrm = std::sqrt(nrm);
    if (nrm == 0) continue;
    const double alpha = a[j][j] > 0 ? -nrm : nrm;
    std::vector<double> v(a[j].begin() + long(j), a[j].end());
    v[0] -= alpha;
    double vv = 0;
    for (double t : v) vv += t * t;
    if (vv == 0) continue;
    auto reflect = [&](std::vector<double>& col) {
      double dot = 0;
      for (std::size_t i = j; i < n; ++i) dot += v[i - j] * col[i];
      dot *= 2 / vv;
      for (std::size_t i = j; i < n; ++i) col[i] -= dot * v[i - j];
    };
    for (std::size_t l = j; l < m; ++l) reflect(a[l]);
    reflect(b);
  }
  c.assign(m, 0.0);
  for (std::size_t j = m; j-- > 0;) {
    double s = b[j];
    for (std::size_t l = j + 1; l < m; ++l) s -= a[l][j] * c[l];
    c[j] = a[j][j] != 0 ? s / a[j][j] : 0.0;
  }
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0, p = 1;
    for (std::size_t j = 0; j < m; ++j, p *= z[i]) f += c[j] * p;
    rss += (y[i] - f) * (y[i] - f);
  }
  return std::sqrt(rss / double(n));
}
}  // namespace

std::vector<double> fit_power_series(const std::vector<double>& x, const std::vector<double>& y, double mu,
                                     int terms, double* rms) {
  if (terms < 0 || x.size() != y.size() || x.size() < std::size_t(terms) + 2)
    throw std::invalid_argument("fit_power_series: too few points");
  std::vector<double> z(x.size()), c;
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::pow(x[i], -mu);
  const double r = fit_poly(z, y, terms, c);
  if (rms) *rms = r;
  return c;
}

PowerCorrectionFit fit_power_correction(const std::vector<double>& x, const std::vector<double>& y,
                                        double mu_lo, double mu_hi, int terms) {
  if (terms < 1) throw std::invalid_argument("fit_power_correction: terms must be >= 1");
  if (x.size() != y.size() || x.size() < std::size_t(terms) + 2)
    throw std::invalid_argument("fit_power_correction: too few points");
  std::vector<double> coef;
  auto cost = [&](double mu) {
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::pow(x[i], -mu);
    return fit_poly(z, y, terms, coef);
  };
  // coarse scan then golden section around the best cell
  const int scan = 64;
  double best = INFINITY, bmu = mu_lo;
  for (int i = 0; i <= scan; ++i) {
    const double mu = mu_lo + (mu_hi - mu_lo) * i / scan;
    const double c = cost(mu);
    if (c < best) {
      best = c;
      bmu = mu;
    }
  }
  double a = std::max(mu_lo, bmu - (mu_hi - mu_lo) / scan), b = std::min(mu_hi, bmu + (mu_hi - mu_lo) / scan);
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double c1 = b - g * (b - a), c2 = a + g * (b - a);
  double f1 = cost(c1), f2 = cost(c2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - g * (b - a);
      f1 = cost(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + g * (b - a);
      f2 = cost(c2);
    }
  }
PowerCorrectionFit out;
  out.mu = 0.5 * (a + b);
  if (best < cost(out.mu)) out.mu = bmu;
  out.rms = cost(out.mu);
  out.A = coef[0];
  out.B = coef[1];
  out.C = terms > 1 ? coef[2] : 0.0;
  out.coef = coef;
  return out;
}

Interval wilson_interval(long k, long n, double z) {
  if (n <= 0) return {0, 1};
  const double ph = double(k) / n, z2 = z * z;
  const double den = 1 + z2 / n;
  const double centre = (ph + z2 / (2 * n)) / den;
  const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4.0 * n * n)) / den;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {
long kendall_s(const std::vector<double>& y) {
  long s = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j) s += (y[j] > y[i]) - (y[j] < y[i]);
  return s;
}
}  // namespace

KendallResult kendall_trend(const std::vector<double>& y) {
  const std::size_t n = y.size();
  KendallResult r;
  if (n < 3) return r;
  const long S = kendall_s(y);
  const double pairs = 0.5 * double(n) * double(n - 1);
  // tie groups in y
  std::vector<double> sorted(y);
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0, tie_pairs = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = double(j - i);
    tie_term += t * (t - 1) * (2 * t + 5);
    tie_pairs += 0.5 * t * (t - 1);
    i = j;
  }
  r.tau = S / std::sqrt(pairs * (pairs - tie_pairs));
  if (n <= 9 && tie_pairs == 0) {
    // exact null distribution of S over all permutations
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long count = 0, total = 0;
    do {
      long s = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += (perm[j] > perm[i]) - (perm[j] < perm[i]);
      count += (s >= S);
      ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    r.p_increasing = double(count) / total;
    r.z = 0;
    return r;
  }
  const double var = (double(n) * (n - 1) * (2 * n + 5) - tie_term) / 18.0;
  const double cc = S > 0 ? S - 1 : (S < 0 ? S + 1 : 0);
  r.z = var > 0 ? cc / std::sqrt(var) : 0;
  r.p_increasing = 1 - normal_cdf(r.z);
  return r;
}

}  // namespace lacelab
