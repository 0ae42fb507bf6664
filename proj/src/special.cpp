#include "lacelab/special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lacelab {

double zeta(double s) { return boost::math::zeta(s); }

double hurwitz_zeta(double s, double q) {
  if (!(s > 1) || !(q > 0)) throw std::domain_error("hurwitz_zeta: need s > 1, q > 0");
  // Euler-Maclaurin with N explicit terms and Bernoulli corrections.
  constexpr int N = 12;
  static const double B2j[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
                               -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798};
  double sum = 0;
  for (int n = 0; n < N; ++n) sum += std::pow(n + q, -s);
  const double a = N + q;
  sum += std::pow(a, 1 - s) / (s - 1) + 0.5 * std::pow(a, -s);
  double rising = s;            // s(s+1)...(s+2j-2)
  double fact = 2;              // (2j)!
  double apow = std::pow(a, -s - 1);
  for (int j = 1; j <= 9; ++j) {
    const double term = B2j[j - 1] / fact * rising * apow;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
    apow /= a * a;
  }
  return sum;
}

double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

double upper_gamma(double b, double x) {
  if (!(x > 0)) throw std::domain_error("upper_gamma: need x > 0");
  if (b > 0) return boost::math::tgamma(b, x);
  if (x >= 1.0) {
    // Modified Lentz evaluation of the Legendre continued fraction.
    constexpr double tiny = 1e-300;
    double bb = x + 1 - b, c = 1 / tiny, d = 1 / bb, h = d;
    for (int i = 1; i < 2000; ++i) {
      const double an = -i * (i - b);
      bb += 2;
      d = an * d + bb;
      if (std::fabs(d) < tiny) d = tiny;
      c = bb + an / c;
      if (std::fabs(c) < tiny) c = tiny;
      d = 1 / d;
      const double del = d * c;
      h *= del;
      if (std::fabs(del - 1) < 1e-16) break;
    }
    return std::exp(-x + b * std::log(x)) * h;
  }
  // Small x: start from a0 = b + n in [0,1) and recur downwards,
  // Gamma(a-1,x) = (Gamma(a,x) - x^{a-1} e^{-x}) / (a-1).
  const int n = int(std::ceil(-b));
  double a = b + n;
  if (std::fabs(a) < 1e-14) a = 0;
  double g = (a == 0) ? boost::math::expint(1, x) : boost::math::tgamma(a, x);
  for (int i = 0; i < n; ++i) {
    g = (g - std::pow(x, a - 1) * std::exp(-x)) / (a - 1);
    a -= 1;
  }
  return g;
}

double gen_expint(double b, double x) {
  if (x == 0) {
    if (b < 0) return -1 / b;
    return std::numeric_limits<double>::infinity();
  }
  if (x > 700) return 0;
  return std::pow(x, -b) * upper_gamma(b, x);
}

Polylog::Polylog(double s) : s_(s) {
  if (!(s > 1)) throw std::domain_error("Polylog: order must exceed 1");
  integer_order_ = std::fabs(s - std::round(s)) < 1e-12;
  zeta_s_ = zeta(s);
  gamma_1ms_ = integer_order_ ? 0 : std::tgamma(1 - s);
  harmonic_ = 0;
  if (integer_order_)
    for (int j = 1; j < int(std::round(s)); ++j) harmonic_ += 1.0 / j;
  double fact = 1;
  for (int k = 0; k < 48; ++k) {
    if (k > 0) fact *= k;
    const double arg = s - k;
    const bool pole = std::fabs(arg - 1) < 1e-12;
    coef_.push_back(pole ? 0.0 : zeta(arg) / fact);
  }
}

double Polylog::near_one(double mu) const {
  // mu in [-log 2, 0]
  if (mu == 0) return zeta_s_;
  double series = 0, mk = 1;
  const int n1 = int(std::round(s_)) - 1;
  for (std::size_t k = 0; k < coef_.size(); ++k) {
    if (!(integer_order_ && int(k) == n1)) series += coef_[k] * mk;
    mk *= mu;
    if (std::fabs(mk) < 1e-300) break;
  }
  if (!integer_order_) return series + gamma_1ms_ * std::pow(-mu, s_ - 1);
  return series + std::pow(mu, n1) / std::tgamma(n1 + 1) * (harmonic_ - std::log(-mu));
}

double Polylog::deficit(double mu) const {
  if (mu > 0) throw std::domain_error("Polylog::deficit: mu must be <= 0");
  if (mu == 0) return 0;
  if (mu < -std::log(2.0)) return zeta_s_ - (*this)(std::exp(mu));
  double series = 0, mk = mu;
  const int n1 = int(std::round(s_)) - 1;
  for (std::size_t k = 1; k < coef_.size(); ++k) {
    if (!(integer_order_ && int(k) == n1)) series += coef_[k] * mk;
    mk *= mu;
    if (std::fabs(mk) < 1e-300) break;
  }
  if (!integer_order_) return -series - gamma_1ms_ * std::pow(-mu, s_ - 1);
  return -series - std::pow(mu, n1) / std::tgamma(n1 + 1) * (harmonic_ - std::log(-mu));
}

double Polylog::operator()(double u) const {
  if (u > 1 || u < -1) throw std::domain_error("Polylog: argument outside [-1,1]");
  if (std::fabs(u) <= 0.5) {
    double sum = 0, up = u;
    for (int t = 1; t < 200; ++t) {
      const double term = up * std::pow(double(t), -s_);
      sum += term;
      if (std::fabs(up) < 1e-18) break;
      up *= u;
    }
    return sum;
  }
  if (u > 0) return near_one(std::log(u));
  // duplication: Li_s(-x) = 2^{1-s} Li_s(x^2) - Li_s(x)
  return std::pow(2.0, 1 - s_) * (*this)(u * u) - near_one(std::log(-u));
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {
constexpr int kEwaldBox = 5;
constexpr double kEwaldCut = 48.0;  // exp(-48) ~ 1e-21
}  // namespace

EwaldSum::EwaldSum(int d, double s) : d_(d), s_(s) {
  if (d < 1 || d > 4) throw std::domain_error("EwaldSum: d must be 1..4");
  if (!(s > d)) throw std::domain_error("epstein_zeta: need s > d");
  const double pi = std::numbers::pi;
  prefactor_ = std::pow(pi, 0.5 * s) / std::tgamma(0.5 * s);
  std::array<int, 4> idx{};
  for (int i = 0; i < d; ++i) idx[i] = -kEwaldBox;
  while (true) {
    double n2 = 0;
    for (int i = 0; i < d; ++i) n2 += double(idx[i]) * idx[i];
    if (n2 > 0 && pi * n2 < kEwaldCut) direct_.emplace_back(idx, gen_expint(0.5 * s, pi * n2));
    int i = d - 1;
    while (i >= 0 && idx[i] == kEwaldBox) {
      idx[i] = -kEwaldBox;
      --i;
    }
    if (i < 0) break;
    ++idx[i];
  }
  zero_ = (*this)(nullptr);
}

double EwaldSum::operator()(const double* a) const {
  const double pi = std::numbers::pi;
  double direct = 0;
  for (const auto& [n, e] : direct_) {
    double phase = 0;
    if (a)
      for (int i = 0; i < d_; ++i) phase += n[i] * a[i];
    direct += (a ? std::cos(2 * pi * phase) : 1.0) * e;
  }
  // dual sum over m with pi |m + a|^2 < cut
  const double rad = std::sqrt(kEwaldCut / pi);
  int lo[4], hi[4], m[4];
  for (int i = 0; i < d_; ++i) {
    const double ai = a ? a[i] : 0.0;
    lo[i] = int(std::floor(-ai - rad));
    hi[i] = int(std::ceil(-ai + rad));
    m[i] = lo[i];
  }
  double dual = 0;
  while (true) {
    double m2 = 0;
    for (int i = 0; i < d_; ++i) {
      const double v = m[i] + (a ? a[i] : 0.0);
      m2 += v * v;
    }
    if (pi * m2 < kEwaldCut) dual += gen_expint(0.5 * (d_ - s_), pi * m2);
    int i = d_ - 1;
    while (i >= 0 && m[i] == hi[i]) {
      m[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++m[i];
  }
  return prefactor_ * (direct + dual - 2 / s_);
}

double epstein_zeta(int d, double s, const double* a) { return EwaldSum(d, s)(a); }

}  // namespace lacelab
