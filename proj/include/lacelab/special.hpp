#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace lacelab {

/// Riemann zeta for any real s != 1 (Boost backed).
double zeta(double s);

/// Hurwitz zeta  sum_{n>=0} (n+q)^{-s}, s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// Upper incomplete gamma Gamma(b, x) for real b (including b <= 0) and x > 0.
double upper_gamma(double b, double x);

/// Generalized exponential integral  E_b(x) = int_1^inf u^{b-1} e^{-xu} du = x^{-b} Gamma(b,x).
/// E_b(0) = -1/b for b < 0.
double gen_expint(double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Polylogarithm Li_s(u) on u in [-1, 1] for a fixed order s > 1.
///
/// Near u = 1 the series in mu = log u is used,
///   Li_s(e^mu) = Gamma(1-s)(-mu)^{s-1} + sum_k zeta(s-k) mu^k / k!,
/// which also gives zeta(s) - Li_s(e^mu) without cancellation.
class Polylog {
 public:
  explicit Polylog(double s);
  double order() const { return s_; }
  double operator()(double u) const;
  /// zeta(s) - Li_s(e^mu) for mu <= 0, accurate as mu -> 0.
  double deficit(double mu) const;

 private:
  double near_one(double mu) const;  // Li_s(e^mu), |mu| <= log 2
  double s_;
  bool integer_order_;
  double zeta_s_;
  double gamma_1ms_;               // Gamma(1-s) (non-integer order)
  double harmonic_;                // H_{s-1} (integer order)
  std::vector<double> coef_;       // zeta(s-k)/k!
};

/// Gauss-Legendre rule on [-1, 1] with n nodes (cached).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double gl_integrate(F&& f, double a, double b, int n) {
  const auto& [x, w] = gauss_legendre(n);
  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  double s = 0;
  for (int i = 0; i < n; ++i) s += w[i] * f(c + h * x[i]);
  return s * h;
}

/// sum'_{n in Z^d} cos(2 pi n.a) |n|^{-s}  for s > d  (Ewald/Crandall split).
/// With a = 0 this is the Epstein zeta function of Z^d.
double epstein_zeta(int d, double s, const double* a = nullptr);

/// Same lattice sum with the a-independent direct-space terms cached.
class EwaldSum {
 public:
  EwaldSum(int d, double s);
  double operator()(const double* a) const;
  double at_zero() const { return zero_; }

 private:
  int d_;
  double s_, prefactor_;
  std::vector<std::pair<std::array<int, 4>, double>> direct_;
  double zero_;
};

}  // namespace lacelab
