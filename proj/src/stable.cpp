#include "lacelab/stable.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "lacelab/errors.hpp"
#include "lacelab/special.hpp"

namespace lacelab {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

// F(rho; n) = int_0^inf k^n exp(-s k^a) exp(i k rho) dk, rho >= 0, along k = y e^{i theta}.
// theta balances the decay gained by e^{ik rho} against the oscillation picked up by e^{-s k^a}.
cd rotated_integral(double a, double s, double rho, int n) {
  const double theta = rho > 0 ? std::min(pi / 3, 0.25 * pi / a) : 0.0;
  const cd rot = std::polar(1.0, theta);
  const cd rot_a = std::polar(1.0, a * theta);
  const double c1 = s * std::cos(a * theta), c2 = rho * std::sin(theta);
  double Y = std::pow((60.0 + 4 * n) / c1, 1 / a);
  if (c2 > 0) Y = std::min(Y, (60.0 + 4 * n) / c2);
  auto f = [&](double y) {
    return std::pow(y, n) * std::exp(-s * std::pow(y, a) * rot_a + cd(0, 1) * (y * rot) * rho);
  };
  const auto& [x, w] = gauss_legendre(16);
  auto panel = [&](double lo, double hi) {
    const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
    cd part = 0;
    for (std::size_t i = 0; i < x.size(); ++i) part += w[i] * f(c + h * x[i]);
    return part * h;
  };
  constexpr int uniform = 64;
  const double h0 = Y / uniform;
  cd sum = 0;
  for (int j = 1; j < uniform; ++j) sum += panel(j * h0, (j + 1) * h0);
  // graded panels towards 0, where the integrand is non-analytic through y^a
  double hi = h0;
  for (int j = 0; j < 40; ++j) {
    const double lo = (j == 39) ? 0.0 : 0.5 * hi;
    sum += panel(lo, hi);
    hi = lo;
  }
  return sum * std::pow(rot, n + 1);
}

// int_0^inf g(t) dt for g decaying like e^{-c t}, c >= 2
double half_line(const std::function<double(double)>& g, double tmax) {
  double s = 0;
  for (double t = 0; t < tmax; t += 0.5) s += gl_integrate(g, t, t + 0.5, 16);
  return s;
}

}  // namespace

double stable_density(double alpha, int d, double s, double r) {
  require(s > 0, "torus-kernels", "s", "stable time must be positive");
  require(d >= 1 && d <= 4, "torus-kernels", "d", "stable density implemented for d in 1..4");
  require(alpha > 0, "torus-kernels", "alpha", "alpha must be positive");
  r = std::fabs(r);
  if (alpha >= 2) return std::pow(4 * pi * s, -0.5 * d) * std::exp(-r * r / (4 * s));
  // Even d: Mehler's J_0(z) = (2/pi) int_0^inf sin(z cosh t) dt, and p_4 = -(2 pi r)^{-1} dp_2/dr.
  const double scale = std::pow(s, 1 / alpha);
  const double tmax = r > 0 ? std::acosh(std::max(1.0, 1e6 * (scale + r) / r)) : 0.0;
  switch (d) {
    case 1:
      return rotated_integral(alpha, s, r, 0).real() / pi;
    case 2:
      if (r == 0) return rotated_integral(alpha, s, 0, 1).real() / (2 * pi);
      return half_line([&](double t) { return rotated_integral(alpha, s, r * std::cosh(t), 1).imag(); }, tmax) /
             (pi * pi);
    case 3:
      if (r == 0) return rotated_integral(alpha, s, 0, 2).real() / (2 * pi * pi);
      return rotated_integral(alpha, s, r, 1).imag() / (2 * pi * pi * r);
    default:
      if (r == 0) return rotated_integral(alpha, s, 0, 3).real() / (8 * pi * pi);
      return -half_line([&](double t) {
               return rotated_integral(alpha, s, r * std::cosh(t), 2).real() * std::cosh(t);
             }, tmax) / (2 * pi * pi * pi * r);
  }
}
double stable_total_mass(double alpha, int d, double s) {
  const double omega = 2 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
  const double scale = std::pow(s, 1 / std::min(alpha, 2.0));
  // r = scale e^u
  double total = 0;
  const double umax = alpha < 2 ? 8.0 : 4.0;
  for (double u = -20; u < umax; u += 1.0)
    total += gl_integrate(
        [&](double uu) {
          const double r = scale * std::exp(uu);
          return omega * std::pow(r, d) * stable_density(alpha, d, s, r);
        },
        u, u + 1, 16);
  if (alpha < 2) {
    // analytic tail beyond r_max using p ~ c s r^{-d-alpha}
    const double rmax = scale * std::exp(umax);
    const double c = alpha * std::pow(2.0, alpha - 1) * std::tgamma(0.5 * (d + alpha)) /
                     (std::pow(pi, 0.5 * d) * std::tgamma(1 - 0.5 * alpha));
    total += omega * c * s * std::pow(rmax, -alpha) / alpha;
  }
  return total;
}

double stable_time_integral(double alpha, int d, double v, double r) {
  require(r > 0, "green", "x", "need x != 0");
  const double a2 = std::min(alpha, 2.0);
  require(d > a2, "green", "d", "time integral diverges for d <= alpha^2");
  // natural time t0 with v t0 = r^{a2}
  const double u0 = std::log(std::pow(r, a2) / v);
  double total = 0;
  for (double u = u0 - 40; u < u0 + 60; u += 1.0)
    total += gl_integrate(
        [&](double uu) {
          const double t = std::exp(uu);
          return t * stable_density(alpha, d, v * t, r);
        },
        u, u + 1, 12);
  return total;
}

HK0Report verify_HK0(double alpha, int d, const std::vector<double>& sGrid, const std::vector<double>& rGrid) {
  const double a2 = std::min(alpha, 2.0);
  HK0Report rep;
  rep.min = 1e300;
  for (double s : sGrid)
    for (double r : rGrid) {
      const double v = stable_density(alpha, d, s, r) * std::pow(r, d + a2) / s;
      rep.sup = std::max(rep.sup, v);
      rep.min = std::min(rep.min, v);
    }
  rep.finite = std::isfinite(rep.sup);
  return rep;
}

}  // namespace lacelab
