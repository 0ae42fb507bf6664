#include "lacelab/decomposition.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "lacelab/errors.hpp"
#include "lacelab/fft.hpp"
#include "lacelab/green.hpp"
#include "lacelab/renewal.hpp"
#include "lacelab/special.hpp"
#include "lacelab/stable.hpp"
#include "lacelab/torus.hpp"

namespace lacelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGL = 16;
constexpr double kPanelPhase = 2.0;  // radians of oscillation per 16-point panel

// Composite Gauss-Legendre on [a, b] with n equal panels.
template <class F>
double composite_gl(double a, double b, long n, F&& f) {
  const auto& [gx, gw] = gauss_legendre(kGL);
  const double h = (b - a) / double(n);
  double s = 0;
  for (long p = 0; p < n; ++p) {
    const double c = a + (double(p) + 0.5) * h;
    for (int i = 0; i < kGL; ++i) s += gw[i] * f(c + 0.5 * h * gx[i]);
  }
  return 0.5 * h * s;
}

long panels_for(double phase) { return 4 + long(std::ceil(phase / kPanelPhase)); }

// C-infinity step: 1 on (-inf, 0], 0 on [1, inf).
double smooth_cutoff(double u) {
  if (u <= 0) return 1;
  if (u >= 1) return 0;
  const double a = std::exp(-1 / u), b = std::exp(-1 / (1 - u));
  return b / (a + b);
}

// int_{rho_lo < |k| < rho_hi} cos(k.x) F(k) d^dk / (2 pi)^d for F even under k -> -k.
// With `sqrt_map` the radial variable is rho_lo + (rho_hi - rho_lo) z^2, which
// regularizes integrable power singularities at rho_lo = 0.
double shell_integral(int d, const Site& x, double rho_lo, double rho_hi, bool sqrt_map,
                      const std::function<double(const Momentum&)>& F) {
  const double r = norm(x, d);
  double e[3] = {0, 0, 0}, f1[3] = {0, 0, 0}, f2[3] = {0, 0, 0};
  if (r > 0)
    for (int i = 0; i < d; ++i) e[i] = double(x[i]) / r;
  else
    e[0] = 1;
  if (d >= 2) {
    // Gram-Schmidt on the coordinate axis least aligned with e
    int j = 0;
    for (int i = 1; i < d; ++i)
      if (std::fabs(e[i]) < std::fabs(e[j])) j = i;
    f1[j] = 1;
    double dot = e[j];
    double n1 = 0;
    for (int i = 0; i < d; ++i) {
      f1[i] -= dot * e[i];
      n1 += f1[i] * f1[i];
    }
    for (int i = 0; i < d; ++i) f1[i] /= std::sqrt(n1);
    if (d == 3) {
      f2[0] = e[1] * f1[2] - e[2] * f1[1];
      f2[1] = e[2] * f1[0] - e[0] * f1[2];
      f2[2] = e[0] * f1[1] - e[1] * f1[0];
    }
  }
  const double span = rho_hi - rho_lo;
  const long nrad = panels_for((sqrt_map ? 2 : 1) * span * r) + (sqrt_map ? 8 : 0);
  auto radial = [&](const std::function<double(double)>& g) {
    if (!sqrt_map) return composite_gl(rho_lo, rho_hi, nrad, g);
    return composite_gl(0.0, 1.0, nrad, [&](double z) { return 2 * span * z * g(rho_lo + span * z * z); });
  };
  Momentum k{};
  if (d == 1) {
    return radial([&](double rho) {
             k[0] = rho;
             return std::cos(rho * r) * F(k);
           }) /
           kPi;
  }
  if (d == 2) {
    // periodic trapezoid in the angle
    const long nth = 64 + 4 * long(std::ceil(rho_hi * r));
    return radial([&](double rho) {
             double s = 0;
             for (long j = 0; j < nth; ++j) {
               const double th = 2 * kPi * (double(j) + 0.5) / double(nth);
               const double c = std::cos(th), sn = std::sin(th);
               for (int i = 0; i < 2; ++i) k[i] = rho * (c * e[i] + sn * f1[i]);
               s += std::cos(rho * r * c) * F(k);
             }
             return rho * s * (2 * kPi / double(nth));
           }) /
           (4 * kPi * kPi);
  }
  // d = 3: polar axis along x; F(-k) = F(k) folds c in [-1, 0] onto [0, 1]
  const long nphi = 64;
  const long nc = panels_for(rho_hi * r);
  return 2 *
         radial([&](double rho) {
           return rho * rho * composite_gl(0.0, 1.0, nc, [&](double c) {
                    const double sn = std::sqrt(std::max(0.0, 1 - c * c));
                    double s = 0;
                    for (long j = 0; j < nphi; ++j) {
                      const double ph = 2 * kPi * double(j) / double(nphi);
                      const double cp = std::cos(ph), sp = std::sin(ph);
                      for (int i = 0; i < 3; ++i) k[i] = rho * (c * e[i] + sn * (cp * f1[i] + sp * f2[i]));
                      s += F(k);
                    }
                    return std::cos(rho * r * c) * s * (2 * kPi / double(nphi));
                  });
         }) /
         (8 * kPi * kPi * kPi);
}

// int_{|k| > R} cos(k.x) g(|k|) d^dk / (2 pi)^d for radial g, up to where g underflows.
double radial_tail(int d, double r, double R, double kmax, const std::function<double(double)>& g) {
  if (kmax <= R) return 0;
  const long n = panels_for((kmax - R) * r) + 4;
  if (d == 1) return composite_gl(R, kmax, n, [&](double k) { return std::cos(k * r) * g(k); }) / kPi;
  if (d == 3)
    return composite_gl(R, kmax, n, [&](double k) { return k * std::sin(k * r) * g(k); }) / (2 * kPi * kPi * r);
  const double nu = 0.5 * d - 1;
  return composite_gl(R, kmax, n,
                      [&](double k) {
                        return std::pow(k, 0.5 * d) * boost::math::cyl_bessel_j(nu, k * r) * g(k);
                      }) *
         std::pow(2 * kPi, -0.5 * d) * std::pow(r, 1 - 0.5 * d);
}

bool renewal_route(const StepDistribution& D) {
  const double a = D.params().alpha;
  return D.kind() == DistKind::Subordinated && D.block()->separable() &&
         std::fabs(a / 2 - std::round(a / 2)) > 1e-9;
}

}  // namespace

double schedule_mu(const StepDistribution& D) {
  const auto& p = D.params();
  const double a = p.alpha2();
  double eps = structural_correction_exponent(p.alpha);
  if (D.kind() == DistKind::PowerLaw && D.fitted_epsilon() > 0) eps = D.fitted_epsilon();
  eps = std::min(eps, 2.0);
  return 2 * a * eps / (p.d + a + eps);
}

double schedule_T(const StepDistribution& D, double r) {
  const auto& p = D.params();
  return std::pow(r / p.L, p.alpha2() - 0.5 * schedule_mu(D));
}

ErrorDecomposition decompose_error(const StepDistribution& D, const Site& x, const DecompositionOptions& o) {
  const auto& par = D.params();
  const int d = par.d;
  const double a = par.alpha2();
  require(d <= 3, "green", "d", "error decomposition supports d in {1, 2, 3}");
  require(double(d) > a, "green", "d", "error decomposition needs d > alpha ^ 2");
  require(std::fabs(par.alpha - 2) > 1e-12, "green", "alpha", "alpha = 2 is excluded");
  require(!is_origin(x), "green", "x", "x must differ from the origin");
  require(o.R > 0 && o.R < kPi, "green", "R", "R must lie in (0, pi)");
  require(o.delta > 0 && o.R + o.delta <= kPi, "green", "delta", "cutoff shell must fit inside the Brillouin zone");
  require(o.M >= 16 && o.M % 2 == 0, "green", "M", "M must be an even integer >= 16");

  const double r = norm(x, d);
  const double v = D.v_alpha();
  ErrorDecomposition out;
  out.x = x;
  out.d = d;
  out.R = o.R;
  out.mu = schedule_mu(D);
  out.T = o.T > 0 ? o.T : schedule_T(D, r);
  require(std::isfinite(out.T) && out.T > 0, "green", "T", "T must be positive");
  const double T = out.T;
  out.rieszTerm = gamma_alpha(d, par.alpha) / v * std::pow(r, a - d);

  // I_1 = sum_n P(Poisson(T) > n) D^{*n}(x)
  if (renewal_route(D)) {
    const auto& opt = D.options();
    const TimeSum ts(poisson_sequence(*D.weights(), T, opt.N), opt.t_exact);
    out.I[0] = ts.apply(*D.layers(), x);
    const double e = 0.5 * (d + opt.ell + 2);
    out.err[0] = D.layer_error_constant() *
                 ts.apply([&](long t) { return t > opt.t_exact ? std::pow(double(t), -e) : 0.0; },
                          [&](double t) { return std::pow(t, -e); });
  } else {
    KernelLadder ladder(D, o.M, 1.0);
    Spectrum s;
    s.grid = ladder.grid();
    const auto& sym = ladder.symbol();
    s.data.resize(sym.size());
    for (std::size_t i = 0; i < sym.size(); ++i) {
      const double om = 1 - sym[i];
      s.data[i] = std::fabs(om) < 1e-14 ? T : -std::expm1(-T * om) / om;
    }
    out.I[0] = fft_inverse(s)[s.grid.index(x)];
    double wrap = 0;
    for (long n = 1;; ++n) {
      const double tail = gamma_p(double(n + 1), T);  // P(Poisson(T) > n)
      if (double(n) > T && tail < 1e-17) break;
      wrap += tail * ladder.wrap_error(n);
    }
    out.err[0] = wrap;
  }

  // I_2 = -int_0^T p_{vt}(x) dt, in log t; the integrand is O(t) near 0
  auto I2 = [&](long panels) {
    const double lo = std::log(T) - 40;
    return -composite_gl(lo, std::log(T), panels, [&](double u) {
      const double t = std::exp(u);
      return t * stable_density(par.alpha, d, v * t, r);
    });
  };
  out.I[1] = I2(48);
  out.err[1] = std::fabs(out.I[1] - I2(24));

  auto om_of = [&](const Momentum& k) { return D.one_minus_hat(k); };
  auto knorm = [&](const Momentum& k) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += k[i] * k[i];
    return std::sqrt(s);
  };
  // exp(-T w) / w, stable at w -> 0
  auto kernel = [&](double w) { return w < 1e-300 ? 0.0 : std::exp(-T * w) / w; };

  // I_3: small |k|, lattice minus stable
  out.I[2] = shell_integral(d, x, 0.0, o.R, true, [&](const Momentum& k) {
    const double q = knorm(k);
    if (q == 0) return 0.0;
    const double ka = v * std::pow(q, a);
    return kernel(om_of(k)) - kernel(ka);
  });

  // I_4: |k| > R on the torus. Split 1{|k|>R} = (1 - chi) + (chi - 1{|k|<=R}) with chi a
  // smooth radial step from 1 at R to 0 at R + delta: the first part is smooth and
  // periodic (trapezoid = FFT), the second lives on the shell R < |k| < R + delta.
  auto chi = [&](double q) { return smooth_cutoff((q - o.R) / o.delta); };
  auto bulk = [&](long M) {
    const Grid g{d, M};
    const Spectrum s = symmetric_spectrum(g, [&](const Momentum& k) {
      const double c = chi(knorm(k));
      return c >= 1 ? 0.0 : (1 - c) * kernel(om_of(k));
    });
    return fft_inverse(s)[g.index(x)];
  };
  const double bulkM = bulk(o.M);
  const double shell = shell_integral(d, x, o.R, o.R + o.delta, false, [&](const Momentum& k) {
    return chi(knorm(k)) * kernel(om_of(k));
  });
  out.I[3] = bulkM + shell;
  out.err[3] = std::fabs(bulkM - bulk(o.M / 2));

  out.err[2] = std::numeric_limits<double>::quiet_NaN();  // not estimated separately

  // I_5: |k| > R on R^d, stable part
  const double kmax = std::pow(745 / (v * T), 1 / a);
  out.I[4] = -radial_tail(d, r, o.R, std::max(kmax, o.R), [&](double q) { return kernel(v * std::pow(q, a)); });

  out.err[4] = std::numeric_limits<double>::quiet_NaN();

  double sum = 0;
  for (double I : out.I) sum += I;
  out.reconstructed = out.rieszTerm + sum;
  out.I12_constant = std::fabs(out.I[0] + out.I[1]) * std::pow(r, d + a) / (std::pow(par.L, a) * T * T);
  out.scaled_total = std::fabs(sum) * std::pow(r, d - a + out.mu);
  if (o.with_S1) {
    out.S1 = green_neumann(D, 1.0, {x}).entries.front().value;
    out.relative_residual = std::fabs(out.reconstructed / out.S1 - 1);
  }
  return out;
}

nlohmann::json ErrorDecomposition::to_json() const {
  nlohmann::json j;
  j["x"] = to_string(x, d);
  j["T"] = T;
  j["R"] = R;
  j["mu"] = mu;
  j["I"] = I;
  j["errEstimate"] = err;
  j["rieszTerm"] = rieszTerm;
  j["reconstructed"] = reconstructed;
  j["S1"] = S1;
  j["relativeResidual"] = relative_residual;
  j["I12Constant"] = I12_constant;
  j["scaledTotal"] = scaled_total;
  return j;
}

}  // namespace lacelab
