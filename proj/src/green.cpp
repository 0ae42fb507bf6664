#include "lacelab/green.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>

#include "lacelab/errors.hpp"

namespace lacelab {

std::optional<double> GreenTable::value(const Site& x) const {
  for (const auto& e : entries)
    if (e.x == x) return e.value;
  return std::nullopt;
}

namespace {

// Rays keyed by direction: sites that are positive multiples of the same primitive vector.
std::map<Site, std::vector<std::pair<double, double>>> split_rays(const GreenTable& t) {
  const int d = t.params.d;
  std::map<Site, std::vector<std::pair<double, double>>> rays;
  for (const auto& e : t.entries) {
    if (is_origin(e.x)) continue;
    long g = 0;
    for (int i = 0; i < d; ++i) g = std::gcd(g, std::labs(e.x[i]));
    Site dir{};
    for (int i = 0; i < d; ++i) dir[i] = e.x[i] / g;
    rays[dir].emplace_back(norm(e.x, d), e.value);
  }
  for (auto& [dir, v] : rays) std::sort(v.begin(), v.end());
  return rays;
}

std::string ray_name(const Site& dir, int d) {
  bool diag = d > 1;
  for (int i = 0; i < d; ++i) diag = diag && dir[i] == dir[0];
  long nz = 0;
  for (int i = 0; i < d; ++i) nz += dir[i] != 0;
  if (diag) return "diagonal";
  if (nz == 1) return "axis";
  return "ray" + to_string(dir, d);
}

}  // namespace

double GreenTable::ray_monotonicity_defect(double r0) const {
  double worst = 0;
  for (const auto& [dir, v] : split_rays(*this))
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i].first > r0 && v[i].second > 0) worst = std::max(worst, (v[i + 1].second - v[i].second) / v[i].second);
  return worst;
}

double gamma_alpha(int d, double alpha) {
  const double a = std::min(alpha, 2.0);
  require(double(d) > a, "green", "d", "gamma_alpha needs d > alpha ^ 2");
  return std::exp(std::lgamma(0.5 * (d - a)) - a * std::log(2.0) - 0.5 * d * std::log(std::numbers::pi) -
                  std::lgamma(0.5 * a));
}

AsymptoticConstants asymptotic_constants(const StepDistribution& D) {
  AsymptoticConstants c;
  c.gammaAlpha = gamma_alpha(D.dim(), D.params().alpha);
  c.vAlpha = D.v_alpha();
  c.amplitude = c.gammaAlpha / c.vAlpha;
  return c;
}

TorusField green_neumann_field(const KernelLadder& ladder, double p, long N) {
  const auto& sym = ladder.symbol();
  Spectrum s;
  s.grid = ladder.grid();
  s.data.resize(sym.size());
  for (std::size_t i = 0; i < sym.size(); ++i) {
    const double q = p * sym[i];
    // sum_{n<=N} q^n
    const double v = std::fabs(1 - q) < 1e-9 ? double(N + 1) - 0.5 * N * (N + 1) * (1 - q) : (1 - std::pow(q, double(N + 1))) / (1 - q);
    s.data[i] = v;
  }
  TorusField f;
  f.grid = s.grid;
  f.values = fft_inverse(s);
  double wrap = 0, pn = 1;
  for (long n = 1; n <= N; ++n) {
    pn *= p;
    if (pn < 1e-300) break;
    wrap += pn * ladder.wrap_error(n);
    if (ladder.wrap_error(n) >= 1 && p == 1) {
      wrap = std::numeric_limits<double>::infinity();
      break;
    }
  }
  f.wrapError = wrap;
  return f;
}

TorusField green_spectral_field(const StepDistribution& D, double p, long M) {
  require(p >= 0 && p < 1, "green", "p", "spectral route needs 0 <= p < 1");
  require(M >= 4 && M % 2 == 0, "green", "M", "M must be an even integer >= 4");
  const Grid g{D.dim(), M};
  TorusField f;
  f.grid = g;
  f.values = fft_inverse(symmetric_spectrum(g, [&](const Momentum& k) { return 1 / (1 - p * D.hat(k)); }));
  return f;
}

GreenTable green_neumann(const StepDistribution& D, double p, const std::vector<Site>& xs, const GreenOptions& o) {
  require(p >= 0 && p <= 1, "green", "p", "fugacity must be in [0, 1]");
  const auto& par = D.params();
  if (p == 1)
    require(double(par.d) > par.alpha2(), "green", "d", "S_1 diverges for d <= alpha ^ 2 (non-summable)");
  GreenTable t;
  t.params = par;
  t.kind = D.kind();
  t.p = p;
  const bool renewal = D.kind() == DistKind::Subordinated && D.block()->separable() &&
                       std::fabs(par.alpha / 2 - std::round(par.alpha / 2)) > 1e-9;
  if (renewal) {
    const auto& opt = D.options();
    const TimeSum ts(renewal_sequence(*D.weights(), p, opt.N), opt.t_exact);
    // expansion error beyond t_exact, weighted by the renewal coefficients
    const double e = 0.5 * (par.d + opt.ell + 2);
    const double err = D.layer_error_constant() *
                       ts.apply([&](long t) { return t > opt.t_exact ? std::pow(double(t), -e) : 0.0; },
                                [&](double t) { return std::pow(t, -e); });
    for (const Site& x : xs) t.entries.push_back({x, ts.apply(*D.layers(), x), "Renewal", err});
    return t;
  }
  KernelLadder ladder(D, o.M, 1.0);
  long N;
  double tail;
  if (p < 1) {
    N = std::min<long>(o.max_terms, long(std::ceil(std::log(o.tolerance * (1 - p)) / std::log(p))));
    if (p == 0) N = 0;
    tail = p == 0 ? 0.0 : std::pow(p, double(N + 1)) / (1 - p);
  } else {
    // sup D^{*n} <= C n^{-d/a}: choose N for the tail sum C N^{1-d/a} / (d/a - 1)
    const double q = par.d / par.alpha2();
    const TorusField f64 = ladder.power(1) /* refresh below */;
    (void)f64;
    double C = 0;
    for (long n : {16L, 64L, 256L}) {
      const TorusField f = KernelLadder(D, o.M, 1.0).power(n);
      C = std::max(C, *std::max_element(f.values.begin(), f.values.end()) * std::pow(double(n), q));
    }
    N = std::min<long>(o.max_terms, long(std::ceil(std::pow(o.tolerance * (q - 1) / C, 1 / (1 - q)))));
    tail = C * std::pow(double(N), 1 - q) / (q - 1);
  }
  const TorusField S = green_neumann_field(ladder, p, N);
  for (const Site& x : xs) t.entries.push_back({x, S.at(x), "NeumannFFT", tail + S.wrapError});
  return t;
}

GreenTable green_spectral(const StepDistribution& D, double p, const std::vector<Site>& xs, long M) {
  const TorusField S = green_spectral_field(D, p, M);
  // aliasing: sum over images, bounded by the S_p-mass outside the box
  KernelLadder ladder(D, M, 1.0);
  double alias = 0, pn = 1;
  for (long n = 1; n < 100000; ++n) {
    pn *= p;
    if (pn < 1e-18) break;
    alias += pn * ladder.wrap_error(n);
  }
  GreenTable t;
  t.params = D.params();
  t.kind = D.kind();
  t.p = p;
  for (const Site& x : xs) t.entries.push_back({x, S.at(x), "SpectralQuad", alias});
  return t;
}

std::vector<Site> ray_sites(int d, long rmax, bool diagonal) {
  std::vector<Site> out;
  for (long r = 1; r <= rmax; ++r) out.push_back(diagonal ? diagonal_site(d, r) : axis_site(d, r));
  return out;
}

double structural_correction_exponent(double alpha) { return alpha < 4 ? std::fabs(2 - alpha) : 2.0; }

AsymptoticReport asymptotic_ratio(const GreenTable& table, const AsymptoticConstants& c, double kappa) {
  require(table.p == 1, "green", "p", "asymptotic ratio needs the p = 1 table");
  require(kappa > 0, "green", "kappa", "kappa must be positive");
  const auto& par = table.params;
  const double a2 = par.alpha2();
  AsymptoticReport rep;
  rep.constants = c;
  rep.kappa = kappa;
  rep.r_min = std::pow(par.L, 1 + kappa);
  rep.range_ok = true;
  rep.mu0 = structural_correction_exponent(par.alpha);
  double mu_sum = 0;
  int mu_n = 0;
  for (const auto& [dir, pts] : split_rays(table)) {
    RayFit f;
    f.ray = ray_name(dir, par.d);
    for (const auto& [r, v] : pts)
      if (r > rep.r_min) {
        f.r.push_back(r);
        f.ratio.push_back(v * std::pow(r, par.d - a2));
      }
    if (f.r.size() < 4 || f.r.back() < 10 * rep.r_min) {
      rep.range_ok = false;
      if (f.r.size() < 4) continue;
    }
    const double rmax = f.r.back();
    std::vector<double> xr, yr;
    for (std::size_t i = 0; i < f.r.size(); ++i)
      if (f.r[i] >= rmax / 10) {
        xr.push_back(f.r[i]);
        yr.push_back(f.ratio[i]);
      }
    f.series = fit_power_series(xr, yr, rep.mu0, 3, &f.fit_rms);
    f.limit = f.series[0];
    f.mu_fit = fit_power_correction(xr, yr, 0.05, a2).mu;
    f.relative_deviation = std::fabs(f.limit / c.amplitude - 1);
    f.last_point_deviation = std::fabs(f.ratio.back() / c.amplitude - 1);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < f.r.size(); ++i) {
      const double dev = std::fabs(f.ratio[i] - c.amplitude);
      if (dev > 1e-12 * c.amplitude) {
        lx.push_back(std::log(f.r[i]));
        ly.push_back(std::log(dev));
      }
    }
    if (lx.size() >= 3) {
      f.residual_mu = -linear_fit(lx, ly).slope;
      mu_sum += f.residual_mu;
      ++mu_n;
    }
    rep.worst_deviation = std::max(rep.worst_deviation, f.relative_deviation);
    rep.rays.push_back(std::move(f));
  }
  if (rep.rays.empty()) rep.range_ok = false;
  rep.mu = mu_n ? mu_sum / mu_n : 0.0;
  rep.constants.mu = rep.mu;
  return rep;
}

double lambda_constant(const GreenTable& table, const AsymptoticReport& fit) {
  const auto& par = table.params;
  const double a2 = par.alpha2();
  double lam = 0;
  for (const auto& e : table.entries) {
    if (is_origin(e.x)) continue;
    lam = std::max(lam, e.value * std::pow(bracket(e.x, par.d, par.L), par.d - a2));
  }
  for (const auto& f : fit.rays) {
    if (f.r.empty()) continue;
    auto model = [&](double r) {
      double v = 0, z = 1;
      for (double c : f.series) {
        v += c * z;
        z *= std::pow(r, -fit.mu0);
      }
      return v;
    };
    if (f.fit_rms > 1e-2 * std::fabs(f.limit))
      throw CertificateError("green", "envelope", f.fit_rms / std::fabs(f.limit), 1e-2,
                             "asymptotic envelope has not settled on ray " + f.ray);
    // beyond the table: r^{d - a} and <r>^{d - a} coincide, bound by the fitted envelope
    lam = std::max(lam, f.limit);
    for (int i = 0; i <= 64; ++i) lam = std::max(lam, model(f.r.back() * std::pow(2.0, i)));
  }
  return lam;
}

nlohmann::json AsymptoticReport::to_json() const {
  nlohmann::json j;
  j["gammaAlpha"] = constants.gammaAlpha;
  j["vAlpha"] = constants.vAlpha;
  j["amplitude"] = constants.amplitude;
  j["mu"] = mu;
  j["mu0"] = mu0;
  j["kappa"] = kappa;
  j["rMin"] = r_min;
  j["rangeOk"] = range_ok;
  j["worstDeviation"] = worst_deviation;
  for (const auto& f : rays) {
    nlohmann::json r;
    r["ray"] = f.ray;
    r["limit"] = f.limit;
    r["series"] = f.series;
    r["muFit"] = f.mu_fit;
    r["fitRms"] = f.fit_rms;
    r["relativeDeviation"] = f.relative_deviation;
    r["lastPointDeviation"] = f.last_point_deviation;
    r["residualMu"] = f.residual_mu;
    r["rMax"] = f.r.empty() ? 0.0 : f.r.back();
    j["rays"].push_back(r);
  }
  return j;
}

}  // namespace lacelab
