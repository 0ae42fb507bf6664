#include "lacelab/inequalities.hpp"

#include <cmath>
#include <limits>

#include "lacelab/errors.hpp"
#include "lacelab/torus.hpp"

namespace lacelab {

namespace {

constexpr const char* kMod = "models-mc";

// relative slack for exact (enumerated) comparisons
constexpr double kExactSlack = 1e-12;

std::vector<long> xvec(const Site& x, int d) { return std::vector<long>(x.begin(), x.begin() + d); }

}  // namespace

void InequalityReport::add(const Site& x, double l, double llo, double lhi, double r, double rlo, double rhi) {
  sites.push_back(x);
  lhs.push_back(l);
  lhs_lo.push_back(llo);
  lhs_hi.push_back(lhi);
  rhs.push_back(r);
  rhs_lo.push_back(rlo);
  rhs_hi.push_back(rhi);
  if (llo > rhi) ++pointwise_violations;
}

double InequalityReport::worst_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sites.size(); ++i) m = std::min(m, rhs_hi[i] - lhs_lo[i]);
  return m;
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["p"] = p;
  j["sites"] = sites.size();
  j["violations"] = violations;
  j["pointwiseViolations"] = pointwise_violations;
  j["level"] = level;
  j["worstMargin"] = sites.empty() ? 0.0 : worst_margin();
  if (!note.empty()) j["note"] = note;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (std::size_t i = 0; i < sites.size(); ++i)
    rows.push_back({{"x", xvec(sites[i], d)},
                    {"lhs", lhs[i]},
                    {"lhsLo", lhs_lo[i]},
                    {"lhsHi", lhs_hi[i]},
                    {"rhs", rhs[i]},
                    {"rhsLo", rhs_lo[i]},
                    {"rhsHi", rhs_hi[i]}});
  return j;
}

TorusField torus_rw_green(const PercResult& run, std::size_t layer) {
  require(run.config.boundary == Boundary::Periodic, kMod, "boundary", "S_p comparison needs the periodic model");
  const Grid& g = run.grid;
  TorusField q = make_field(g);
  double mass = 0;
  for (std::size_t i = 0; i < g.size(); ++i) mass += q.values[i] = run.bond_probability(layer, g.site(i));
  require(mass < 1, kMod, "p", "sum of bond probabilities >= 1; S_p diverges on the torus");
  Spectrum s = fft_forward(g, q.values);
  for (auto& z : s.data) z = 1.0 / (1.0 - z.real());
  TorusField S;
  S.grid = g;
  S.values = fft_inverse(s);
  return S;
}

namespace {

std::vector<InequalityReport> rw_bounds_at(const PercResult& run, std::size_t layer, const std::vector<Site>& xs,
                                           double z) {
  require(run.config.boundary == Boundary::Periodic, kMod, "boundary", "RW bounds are checked on the periodic model");
  require(layer < run.layers.size(), kMod, "p", "layer out of range");
  const Grid& g = run.grid;
  const int d = run.d;
  const double p = run.layers[layer].p;
  std::vector<double> G(g.size()), Glo(g.size()), Ghi(g.size()), q(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto e = run.estimate(layer, g.site(i), z);
    G[i] = e.mean;
    Glo[i] = e.ci.lo;
    Ghi[i] = e.ci.hi;
    q[i] = run.bond_probability(layer, g.site(i));
  }
  InequalityReport lower, upper, sp;
  lower.id = "RWbds.lower";
  upper.id = "RWbds.upper";
  sp.id = "RWbds.S";
  for (auto* r : {&lower, &upper, &sp}) {
    r->p = p;
    r->d = d;
  }
  double qsum = 0;
  for (double v : q) qsum += v;
  TorusField S;
  if (qsum < 1) S = torus_rw_green(run, layer);
  else sp.note = "skipped: sum of bond probabilities >= 1, S_p infinite";
  for (const Site& x : xs) {
    const std::size_t ix = g.index(x);
    const double dl = is_origin(x) ? 1.0 : 0.0;
    // q(x)[x != o] <= G(x) - delta
    lower.add(x, q[ix], q[ix], q[ix], G[ix] - dl, Glo[ix] - dl, Ghi[ix] - dl);
    // G(x) - delta <= sum_v q(v) G(x - v)
    double r = 0, rlo = 0, rhi = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (q[v] == 0) continue;
      const std::size_t j = g.index(x - g.site(v));
      r += q[v] * G[j];
      rlo += q[v] * Glo[j];
      rhi += q[v] * Ghi[j];
    }
    upper.add(x, G[ix] - dl, Glo[ix] - dl, Ghi[ix] - dl, r, rlo, rhi);
    if (qsum < 1) sp.add(x, G[ix], Glo[ix], Ghi[ix], S.values[ix], S.values[ix], S.values[ix]);
  }
  return {lower, upper, sp};
}

}  // namespace

std::vector<InequalityReport> check_rw_bounds(const PercResult& run, std::size_t layer, const std::vector<Site>& xs,
                                              double level) {
  auto reps = rw_bounds_at(run, layer, xs, 1.959963984540054);
  const auto sim = rw_bounds_at(run, layer, xs, bonferroni_z(level, xs.size()));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    reps[i].level = level;
    reps[i].violations = sim[i].pointwise_violations;
  }
  return reps;
}

InequalityReport check_saw_rw_bound(const SawResult& res) {
  InequalityReport r;
  r.id = "SAW<=S_p";
  r.p = res.p;
  r.d = res.d;
  for (const auto& [x, rw] : res.rw) {
    const double G = res.at(x);
    r.add(x, G, G, G, rw, rw, rw * (1 + kExactSlack));
  }
  r.violations = r.pointwise_violations;
  r.note = "both sides exact for the truncated step table and length <= " + std::to_string(res.N);
  return r;
}

namespace {

InequalityReport simon_lieb_at(const PercResult& run, std::size_t layer, const std::vector<Site>& xs, double ell,
                               double z) {
  require(run.config.boundary == Boundary::Periodic, kMod, "boundary",
          "Simon-Lieb is checked on the periodic model");
  require(layer < run.layers.size(), kMod, "p", "layer out of range");
  const Grid& g = run.grid;
  const int d = run.d;
  InequalityReport rep;
  rep.id = "SimonLieb";
  rep.p = run.layers[layer].p;
  rep.d = d;
  std::vector<double> G(g.size()), Glo(g.size()), Ghi(g.size()), q(g.size());
  std::vector<Site> site(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    site[i] = g.site(i);
    const auto e = run.estimate(layer, site[i], z);
    G[i] = e.mean;
    Glo[i] = e.ci.lo;
    Ghi[i] = e.ci.hi;
    q[i] = run.bond_probability(layer, site[i]);
  }
  for (const Site& x : xs) {
    const double l = ell > 0 ? ell : norm(x, d) / 3;
    if (!(l > 0) || !(double(sup_norm(x, d)) > l))
      throw DomainError(kMod, "ell", "cut radius must satisfy 0 < ell < |x|_inf (x = " + to_string(x, d) + ")");
    require(2 * l + 1 < double(g.M), kMod, "ell", "cut box does not fit in the torus");
    double r = 0, rlo = 0, rhi = 0;
    for (std::size_t u = 0; u < g.size(); ++u) {
      if (double(sup_norm(site[u], d)) > l || Ghi[u] == 0) continue;
      for (std::size_t v = 0; v < g.size(); ++v) {
        if (double(sup_norm(site[v], d)) <= l) continue;
        const double qq = q[g.index(site[v] - site[u])];
        if (qq == 0) continue;
        const std::size_t j = g.index(x - site[v]);
        r += G[u] * qq * G[j];
        rlo += Glo[u] * qq * Glo[j];
        rhi += Ghi[u] * qq * Ghi[j];
      }
    }
    const std::size_t ix = g.index(x);
    rep.add(x, G[ix], Glo[ix], Ghi[ix], r, rlo, rhi);
  }
  rep.note = ell > 0 ? "ell = " + std::to_string(ell) : "ell = |x|/3";
  return rep;
}

}  // namespace

InequalityReport check_simon_lieb(const PercResult& run, std::size_t layer, const std::vector<Site>& xs, double ell,
                                  double level) {
  auto rep = simon_lieb_at(run, layer, xs, ell, 1.959963984540054);
  rep.level = level;
  rep.violations = simon_lieb_at(run, layer, xs, ell, bonferroni_z(level, xs.size())).pointwise_violations;
  return rep;
}

InequalityReport check_simon_lieb_exact(const BondGraph& g) {
  const auto tau = exact_connections(g);
  std::vector<std::vector<double>> q(g.n, std::vector<double>(g.n, 0.0));
  for (const auto& b : g.bonds) {
    q[b.u][b.v] = 1 - (1 - q[b.u][b.v]) * (1 - b.q);
    q[b.v][b.u] = q[b.u][b.v];
  }
  InequalityReport rep;
  rep.id = "SimonLieb.exact";
  rep.d = 1;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int l = 1; l < std::abs(b - a); ++l) {
        double rhs = 0;
        for (int u = 0; u < g.n; ++u) {
          if (std::abs(u - a) > l) continue;
          for (int v = 0; v < g.n; ++v)
            if (std::abs(v - a) > l) rhs += tau[a][u] * q[u][v] * tau[v][b];
        }
        rep.add(make_site({a, b, l}), tau[a][b], tau[a][b], tau[a][b], rhs, rhs, rhs * (1 + kExactSlack));
      }
  rep.violations = rep.pointwise_violations;
  rep.note = "rows are (a, b, ell); exhaustive enumeration of " + std::to_string(g.bonds.size()) + " bonds";
  return rep;
}

nlohmann::json DecayReport::to_json() const {
  nlohmann::json j{{"p", p},
                   {"exponent", exponent},
                   {"exponentStderr", exponent_stderr},
                   {"expected", expected},
                   {"exponentOk", exponent_ok},
                   {"rLo", r_lo},
                   {"rHi", r_hi},
                   {"points", points},
                   {"insufficientSignal", insufficient_signal},
                   {"subcritical", subcritical},
                   {"meanClusterSize", mean_cluster_size},
                   {"ratioMin", ratio_min},
                   {"ratioMax", ratio_max},
                   {"c1", c1},
                   {"c2", c2},
                   {"sandwichViolations", sandwich_violations},
                   {"sandwichOk", sandwich_ok}};
  return j;
}

DecayReport check_subcritical_decay(const PercResult& run, std::size_t layer, double tolerance, double max_rel_ci,
                                    double level) {
  require(run.config.boundary == Boundary::Periodic, kMod, "boundary", "decay fit uses the periodic model");
  require(layer < run.layers.size(), kMod, "p", "layer out of range");
  const int d = run.d;
  const auto& P = run.params;
  DecayReport rep;
  rep.p = run.layers[layer].p;
  rep.expected = d + P.alpha;
  rep.mean_cluster_size = run.layers[layer].mean_cluster_size(run.config.samples);
  rep.subcritical = rep.mean_cluster_size * 100 < double(run.grid.size());
  const TorusField S = torus_rw_green(run, layer);
  const long r0 = std::max(2L, long(std::ceil(2 * P.L)));
  std::vector<double> lx, ly;
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.c1 = rep.p;
  for (long r = r0; r <= run.grid.M / 4; ++r) {
    const Site x = axis_site(d, r);
    const auto e = run.estimate(layer, x);
    if (!(e.mean > 0) || (e.ci.hi - e.ci.lo) / 2 > max_rel_ci * e.mean) break;
    const double Dx = run.D(x);
    rep.r.push_back(double(r));
    rep.G.push_back(e.mean);
    rep.G_lo.push_back(e.ci.lo);
    rep.G_hi.push_back(e.ci.hi);
    rep.D.push_back(Dx);
    rep.S.push_back(S.at(x));
    lx.push_back(std::log(double(r)));
    ly.push_back(std::log(e.mean));
    rep.ratio_min = std::min(rep.ratio_min, e.mean / Dx);
    rep.ratio_max = std::max(rep.ratio_max, e.mean / Dx);
    rep.c2 = std::max(rep.c2, S.at(x) / Dx);
  }
  rep.points = int(lx.size());
  if (rep.points < 4) {
    rep.insufficient_signal = true;
    return rep;
  }
  rep.r_lo = long(rep.r.front());
  rep.r_hi = long(rep.r.back());
  const auto fit = linear_fit(lx, ly);
  rep.exponent = -fit.slope;
  rep.exponent_stderr = fit.slope_stderr;
  rep.exponent_ok = std::fabs(rep.exponent - rep.expected) <= tolerance;
  const double zs = bonferroni_z(level, rep.r.size());
  for (std::size_t i = 0; i < rep.r.size(); ++i) {
    const double q = std::min(rep.p * rep.D[i], 1.0);
    const auto e = run.estimate(layer, axis_site(d, long(rep.r[i])), zs);
    if (e.ci.hi < q || e.ci.lo > rep.S[i]) ++rep.sandwich_violations;
  }
  rep.sandwich_ok = rep.sandwich_violations == 0;
  return rep;
}

}  // namespace lacelab
