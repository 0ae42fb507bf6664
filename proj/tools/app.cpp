#include "app.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <sstream>

#include "lacelab/acceptance.hpp"
#include "lacelab/decomposition.hpp"
#include "lacelab/edgeworth.hpp"
#include "lacelab/errors.hpp"
#include "lacelab/green.hpp"
#include "lacelab/inequalities.hpp"
#include "lacelab/io.hpp"
#include "lacelab/lace.hpp"
#include "lacelab/torus.hpp"

namespace lacelab::app {

namespace {

using json = nlohmann::json;

enum class Type { Int, Real, Text, Flag, RealList, IntList };

struct ParamSpec {
  std::string name;
  Type type;
  json fallback;
  std::string help;
};

// Merged parameters: defaults < config file < flags.
class Params {
 public:
  explicit Params(json j) : j_(std::move(j)) {}
  const json& raw() const { return j_; }

  long integer(const std::string& k) const {
    const json& v = at(k);
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long>();
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return long(v.get<double>());
    throw DomainError("cli", k, "expected an integer");
  }
  double real(const std::string& k) const {
    const json& v = at(k);
    if (!v.is_number()) throw DomainError("cli", k, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw DomainError("cli", k, "expected a finite number");
    return x;
  }
  std::string text(const std::string& k) const {
    const json& v = at(k);
    if (!v.is_string()) throw DomainError("cli", k, "expected a string");
    return v.get<std::string>();
  }
  bool flag(const std::string& k) const {
    const json& v = at(k);
    if (!v.is_boolean()) throw DomainError("cli", k, "expected true or false");
    return v.get<bool>();
  }
  std::vector<double> reals(const std::string& k) const {
    const json& v = at(k);
    std::vector<double> out;
    if (v.is_number()) out.push_back(v.get<double>());
    else if (v.is_array())
      for (const auto& e : v) {
        if (!e.is_number()) throw DomainError("cli", k, "expected a list of numbers");
        out.push_back(e.get<double>());
      }
    else throw DomainError("cli", k, "expected a list of numbers");
    for (double x : out)
      if (!std::isfinite(x)) throw DomainError("cli", k, "expected finite numbers");
    return out;
  }
  std::vector<long> integers(const std::string& k) const {
    std::vector<long> out;
    for (double x : reals(k)) {
      if (std::floor(x) != x) throw DomainError("cli", k, "expected a list of integers");
      out.push_back(long(x));
    }
    return out;
  }

 private:
  const json& at(const std::string& k) const {
    auto it = j_.find(k);
    if (it == j_.end()) throw DomainError("cli", k, "missing parameter");
    return *it;
  }
  json j_;
};

json parse_value(const std::string& name, Type t, const std::string& s) {
  auto number = [&](const std::string& tok) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw DomainError("cli", name, "cannot parse '" + tok + "' as a number");
    }
    if (pos != tok.size()) throw DomainError("cli", name, "cannot parse '" + tok + "' as a number");
    return v;
  };
  switch (t) {
    case Type::Int: {
      const double v = number(s);
      if (std::floor(v) != v) throw DomainError("cli", name, "expected an integer");
      return long(v);
    }
    case Type::Real:
      return number(s);
    case Type::Text:
      return s;
    case Type::Flag:
      if (s == "true" || s == "1" || s.empty()) return true;
      if (s == "false" || s == "0") return false;
      throw DomainError("cli", name, "expected true or false");
    case Type::RealList:
    case Type::IntList: {
      json arr = json::array();
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) arr.push_back(t == Type::IntList ? parse_value(name, Type::Int, tok) : json(number(tok)));
      return arr;
    }
  }
  return nullptr;
}

struct Context {
  std::string command;
  Params params;
  std::string hash;
  std::filesystem::path dir;
  json artifacts = json::array();
  std::vector<std::string> warnings;

  std::filesystem::path path(const std::string& suffix) const { return dir / (command + "-" + hash + suffix); }
  void csv(const CsvTable& t, const std::string& suffix, json meta) {
    meta["command"] = command;
    meta["configHash"] = hash;
    const auto p = path(suffix);
    t.write(p, meta);
    artifacts.push_back(p.string());
    artifacts.push_back(p.string() + ".meta.json");
  }
};

struct Outcome {
  json summary;
  bool verified = true;  // false: exit code 1
};

// -- shared builders --------------------------------------------------------

const std::vector<ParamSpec> kLattice{
    {"kind", Type::Text, "subordinated", "step distribution: subordinated or power-law"},
    {"d", Type::Int, 1, "dimension (1..4)"},
    {"alpha", Type::Real, 1.5, "tail exponent alpha > 0, alpha != 2"},
    {"L", Type::Real, 1.0, "spread-out parameter L >= 1"},
    {"profile", Type::Text, "uniform", "block profile of the subordinated walk: uniform, tent, dome"}};

LatticeParams lattice(const Params& p) {
  LatticeParams lp{int(p.integer("d")), p.real("alpha"), p.real("L")};
  lp.validate();
  return lp;
}

StepDistribution distribution(const Params& p) {
  const LatticeParams lp = lattice(p);
  const DistKind kind = dist_kind_from(p.text("kind"));
  if (kind == DistKind::PowerLaw) return build_power_law(lp);
  SubordinatedOptions o;
  o.profile = Profile::by_name(p.text("profile"));
  return build_subordinated(lp, o);
}

std::vector<std::string> coord_header(int d) {
  std::vector<std::string> h;
  for (int i = 1; i <= d; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

std::vector<std::string> coords(const Site& x, int d) {
  std::vector<std::string> c;
  for (int i = 0; i < d; ++i) c.push_back(fmt(x[i]));
  return c;
}

template <class... T>
std::vector<std::string> cat(std::vector<std::string> a, T... rest) {
  (a.push_back(rest), ...);
  return a;
}

json column(const std::string& name, const std::string& meaning) { return {{"name", name}, {"meaning", meaning}}; }

json coord_columns(int d) {
  json c = json::array();
  for (int i = 1; i <= d; ++i) c.push_back(column("x" + std::to_string(i), "lattice coordinate (units of the lattice spacing)"));
  return c;
}

// -- commands ---------------------------------------------------------------

Outcome cmd_dist(Context& ctx) {
  const Params& p = ctx.params;
  const auto D = distribution(p);
  const int d = D.dim();
  long R = p.integer("rmax");
  if (R <= 0) R = long(std::ceil(4 * D.params().L));
  require(R <= 4096 && (d == 1 || R <= 256) && (d <= 2 || R <= 32), "cli", "rmax", "table radius too large for d");
  CsvTable t(cat(coord_header(d), "D"));
  for_each_in_box(d, R, [&](const Site& x) {
    if (canonical(x, d) == x) t.row(cat(coords(x, d), fmt(D(x))));
  });
  json cols = coord_columns(d);
  cols.push_back(column("D", "one-step probability D(x); listed for canonical sites x1 >= ... >= xd >= 0"));
  ctx.csv(t, ".csv", {{"columns", cols}, {"normalization", "sum_x D(x) = 1"}});
  json s = D.metadata();
  s["massOutsideTable"] = D.mass_outside_box(R);
  return {s};
}

Outcome cmd_kernel(Context& ctx) {
  const Params& p = ctx.params;
  const auto D = distribution(p);
  const int d = D.dim();
  require(d <= 3, "cli", "d", "kernel bounds run for d <= 3");
  long M = p.integer("M");
  if (M <= 0) M = d == 1 ? 4096 : (d == 2 ? 256 : 64);
  const long nmax = p.integer("nmax");
  require(nmax >= 4 && nmax <= 4096, "cli", "nmax", "nmax must lie in [4, 4096]");
  std::vector<long> ns;
  for (double t = 1; t <= double(nmax) + 1e-9; t *= std::sqrt(2.0))
    if (ns.empty() || ns.back() != std::lround(t)) ns.push_back(std::lround(t));
  const KernelLadder ladder(D, M, 1.0);
  const auto xs = log_grid(d, M / 4);
  const auto pairs = admissible_pairs(d, xs, log_grid(d, M / 16));
  CsvTable t({"bound", "n", "sup", "wrap"});
  json s = json::array();
  for (const auto& rep : {verify_Dbd(ladder, ns), verify_HK1(ladder, ns, xs), verify_HK2(ladder, ns, pairs)}) {
    for (const auto& row : rep.rows) t.row({rep.name, fmt(row.n), fmt(row.sup), fmt(row.wrap)});
    s.push_back({{"bound", rep.name},
                 {"sup", rep.overall_sup},
                 {"finite", rep.finite},
                 {"kendallTau", rep.trend.tau},
                 {"pIncreasing", rep.trend.p_increasing},
                 {"stable", rep.stable}});
  }
  ctx.csv(t, ".csv",
          {{"columns",
            {column("bound", "Dbd, HK1 or HK2"), column("n", "number of steps"),
             column("sup", "supremum of the normalized ratio (dimensionless)"),
             column("wrap", "certified torus wrap error of D^{*n}")}},
           {"M", M}});
  return {{{"distribution", D.metadata()}, {"M", M}, {"bounds", s}}};
}

std::vector<Site> green_sites(int d, long rmax) {
  std::vector<Site> xs = ray_sites(d, rmax, false);
  if (d > 1) {
    const auto xd = ray_sites(d, rmax, true);
    xs.insert(xs.end(), xd.begin(), xd.end());
  }
  return xs;
}

Outcome green_like(Context& ctx, bool asymptote) {
  const Params& p = ctx.params;
  const auto D = distribution(p);
  const int d = D.dim();
  const double prob = asymptote ? 1.0 : p.real("p");
  require(prob >= 0 && prob <= 1, "cli", "p", "p must lie in [0, 1]");
  GreenOptions o;
  o.M = p.integer("M");
  o.tolerance = p.real("tolerance");
  long rmax = p.integer("rmax");
  if (rmax <= 0) rmax = o.M / 2;
  require(rmax >= 2, "cli", "rmax", "rmax must be >= 2");
  const auto xs = green_sites(d, rmax);
  const std::string method = asymptote ? "neumann" : p.text("method");
  GreenTable table;
  if (method == "spectral") {
    require(prob < 1, "cli", "method", "the spectral route needs p < 1");
    table = green_spectral(D, prob, xs, o.M);
  } else if (method == "neumann" || method == "auto") {
    table = green_neumann(D, prob, xs, o);
  } else {
    throw DomainError("cli", "method", "method must be auto, neumann or spectral");
  }
  const double a = D.params().alpha2();
  CsvTable t(cat(coord_header(d), "r", "S", "S_times_r^(d-a)", "err", "method"));
  for (const auto& e : table.entries) {
    const double r = norm(e.x, d);
    t.row(cat(coords(e.x, d), fmt(r), fmt(e.value), fmt(r > 0 ? e.value * std::pow(r, d - a) : 0.0), fmt(e.err),
              e.method));
  }
  json cols = coord_columns(d);
  for (auto c : {column("r", "Euclidean |x|"), column("S", "S_p(x) = sum_n p^n D^{*n}(x)"),
                 column("S_times_r^(d-a)", "S_p(x) |x|^{d - alpha^2}; tends to gamma/v at p = 1"),
                 column("err", "certified absolute error bound"), column("method", "evaluation route")})
    cols.push_back(c);
  ctx.csv(t, ".csv", {{"columns", cols}, {"p", prob}});
  json s{{"distribution", D.metadata()}, {"p", prob}, {"sites", table.entries.size()}};
  if (prob == 1 && d > a) {
    const auto c = asymptotic_constants(D);
    const auto rep = asymptotic_ratio(table, c);
    s["asymptote"] = rep.to_json();
    double est = 0;
    for (const auto& ray : rep.rays) est += ray.limit / double(rep.rays.size());
    s["amplitudeEstimate"] = est;
    s["amplitude"] = c.amplitude;
    try {
      s["lambda"] = lambda_constant(table, rep);
    } catch (const CertificateError& e) {
      s["lambda"] = nullptr;
      ctx.warnings.push_back(std::string("lambda not certified: ") + e.what());
    }
  }
  if (asymptote) {
    json dec = json::array();
    for (long r : p.integers("decompose")) dec.push_back(decompose_error(D, axis_site(d, r)).to_json());
    s["decomposition"] = dec;
  }
  return {s};
}

Outcome cmd_lace(Context& ctx) {
  const Params& p = ctx.params;
  PiFunction Pi;
  const std::string file = p.text("pi");
  if (!file.empty()) {
    Pi = PiFunction::from_json(read_json(file));
  } else {
    SyntheticPiSpec s;
    s.d = int(p.integer("d"));
    s.alpha = p.real("alpha");
    s.L = p.real("L");
    s.c = p.real("c");
    s.u = p.real("u");
    s.radius = p.integer("radius");
    s.alternating = p.flag("alternating");
    s.model = lace_model_from(p.text("model"));
    s.ell = model_ell(s.model);
    Pi = synthetic_pi(s);
  }
  json q = p.raw();
  q["d"] = Pi.d;
  const auto D = distribution(Params(q));
  const double pc = critical_point(Pi);
  double prob = p.real("p");
  if (prob <= 0) prob = pc;
  LaceOptions o;
  o.M = p.integer("M");
  const auto sys = make_lace_system(D, Pi, prob, o);
  const auto h = build_H_and_A(sys, o);
  const int d = Pi.d;
  CsvTable t(cat(coord_header(d), "Pi", "E", "E_star_S", "H"));
  const EReport e = build_E(sys, o);
  for (long r = 0; r <= o.M / 2; ++r) {
    const Site x = axis_site(d, r);
    t.row(cat(coords(x, d), fmt(Pi.at(x)), fmt(e.E.at(x)), fmt(h.ES.at(x)), fmt(h.H.at(x))));
  }
  json cols = coord_columns(d);
  for (auto c : {column("Pi", "lace coefficient Pi_p(x)"), column("E", "correction field E_{p,q,r}(x)"),
                 column("E_star_S", "(E * S_q)(x)"), column("H", "resummed prefactor H_p(x), G = H * S_q")})
    cols.push_back(c);
  ctx.csv(t, ".csv", {{"columns", cols}, {"torusSide", o.M}});
  json s{{"pi", {{"d", Pi.d}, {"model", to_string(Pi.model)}, {"hatZero", Pi.hat_zero()}, {"l1", Pi.l1_norm()}}},
         {"pc", pc},
         {"p", sys.qr.p},
         {"q", sys.qr.q},
         {"r", sys.qr.r},
         {"chi", sys.qr.critical ? json("inf") : json(sys.qr.chi)},
         {"nablaHat", sys.qr.nablaHat},
         {"A_from_H", h.A_from_H},
         {"A_pc_over_r", h.A_pc_over_r},
         {"A_formula", h.A_formula},
         {"ES_l1", h.es_l1},
         {"rho", h.rho},
         {"terms", h.terms}};
  if (prob < pc) {
    const auto lg = solve_G_from_lace(D, Pi, prob, {Site{}}, o.M);
    s["chiTorus"] = lg.chi_torus;
    s["chiRep"] = lg.chi_rep;
    s["fixedPointResidual"] = lg.residual;
  }
  return {s};
}

Outcome cmd_perc(Context& ctx) {
  const Params& p = ctx.params;
  const auto D = distribution(p);
  const int d = D.dim();
  PercConfig cfg;
  cfg.ps = p.reals("p");
  cfg.M = p.integer("M");
  cfg.samples = p.integer("samples");
  cfg.seed = std::uint64_t(p.integer("seed"));
  cfg.boundary = boundary_from(p.text("boundary"));
  const auto run = perc_sample(D, cfg);
  for (const auto& w : run.warnings) ctx.warnings.push_back(w);
  long rmax = p.integer("rmax");
  if (rmax <= 0) rmax = cfg.M / 2 - 1;
  require(rmax < cfg.M / 2 + (cfg.boundary == Boundary::Free), "cli", "rmax", "rmax must be < M/2");
  std::vector<Site> xs;
  for (long r = 0; r <= rmax; ++r) xs.push_back(axis_site(d, r));
  CsvTable t(cat(std::vector<std::string>{"p"}, "x", "estimate", "ci_lo", "ci_hi"));
  for (std::size_t l = 0; l < run.layers.size(); ++l)
    for (const Site& x : xs) {
      const auto e = run.estimate(l, x);
      t.row({fmt(run.layers[l].p), fmt(x[0]), fmt(e.mean), fmt(e.ci.lo), fmt(e.ci.hi)});
    }
  ctx.csv(t, ".csv",
          {{"columns",
            {column("p", "percolation parameter"), column("x", "site (r, 0, ..., 0)"),
             column("estimate", "connection probability P(o <-> x)"), column("ci_lo", "95% lower limit"),
             column("ci_hi", "95% upper limit")}},
           {"boundary", to_string(cfg.boundary)}});
  json s = run.summary();
  if (cfg.boundary == Boundary::Periodic) {
    json reps = json::array();
    std::vector<Site> far;
    for (const Site& x : xs)
      if (x[0] >= 3) far.push_back(x);
    for (std::size_t l = 0; l < run.layers.size(); ++l) {
      for (const auto& r : check_rw_bounds(run, l, xs))
        reps.push_back({{"id", r.id}, {"p", r.p}, {"violations", r.violations}, {"note", r.note}});
      if (!far.empty()) {
        const auto sl = check_simon_lieb(run, l, far);
        reps.push_back({{"id", sl.id}, {"p", sl.p}, {"violations", sl.violations}});
      }
      double qsum = 0;
      for (std::size_t i = 0; i < run.grid.size(); ++i) qsum += run.bond_probability(l, run.grid.site(i));
      if (qsum < 1) s["decay"].push_back(check_subcritical_decay(run, l).to_json());
    }
    s["inequalities"] = reps;
  }
  return {s};
}

Outcome cmd_saw(Context& ctx) {
  const Params& p = ctx.params;
  const auto D = distribution(p);
  SawEnumConfig cfg{truncate_step(D, p.integer("rcut")), int(p.integer("N")), p.real("p")};
  const auto res = saw_enumerate(cfg);
  const int d = D.dim();
  CsvTable t(cat(coord_header(d), "G", "rw"));
  for (const auto& [x, v] : res.rw) t.row(cat(coords(x, d), fmt(res.at(x)), fmt(v)));
  json cols = coord_columns(d);
  cols.push_back(column("G", "SAW two-point function, walks of length <= N"));
  cols.push_back(column("rw", "same sum without self-avoidance"));
  ctx.csv(t, ".csv", {{"columns", cols}, {"Rcut", cfg.step.R}});
  const auto chk = check_saw_rw_bound(res);
  return {{{"N", res.N},
           {"p", res.p},
           {"Rcut", cfg.step.R},
           {"walks", res.walks},
           {"lengthTail", res.length_tail},
           {"truncationMass", res.truncation_mass},
           {"G_o", res.at(Site{})},
           {"sawBelowRw", chk.violations == 0}}};
}

Outcome cmd_edgeworth(Context& ctx) {
  const Params& p = ctx.params;
  const int d = int(p.integer("d"));
  require(d == 1 || d == 2, "edgeworth", "d", "exact verification supports d in {1,2}");
  const BlockDistribution U(d, p.real("L"), Profile::by_name(p.text("profile")));
  const long t0 = p.integer("tmin"), t1 = p.integer("tmax");
  require(t0 >= 1 && t1 >= 4 * t0, "edgeworth", "tmax", "need 1 <= tmin and tmax >= 4 tmin");
  std::vector<long> ts;
  for (double t = double(t0); t <= double(t1) + 1e-9; t *= std::pow(2.0, 0.25))
    if (ts.empty() || ts.back() != std::lround(t)) ts.push_back(std::lround(t));
  const auto rep = verify_theorem_A1(U, int(p.integer("ell")), ts);
  CsvTable t({"t", "sup_error", "weighted_sup_error"});
  for (const auto& r : rep.rows) t.row({fmt(r.t), fmt(r.sup_error), fmt(r.weighted_sup_error)});
  ctx.csv(t, ".csv",
          {{"columns",
            {column("t", "number of block steps"), column("sup_error", "sup_x |U^{*t}(x) - expansion|"),
             column("weighted_sup_error", "sup_x (1 + |x/sqrt(sigma^2 t)|^{l+2}) |U^{*t}(x) - expansion|")}}});
  return {{{"d", d},
           {"ell", rep.ell},
           {"slope", rep.slope},
           {"slopeStderr", rep.slope_stderr},
           {"expected", rep.expected},
           {"boundOk", rep.bound_ok},
           {"constant", rep.constant}}};
}

Outcome cmd_verify(Context& ctx, std::ostream& out) {
  const Params& p = ctx.params;
  const auto profile = suite_profile_from(p.text("profile"));
  std::vector<int> ids;
  for (long i : p.integers("criteria")) ids.push_back(int(i));
  json lines = json::array(), failures = json::array();
  auto emit = [&](const CriterionResult& r) {
    out << r.line() << "\n" << std::flush;
    lines.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"module", r.module},
                     {"seconds", r.seconds}});
    if (!r.pass) failures.push_back({{"id", r.id}, {"name", r.name}, {"module", r.module.empty() ? "acceptance" : r.module}});
  };
  if (ids.empty())
    for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
  for (int i : ids) emit(run_criterion(i, profile));
  const std::string file = p.text("pi");
  if (!file.empty()) {
    // user-supplied Pi table through the lace pipeline
    CriterionResult r;
    r.id = 0;
    r.name = "user-pi";
    try {
      const auto Pi = PiFunction::from_json(read_json(file));
      const auto D = build_power_law({Pi.d, p.real("alpha"), p.real("L")});
      LaceOptions o;
      o.M = Pi.d == 1 ? 1024 : (Pi.d == 2 ? 128 : 32);
      const auto sys = make_lace_system(D, Pi, critical_point(Pi), o);
      const auto h = build_H_and_A(sys, o);
      r.pass = std::fabs(h.A_from_H - h.A_pc_over_r) <= 1e-10;
      r.summary = "A from H " + fmt(h.A_from_H) + ", p_c/r " + fmt(h.A_pc_over_r);
    } catch (const DomainError& e) {
      r.module = e.module();
      r.summary = "domain error (" + e.field() + "): " + e.what();
    } catch (const CertificateError& e) {
      r.module = e.module();
      r.summary = "certificate failed (" + e.quantity() + "): " + e.what();
    }
    emit(r);
  }
  write_json(ctx.path(".lines.json"), lines);
  ctx.artifacts.push_back(ctx.path(".lines.json").string());
  const bool ok = failures.empty();
  out << (ok ? "ALL PASS" : "FAILURES: " + std::to_string(failures.size())) << "\n";
  // timings are not part of the summary so that reruns compare equal
  json summary{{"profile", p.text("profile")}, {"passed", ok}, {"failures", failures}};
  json crit = json::array();
  for (const auto& l : lines) crit.push_back({{"id", l["id"]}, {"pass", l["pass"]}, {"summary", l["summary"]}});
  summary["criteria"] = crit;
  return {summary, ok};
}

// -- command table ----------------------------------------------------------

struct Command {
  std::string name, help;
  std::vector<ParamSpec> specs;
  std::function<Outcome(Context&, std::ostream&)> fn;
};

std::vector<ParamSpec> with_lattice(std::vector<ParamSpec> extra) {
  std::vector<ParamSpec> s = kLattice;
  s.insert(s.end(), extra.begin(), extra.end());
  return s;
}

std::vector<Command> commands() {
  return {
      {"dist", "build a step distribution and tabulate D",
       with_lattice({{"rmax", Type::Int, 0, "table radius (0: ceil(4L))"}}),
       [](Context& c, std::ostream&) { return cmd_dist(c); }},
      {"kernel", "heat-kernel bound suprema for D^{*n}",
       with_lattice({{"M", Type::Int, 0, "torus side (0: by dimension)"}, {"nmax", Type::Int, 64, "largest n"}}),
       [](Context& c, std::ostream&) { return cmd_kernel(c); }},
      {"green", "random-walk Green's function S_p on the axis and diagonal rays",
       with_lattice({{"p", Type::Real, 1.0, "p in [0, 1]"},
                     {"M", Type::Int, 128, "torus side for the FFT routes"},
                     {"rmax", Type::Int, 0, "largest ray coordinate (0: M/2)"},
                     {"method", Type::Text, "auto", "auto, neumann or spectral"},
                     {"tolerance", Type::Real, 1e-10, "truncation tolerance"}}),
       [](Context& c, std::ostream&) { return green_like(c, false); }},
      {"asymptote", "critical Green's function, amplitude fit and error decomposition",
       with_lattice({{"M", Type::Int, 256, "torus side for the FFT routes"},
                     {"rmax", Type::Int, 0, "largest ray coordinate (0: M/2)"},
                     {"tolerance", Type::Real, 1e-10, "truncation tolerance"},
                     {"decompose", Type::IntList, json::array(), "radii for the error decomposition (d <= 3)"}}),
       [](Context& c, std::ostream&) { return green_like(c, true); }},
      {"lace", "lace-expansion algebra for a Pi table (file or synthetic)",
       with_lattice({{"pi", Type::Text, "", "Pi table JSON (empty: synthetic)"},
                     {"model", Type::Text, "SAW", "SAW, percolation or RW (sets the envelope power)"},
                     {"c", Type::Real, 0.01, "synthetic envelope amplitude"},
                     {"u", Type::Real, 0.0, "synthetic Pi(o) - 1"},
                     {"radius", Type::Int, 3, "synthetic support radius"},
                     {"alternating", Type::Flag, false, "alternate signs of the synthetic entries"},
                     {"p", Type::Real, 0.0, "p (<= 0: p_c)"},
                     {"M", Type::Int, 64, "torus side"}}),
       [](Context& c, std::ostream&) { return cmd_lace(c); }},
      {"perc", "long-range bond percolation Monte Carlo and inequality checks",
       with_lattice({{"p", Type::RealList, json::array({0.3}), "comma-separated p grid (coupled)"},
                     {"M", Type::Int, 256, "box side"},
                     {"samples", Type::Int, 10000, "samples"},
                     {"seed", Type::Int, 1, "seed"},
                     {"boundary", Type::Text, "periodic", "periodic or free"},
                     {"rmax", Type::Int, 0, "largest axis distance reported (0: M/2 - 1)"}}),
       [](Context& c, std::ostream&) { return cmd_perc(c); }},
      {"saw", "self-avoiding walk two-point function by exact enumeration",
       with_lattice({{"N", Type::Int, 4, "maximal walk length"},
                     {"rcut", Type::Int, 0, "step cutoff (0: ceil(3L))"},
                     {"p", Type::Real, 0.5, "fugacity"}}),
       [](Context& c, std::ostream&) { return cmd_saw(c); }},
      {"edgeworth", "exact block-walk convolutions against the Edgeworth expansion",
       {{"d", Type::Int, 1, "dimension (1 or 2)"},
        {"L", Type::Real, 3.0, "block radius L"},
        {"profile", Type::Text, "uniform", "uniform, tent or dome"},
        {"ell", Type::Int, 2, "expansion order"},
        {"tmin", Type::Int, 4, "first t"},
        {"tmax", Type::Int, 256, "last t"}},
       [](Context& c, std::ostream&) { return cmd_edgeworth(c); }},
      {"verify-all", "acceptance suite, one line per criterion",
       {{"profile", Type::Text, "quick", "quick or full"},
        {"criteria", Type::IntList, json::array(), "subset of criterion ids (default all)"},
        {"pi", Type::Text, "", "extra check: run this Pi table through the lace pipeline"},
        {"alpha", Type::Real, 1.5, "alpha for the extra Pi check"},
        {"L", Type::Real, 2.0, "L for the extra Pi check"}},
       [](Context& c, std::ostream& out) { return cmd_verify(c, out); }},
  };
}

json error_json(const std::string& kind, const std::string& module, const std::string& field, const std::string& msg) {
  return {{"error", {{"kind", kind}, {"module", module}, {"field", field}, {"message", msg}}}};
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"lacelab: long-range random walks, Green's functions and lace-expansion checks"};
  cli.require_subcommand(1);
  std::string config_path;
  long workers = 1;
  cli.add_option("--config", config_path, "JSON config file; flags override its values");
  cli.add_option("--workers", workers, "worker count (results are reproducible at 1)");
  const auto cmds = commands();
  std::vector<std::map<std::string, std::string>> raw(cmds.size());
  std::vector<std::map<std::string, CLI::Option*>> opts(cmds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto* sub = cli.add_subcommand(cmds[i].name, cmds[i].help);
    for (const auto& s : cmds[i].specs) {
      if (s.type == Type::Flag) {
        opts[i][s.name] = sub->add_flag("--" + s.name + "{true}", raw[i][s.name], s.help);
      } else {
        opts[i][s.name] = sub->add_option("--" + s.name, raw[i][s.name], s.help + " [" + s.fallback.dump() + "]");
      }
    }
    subs.push_back(sub);
  }
  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << cli.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string field = "arguments";
    const std::string msg = e.what();
    const auto pos = msg.find("--");
    if (pos != std::string::npos) field = msg.substr(pos + 2, msg.find_first_of(" :", pos) - pos - 2);
    err << error_json("usage", "cli", field, msg).dump() << "\n";
    return 2;
  }
  std::size_t ci = 0;
  while (ci < subs.size() && !subs[ci]->parsed()) ++ci;
  const Command& cmd = cmds[ci];
  try {
    require(workers >= 1, "cli", "workers", "worker count must be >= 1");
    json params = json::object();
    for (const auto& s : cmd.specs) params[s.name] = s.fallback;
    if (!config_path.empty()) {
      const json file = read_json(config_path);
      if (!file.is_object()) throw DomainError("cli", "config", "config must be a JSON object");
      if (file.contains("command") && file["command"] != cmd.name)
        throw DomainError("cli", "command", "config is for command '" + file["command"].dump() + "'");
      const json& src = file.contains("parameters") ? file["parameters"] : file;
      for (const auto& [k, v] : src.items()) {
        if (k == "command") continue;
        if (!params.contains(k)) throw DomainError("cli", k, "unknown parameter for " + cmd.name);
        params[k] = v;
      }
    }
    for (const auto& s : cmd.specs)
      if (opts[ci].at(s.name)->count() > 0) params[s.name] = parse_value(s.name, s.type, raw[ci][s.name]);
    const json stamped{{"command", cmd.name}, {"parameters", params}};
    Context ctx{cmd.name, Params(params), config_hash(stamped), output_dir(), json::array(), {}};
    std::filesystem::create_directories(ctx.dir);
    const Outcome res = cmd.fn(ctx, out);
    json record{{"configHash", ctx.hash},
                {"command", cmd.name},
                {"parameters", params},
                {"seed", params.contains("seed") ? params["seed"] : json(nullptr)},
                {"workers", workers},
                {"timestamp", now_utc()},
                {"summary", res.summary},
                {"summaryHash", config_hash(res.summary)}};
    if (!ctx.warnings.empty()) record["warnings"] = ctx.warnings;
    for (const auto& w : ctx.warnings) err << "warning: " << w << "\n";
    record["artifacts"] = ctx.artifacts;
    record["artifacts"].push_back(ctx.path(".json").string());
    write_json(ctx.path(".json"), record);
    if (cmd.name != "verify-all") out << record.dump(2) << "\n";
    else out << "record: " << ctx.path(".json").string() << "\n";
    return res.verified ? 0 : 1;
  } catch (const DomainError& e) {
    err << error_json("domain", e.module(), e.field(), e.what()).dump() << "\n";
    return 2;
  } catch (const CertificateError& e) {
    json j = error_json("certificate", e.module(), e.quantity(), e.what());
    j["error"]["value"] = e.value();
    j["error"]["limit"] = e.limit();
    err << j.dump() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << error_json("io", "cli", "output", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << error_json("internal", "cli", "", e.what()).dump() << "\n";
    return 1;
  }
}

}  // namespace lacelab::app
