#include "lacelab/lace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lacelab/errors.hpp"
#include "lacelab/fft.hpp"
#include "lacelab/stats.hpp"

namespace lacelab {

namespace {

constexpr const char* kMod = "lace-algebra";

Spectrum real_spectrum(const Grid& g, const std::vector<double>& sym) {
  Spectrum s;
  s.grid = g;
  s.data.assign(sym.begin(), sym.end());
  return s;
}

std::vector<double> real_symbol(const Grid& g, const TorusField& f) {
  const Spectrum s = fft_forward(g, f.values);
  std::vector<double> out(s.data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.data[i].real();
  return out;
}

// All images of x under coordinate permutations and sign flips.
template <class F>
void for_each_image(const Site& x, int d, F&& f) {
  std::array<int, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + d, 0);
  do {
    for (int mask = 0; mask < (1 << d); ++mask) {
      Site y{};
      for (int i = 0; i < d; ++i) y[i] = (mask >> i & 1) ? -x[perm[i]] : x[perm[i]];
      f(y);
    }
  } while (std::next_permutation(perm.begin(), perm.begin() + d));
}

long pow2_at_least(long n) {
  long m = 8;
  while (m < n) m <<= 1;
  return m;
}

long torus_cap(int d) {
  switch (d) {
    case 1: return 1L << 20;
    case 2: return 2048;
    case 3: return 128;
    default: return 32;
  }
}

}  // namespace

std::string to_string(LaceModel m) {
  switch (m) {
    case LaceModel::RandomWalk: return "RW";
    case LaceModel::SAW: return "SAW";
    case LaceModel::Percolation: return "percolation";
    case LaceModel::Ising: return "Ising";
  }
  return "?";
}

LaceModel lace_model_from(const std::string& s) {
  if (s == "RW" || s == "rw") return LaceModel::RandomWalk;
  if (s == "SAW" || s == "saw") return LaceModel::SAW;
  if (s == "percolation" || s == "perc") return LaceModel::Percolation;
  if (s == "Ising" || s == "ising") return LaceModel::Ising;
  throw DomainError(kMod, "model", "unknown model '" + s + "' (RW, SAW, percolation, Ising)");
}

int model_ell(LaceModel m) { return m == LaceModel::Percolation ? 2 : 3; }

double PiFunction::hat_zero() const {
  double s = 0;
  for (const auto& [x, v] : values) s += v;
  return s;
}

double PiFunction::hat(const Momentum& k) const {
  double s = 0;
  for (const auto& [x, v] : values) {
    double ph = 0;
    for (int i = 0; i < d; ++i) ph += k[i] * double(x[i]);
    s += v * std::cos(ph);
  }
  return s;
}

double PiFunction::second_moment() const {
  double s = 0;
  for (const auto& [x, v] : values) s += norm2(x, d) * v;
  return s;
}

double PiFunction::l1_norm() const {
  double s = 0;
  for (const auto& [x, v] : values) s += std::fabs(v);
  return s;
}

long PiFunction::radius() const {
  long r = 0;
  for (const auto& [x, v] : values) r = std::max(r, sup_norm(x, d));
  return r;
}

double PiFunction::at(const Site& x) const {
  auto it = values.find(x);
  return it == values.end() ? 0.0 : it->second;
}

double PiFunction::symmetry_defect() const {
  double worst = 0;
  for (const auto& [x, v] : values)
    for_each_image(x, d, [&](const Site& y) { worst = std::max(worst, std::fabs(at(y) - v)); });
  return worst;
}

double PiFunction::envelope_constant(double alpha, double L) const {
  const double a = std::min(alpha, 2.0);
  double c = 0;
  for (const auto& [x, v] : values)
    if (!is_origin(x)) c = std::max(c, std::fabs(v) / std::pow(bracket(x, d, L), (a - d) * ell));
  return c;
}

TorusField PiFunction::fold(const Grid& g) const {
  TorusField f = make_field(g);
  for (const auto& [x, v] : values) f.at(x) += v;
  return f;
}

nlohmann::json PiFunction::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["model"] = to_string(model);
  j["ell"] = ell;
  j["l1Tail"] = l1_tail;
  j["terms"] = terms;
  j["ratio"] = ratio;
  j["hatZero"] = hat_zero();
  auto& e = j["entries"] = nlohmann::json::array();
  for (const auto& [x, v] : values) e.push_back({{"x", std::vector<long>(x.begin(), x.begin() + d)}, {"value", v}});
  return j;
}

PiFunction PiFunction::from_json(const nlohmann::json& j) {
  PiFunction P;
  try {
    P.d = j.at("d").get<int>();
    require(P.d >= 1 && P.d <= kMaxDim, kMod, "d", "dimension must be in 1..4");
    P.model = lace_model_from(j.value("model", std::string("SAW")));
    P.ell = j.value("ell", model_ell(P.model));
    P.l1_tail = j.value("l1Tail", 0.0);
    for (const auto& e : j.at("entries")) {
      const auto xs = e.at("x").get<std::vector<long>>();
      require(int(xs.size()) == P.d, kMod, "entries", "site with wrong number of coordinates");
      Site x{};
      for (int i = 0; i < P.d; ++i) x[i] = xs[i];
      if (e.at("value").is_null()) throw DomainError(kMod, "entries", "non-numeric Pi value at " + to_string(x, P.d));
      const double v = e.at("value").get<double>();
      require(std::isfinite(v), kMod, "entries", "non-finite Pi value at " + to_string(x, P.d));
      require(!P.values.count(x), kMod, "entries", "duplicate site " + to_string(x, P.d));
      P.values[x] = v;
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(kMod, "pi", std::string("malformed Pi table: ") + e.what());
  }
  require(!P.values.empty(), kMod, "entries", "Pi table is empty");
  const double defect = P.symmetry_defect();
  require(defect <= 1e-12 * std::max(1.0, P.l1_norm()), kMod, "entries",
          "Pi table is not Z^d-symmetric (defect " + std::to_string(defect) + ")");
  require(P.hat_zero() > 0, kMod, "hatZero", "Pi^(0) must be positive");
  return P;
}

PiFunction delta_pi(int d) {
  PiFunction P;
  P.d = d;
  P.model = LaceModel::RandomWalk;
  P.ell = 3;
  P.values[Site{}] = 1.0;
  return P;
}

PiFunction pi_series_from_pi(int d, const std::map<Site, double>& pi, double pDo, LaceModel model, int Nmax,
                             double tolerance) {
  require(d >= 1 && d <= kMaxDim, kMod, "d", "dimension must be in 1..4");
  require(Nmax >= 1, kMod, "Nmax", "Nmax must be >= 1");
  if (model == LaceModel::RandomWalk) return delta_pi(d);
  const bool saw = model == LaceModel::SAW;
  PiFunction P;
  P.d = d;
  P.model = model;
  P.ell = model_ell(model);
  double n1 = 0;
  long R = 0;
  for (const auto& [x, v] : pi) {
    require(std::isfinite(v), kMod, "pi", "non-finite pi value");
    n1 += std::fabs(v);
    R = std::max(R, sup_norm(x, d));
  }
  P.ratio = saw ? n1 : std::fabs(pDo) * n1;
  if (P.ratio >= 1)
    throw DomainError(kMod, "pi",
                      "divergent Pi series: geometric ratio " + std::to_string(P.ratio) +
                          (saw ? " = ||pi||_1 >= 1" : " = pD(o) ||pi||_1 >= 1"));
  if (n1 == 0) {
    if (saw) P.values[Site{}] = 1.0;
    return P;
  }
  auto tail_after = [&](long N) {
    return saw ? std::pow(P.ratio, double(N + 1)) / (1 - P.ratio) : n1 * std::pow(P.ratio, double(N)) / (1 - P.ratio);
  };
  long N = 1;
  while (N < Nmax && tail_after(N) >= tolerance) ++N;
  long M = pow2_at_least(2 * N * R + 2);
  if (M > torus_cap(d)) {
    M = torus_cap(d);
    N = std::max(1L, (M - 2) / (2 * std::max(R, 1L)));
  }
  const Grid g{d, M};
  TorusField f = make_field(g);
  for (const auto& [x, v] : pi) f.at(x) += v;
  const std::vector<double> ph = real_symbol(g, f);
  std::vector<double> sum(ph.size());
  for (std::size_t i = 0; i < ph.size(); ++i) {
    double term = saw ? 1.0 : ph[i], s = term;
    for (long n = saw ? 1 : 2; n <= N; ++n) {
      term *= saw ? ph[i] : -pDo * ph[i];
      s += term;
    }
    sum[i] = s;
  }
  const std::vector<double> vals = fft_inverse(real_spectrum(g, sum));
  double vmax = 0;
  for (double v : vals) vmax = std::max(vmax, std::fabs(v));
  double dropped = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const Site x = g.site(i);
    if (sup_norm(x, d) <= N * R && std::fabs(vals[i]) > 1e-15 * vmax) P.values[x] = vals[i];
    else dropped += std::fabs(vals[i]);
  }
  P.terms = int(N);
  P.l1_tail = tail_after(N) + dropped;
  return P;
}

double critical_point(const PiFunction& Pi) {
  const double h = Pi.hat_zero();
  require(h > 0, kMod, "hatZero", "Pi^(0) must be positive for a critical point");
  return 1 / h;
}

CriticalPoint critical_point(const std::function<PiFunction(double)>& family, double p0, double damping,
                             double tolerance) {
  require(damping > 0 && damping <= 1, kMod, "damping", "damping must lie in (0, 1]");
  CriticalPoint out;
  double p = p0;
  for (int it = 1; it <= 100000; ++it) {
    const double next = (1 - damping) * p + damping * critical_point(family(p));
    out.iterations = it;
    out.residual = std::fabs(next - p);
    p = next;
    if (out.residual < tolerance * std::max(1.0, std::fabs(p))) {
      out.pc = p;
      out.residual = std::fabs(p * family(p).hat_zero() - 1);
      return out;
    }
  }
  throw CertificateError(kMod, "pc iteration", out.residual, tolerance, "self-consistent p_c iteration did not converge");
}

double nabla_hat(const PiFunction& Pi, const StepDistribution& D) {
  const double alpha = D.params().alpha;
  require(std::fabs(alpha - 2) > 1e-12, kMod, "alpha", "alpha = 2 is excluded");
  if (alpha < 2) return 0.0;
  return Pi.second_moment() / D.sigma2();
}

double nabla_hat_quotient(const PiFunction& Pi, const StepDistribution& D, double k) {
  Momentum q{};
  q[0] = k;
  double num = 0;
  for (const auto& [x, v] : Pi.values) {
    const double s = std::sin(0.5 * k * double(x[0]));
    num += 2 * v * s * s;
  }
  return num / D.one_minus_hat(q);
}

QRSolution solve_qr(double p, double hatZero, double nablaHat) {
  require(p > 0, kMod, "p", "p must be positive");
  require(hatZero > 0, kMod, "hatZero", "Pi^(0) must be positive");
  require(1 + p * nablaHat > 0, kMod, "nablaHat", "1 + p nabla Pi^(0) must be positive");
  const double gap = 1 - hatZero * p;
  require(gap > -1e-14, kMod, "p", "p exceeds p_c = 1/Pi^(0); chi is undefined");
  QRSolution s;
  s.p = p;
  s.hatZero = hatZero;
  s.nablaHat = nablaHat;
  s.critical = std::fabs(gap) <= 1e-14;
  // [ 1   1 - Pi p        ] [q]   [1]
  // [-1   (Pi + nabla) p  ] [r] = [0]
  const double a11 = 1, a12 = s.critical ? 0.0 : gap, a21 = -1, a22 = (hatZero + nablaHat) * p;
  const double det = a11 * a22 - a12 * a21;
  s.q = a22 / det;
  s.r = -a21 / det;
  s.chi = s.critical ? std::numeric_limits<double>::infinity() : hatZero / gap;
  s.r_closed_residual = std::fabs(s.r - 1 / (1 + p * nablaHat));
  s.q_closed_residual = std::fabs(s.q - (s.critical ? 1.0 : 1 - s.r / (1 + p * s.chi)));
  s.chi_identity_residual = s.critical ? 0.0 : std::fabs(s.chi - hatZero - hatZero * p * s.chi);
  s.q_in_range = s.q > 0 && s.q <= 1 + 1e-14;
  return s;
}

LaceSystem make_lace_system(const StepDistribution& D, const PiFunction& Pi, double p, const LaceOptions& o) {
  require(Pi.d == D.dim(), kMod, "d", "Pi and D have different dimensions");
  require(o.M >= 8 && o.M % 2 == 0, kMod, "M", "M must be an even integer >= 8");
  require(2 * Pi.radius() < o.M, kMod, "M", "torus too small for the support of Pi");
  LaceSystem s{D, Pi, {}, critical_point(Pi), Grid{D.dim(), o.M}, {}, {}};
  // a p that came out of a self-consistent iteration is snapped onto 1/Pi^(0)
  double pp = p;
  if (std::fabs(p - s.pc) <= 1e-10 * s.pc) pp = s.pc;
  s.qr = solve_qr(pp, Pi.hat_zero(), nabla_hat(Pi, D));
  const KernelLadder ladder(D, o.M, 1.0);
  s.Dsym = ladder.symbol();
  s.Pisym = real_symbol(s.grid, Pi.fold(s.grid));
  return s;
}

EReport build_E(const LaceSystem& s, const LaceOptions& o) {
  const auto& [p, h0, nab, q, r] = std::tuple{s.qr.p, s.qr.hatZero, s.qr.nablaHat, s.qr.q, s.qr.r};
  std::vector<double> def(s.Dsym.size()), rep(s.Dsym.size());
  for (std::size_t i = 0; i < def.size(); ++i) {
    const double Dk = s.Dsym[i], Pk = s.Pisym[i];
    def[i] = 1 - q * Dk - r * (1 - Pk * p * Dk);
    rep[i] = p * r * (nab * (1 - Dk) - (h0 - Pk) * Dk);
  }
  EReport e;
  e.E.grid = s.grid;
  e.E.values = fft_inverse(real_spectrum(s.grid, def));
  const std::vector<double> Erep = fft_inverse(real_spectrum(s.grid, rep));
  for (std::size_t i = 0; i < Erep.size(); ++i) {
    e.def_rep_difference = std::max(e.def_rep_difference, std::fabs(e.E.values[i] - Erep[i]));
    e.l1 += std::fabs(e.E.values[i]);
  }
  e.hat_zero = def[0];
  e.slope_ratio = def[1] / (1 - s.Dsym[1]);
  if (e.def_rep_difference > o.tolerance)
    throw CertificateError(kMod, "E representation", e.def_rep_difference, o.tolerance,
                           "E-def and E-rep forms disagree");
  return e;
}

HReport build_H_and_A(const LaceSystem& s, const LaceOptions& o) {
  const EReport e = build_E(s, o);
  const Spectrum Es = fft_forward(s.grid, e.E.values);
  const double q = s.qr.q, r = s.qr.r;
  std::vector<double> K(s.Dsym.size());
  for (std::size_t i = 0; i < K.size(); ++i) {
    const double den = 1 - q * s.Dsym[i];
    // at q = 1 the zero mode is the k -> 0 limit, which vanishes by the boundary conditions
    K[i] = (i == 0 && s.qr.critical) ? 0.0 : Es.data[i].real() / den;
  }
  HReport h;
  h.ES.grid = s.grid;
  h.ES.values = fft_inverse(real_spectrum(s.grid, K));
  for (double v : h.ES.values) h.es_l1 += std::fabs(v);
  if (h.es_l1 >= 1)
    throw CertificateError(kMod, "||E*S_q||_1", h.es_l1, 1.0, "Neumann series for H diverges");
  int N = 0;
  while (N < 100000 && std::pow(h.es_l1, N + 1) / (1 - h.es_l1) >= o.tolerance) ++N;
  h.terms = N;
  h.tail = r * s.Pi.l1_norm() * std::pow(h.es_l1, N + 1) / (1 - h.es_l1);
  std::vector<double> acc(K.size(), 0.0), pw(K.size(), 1.0);
  int next_check = 1;
  for (int n = 0; n <= N; ++n) {
    for (std::size_t i = 0; i < K.size(); ++i) acc[i] += pw[i];
    if (n + 1 == next_check || n == N) {
      double l1 = 0;
      for (double v : fft_inverse(real_spectrum(s.grid, acc))) l1 += std::fabs(v);
      h.partial_sum_sup = std::max(h.partial_sum_sup, l1);
      next_check *= 2;
    }
    for (std::size_t i = 0; i < K.size(); ++i) pw[i] *= K[i];
  }
  std::vector<double> Hs(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) Hs[i] = r * s.Pisym[i] * acc[i];
  h.H.grid = s.grid;
  h.H.values = fft_inverse(real_spectrum(s.grid, Hs));
  h.A_from_H = 1 / Hs[0];
  h.A_pc_over_r = s.pc / r;
  h.A_formula = s.pc;
  if (s.D.params().alpha > 2) h.A_formula += s.pc * s.pc * s.Pi.second_moment() / s.D.sigma2();
  // decay exponent of E * S_q along the first axis, L < |x| < M/4
  std::vector<double> lx, ly;
  const double L = s.D.params().L;
  for (long x = long(std::ceil(2 * L)); x < s.grid.M / 4; ++x) {
    const double v = std::fabs(h.ES.at(axis_site(s.grid.d, x)));
    if (v > 1e-300) {
      lx.push_back(std::log(double(x)));
      ly.push_back(std::log(v));
    }
  }
  if (lx.size() >= 3) h.rho = -linear_fit(lx, ly).slope - s.grid.d;
  return h;
}

LaceGreen solve_G_from_lace(const StepDistribution& D, const PiFunction& Pi, double p, const std::vector<Site>& xs,
                            long M) {
  require(p >= 0, kMod, "p", "p must be nonnegative");
  const double pc = critical_point(Pi);
  require(p < pc, kMod, "p", "p must lie below p_c = " + std::to_string(pc));
  require(M >= 8 && M % 2 == 0, kMod, "M", "M must be an even integer >= 8");
  require(2 * Pi.radius() < M, kMod, "M", "torus too small for the support of Pi");
  const Grid g{D.dim(), M};
  const KernelLadder ladder(D, M, 1.0);
  const auto& Dk = ladder.symbol();
  const std::vector<double> Pk = real_symbol(g, Pi.fold(g));
  std::vector<double> Gk(Dk.size());
  double min_den = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < Gk.size(); ++i) {
    const double den = 1 - Pk[i] * p * Dk[i];
    min_den = std::min(min_den, den);
    Gk[i] = Pk[i] / den;
  }
  if (!(min_den > 1e-12))
    throw CertificateError(kMod, "denominator", min_den, 1e-12,
                           "1 - Pi^ p D^ vanishes on the grid; p too close to p_c for this M");
  LaceGreen out;
  out.G.grid = g;
  out.G.values = fft_inverse(real_spectrum(g, Gk));
  out.G.wrapError = ladder.base().wrapError;
  // fixed-point residual through explicit circular convolutions
  const TorusField PiF = Pi.fold(g);
  const TorusField PDG = convolve(convolve(PiF, ladder.base()), out.G);
  for (std::size_t i = 0; i < PDG.values.size(); ++i)
    out.residual = std::max(out.residual, std::fabs(out.G.values[i] - PiF.values[i] - p * PDG.values[i]));
  if (out.residual > 1e-8)
    throw CertificateError(kMod, "fixed-point residual", out.residual, 1e-8, "G = Pi + Pi*pD*G violated");
  out.chi_torus = out.G.sum();
  out.chi_rep = Pi.hat_zero() / (1 - Pi.hat_zero() * p);
  out.table.params = D.params();
  out.table.kind = D.kind();
  out.table.p = p;
  for (const Site& x : xs) out.table.entries.push_back({x, out.G.at(x), "SpectralQuad", out.G.wrapError});
  return out;
}

BootstrapReport bootstrap_g(const GreenTable& table, double lambda, double p) {
  require(lambda > 0, kMod, "lambda", "lambda must be positive");
  require(!table.entries.empty(), kMod, "table", "empty table");
  const auto& par = table.params;
  const double a = par.alpha2();
  BootstrapReport b;
  for (const auto& e : table.entries) {
    if (is_origin(e.x)) continue;
    const double v = e.value / (lambda * std::pow(bracket(e.x, par.d, par.L), a - par.d));
    if (v > b.sup_term) {
      b.sup_term = v;
      b.argmax = e.x;
    }
  }
  b.g = std::max(p, b.sup_term);
  b.regime = b.g <= 2 ? "<=2" : (b.g <= 3 ? "(2,3]" : ">3");
  return b;
}

Conv1Report conv1_harness(int d, double a, double b, double L, long W) {
  require(d >= 1 && d <= 3, kMod, "d", "convolution harness supports d in 1..3");
  require(a >= b && b > 0, kMod, "b", "need a >= b > 0");
  require(a + b > d, kMod, "a", "need a + b > d");
  require(std::fabs(a - d) > 1e-12, kMod, "a", "a = d is not covered by either regime");
  require(L >= 1 && W >= 4 * L && W >= 8, kMod, "W", "need W >= max(8, 4L)");
  Conv1Report rep;
  rep.d = d;
  rep.a = a;
  rep.b = b;
  rep.L = L;
  rep.regime = a > d ? "a>d" : "a<d";
  const long N = pow2_at_least(4 * W + 2);
  const Grid g{d, N};
  TorusField f = make_field(g), h = make_field(g);
  for_each_in_box(d, W, [&](const Site& y) {
    const double r = bracket(y, d, L);
    f.at(y) = std::pow(r, -a);
    h.at(y) = std::pow(r, -b);
  });
  const TorusField c = convolve(f, h);
  // missing terms have |y|_inf >= W/2 >= 2|x|, where <x-y> >= |y|/2 >= L
  double tail = 0;
  const long m0 = (W + 1) / 2;
  const long m1 = 1000000;
  for (long m = m0; m < m1; ++m) tail += 2 * d * std::pow(2.0 * m + 1, d - 1) * std::pow(double(m), -a - b);
  tail += 2 * d * std::pow(3.0, d - 1) * std::pow(double(m1), d - a - b) / (a + b - d);
  rep.tail = std::pow(2.0, a) * tail;
  for (long x = 0; x <= W / 4; ++x) {
    const Site s = axis_site(d, x);
    const double lhs = c.at(s) + rep.tail;
    const double bx = bracket(s, d, L);
    rep.r.push_back(double(x));
    rep.lhs.push_back(lhs);
    const double C = a > d ? lhs * std::pow(bx, b) / std::pow(L, d - a) : lhs * std::pow(bx, a + b - d);
    rep.C = std::max(rep.C, C);
  }
  return rep;
}

Conv2Report conv2_harness(int d, double alpha, double L, double C1, const std::map<Site, double>& g, long rmax) {
  require(d >= 1 && d <= kMaxDim, kMod, "d", "dimension must be in 1..4");
  const double a = std::min(alpha, 2.0);
  require(double(d) > a, kMod, "d", "need d > alpha ^ 2");
  require(!g.empty() && rmax >= 4, kMod, "g", "need a nonempty g and rmax >= 4");
  Conv2Report rep;
  rep.C1 = C1;
  long Rg = 0;
  for (const auto& [y, v] : g) {
    rep.g_l1 += v;
    Rg = std::max(Rg, sup_norm(y, d));
  }
  auto f = [&](const Site& x) { return C1 * std::pow(bracket(x, d, L), a - d); };
  std::vector<double> lx, ly;
  double fmax = 0;
  for (long r = 1; r <= rmax; ++r) {
    const Site x = axis_site(d, r);
    double conv = 0;
    for (const auto& [y, v] : g) conv += f(x - y) * v;
    const double res = conv - rep.g_l1 * f(x);
    rep.r.push_back(double(r));
    rep.residual.push_back(res);
    fmax = std::max(fmax, f(x));
    if (r >= std::max(2 * Rg, long(std::ceil(2 * L))) && std::fabs(res) > 0) {
      lx.push_back(std::log(double(r)));
      ly.push_back(std::log(std::fabs(res)));
    }
  }
  double rmax_abs = 0;
  for (double v : rep.residual) rmax_abs = std::max(rmax_abs, std::fabs(v));
  if (rmax_abs <= 1e-14 * fmax || lx.size() < 3) rep.rho_prime = std::numeric_limits<double>::infinity();
  else rep.rho_prime = -linear_fit(lx, ly).slope - (d - a);
  return rep;
}

PiFunction synthetic_pi(const SyntheticPiSpec& s) {
  require(s.d >= 1 && s.d <= kMaxDim, kMod, "d", "dimension must be in 1..4");
  require(s.radius >= 0, kMod, "radius", "radius must be nonnegative");
  require(s.L >= 1, kMod, "L", "L must be >= 1");
  PiFunction P;
  P.d = s.d;
  P.model = s.model;
  P.ell = s.ell;
  const double a = std::min(s.alpha, 2.0);
  for_each_in_box(s.d, s.radius, [&](const Site& x) {
    if (is_origin(x)) {
      P.values[x] = 1 + s.u;
      return;
    }
    long l1 = 0;
    for (int i = 0; i < s.d; ++i) l1 += std::labs(x[i]);
    const double sign = (s.alternating && (l1 % 2)) ? -1.0 : 1.0;
    P.values[x] = s.c * sign * std::pow(bracket(x, s.d, s.L), (a - s.d) * s.ell);
  });
  return P;
}

std::function<PiFunction(double)> synthetic_family(const SyntheticPiSpec& s) {
  const PiFunction base = synthetic_pi(s);
  return [base](double p) {
    PiFunction P = base;
    for (auto& [x, v] : P.values) v = is_origin(x) ? 1 + p * (v - 1) : p * v;
    return P;
  };
}

}  // namespace lacelab
