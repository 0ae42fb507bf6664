#include "lacelab/stepdist.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "lacelab/errors.hpp"
#include "lacelab/stats.hpp"

namespace lacelab {

void LatticeParams::validate() const {
  require(d >= 1 && d <= kMaxDim, "stepdist", "d", "dimension must be in 1..4");
  require(alpha > 0 && std::isfinite(alpha), "stepdist", "alpha", "alpha must be > 0");
  require(L >= 1 && std::isfinite(L), "stepdist", "L", "L must be >= 1");
}

std::string to_string(DistKind k) { return k == DistKind::PowerLaw ? "power-law" : "subordinated"; }

DistKind dist_kind_from(const std::string& s) {
  if (s == "power-law" || s == "powerlaw" || s == "power") return DistKind::PowerLaw;
  if (s == "subordinated" || s == "sub") return DistKind::Subordinated;
  throw DomainError("stepdist", "kind", "unknown distribution kind '" + s + "'");
}

double subordinated_v_alpha(double alpha, int d, double sigmaL2) {
  const double s = 1 + 0.5 * alpha;
  return 2 / alpha * std::tgamma(1 - 0.5 * alpha) / zeta(s) * std::pow(sigmaL2 / (2 * d), 0.5 * alpha);
}

namespace {

Momentum axis_momentum(double k) {
  Momentum m{};
  m[0] = k;
  return m;
}

double hurwitz_tail_1d(double s, long R) { return 2 * hurwitz_zeta(s, double(R) + 1); }

}  // namespace

double StepDistribution::operator()(const Site& x) const {
  if (kind_ == DistKind::PowerLaw) {
    const double r = norm(x, p_.d);
    if (r <= p_.L) return 1 / norm_;
    return std::pow(p_.L / r, p_.d + p_.alpha) / norm_;
  }
  return D_sum_->apply(*layers_, x);
}

double StepDistribution::hat(const Momentum& k) const {
  if (kind_ == DistKind::Subordinated) return T_->phi(block_->hat(k));
  const int d = p_.d;
  const double s = d + p_.alpha;
  double a[kMaxDim];
  for (int i = 0; i < d; ++i) a[i] = k[i] / (2 * std::numbers::pi);
  double v = std::pow(p_.L, s) * (*ewald_)(a);
  for (const auto& [x, c] : core_) {
    double ph = 0;
    for (int i = 0; i < d; ++i) ph += k[i] * x[i];
    v += c * std::cos(ph);
  }
  return v / norm_;
}

double StepDistribution::one_minus_hat(const Momentum& k) const {
  if (kind_ == DistKind::Subordinated) {
    const double om = block_->one_minus_hat(k);
    return T_->one_minus_phi(1 - om, om);
  }
  const int d = p_.d;
  const double s = d + p_.alpha;
  double a[kMaxDim];
  for (int i = 0; i < d; ++i) a[i] = k[i] / (2 * std::numbers::pi);
  double v = std::pow(p_.L, s) * (ewald_->at_zero() - (*ewald_)(a));
  for (const auto& [x, c] : core_) {
    double ph = 0;
    for (int i = 0; i < d; ++i) ph += k[i] * x[i];
    const double sn = std::sin(0.5 * ph);
    v += 2 * c * sn * sn;
  }
  return v / norm_;
}

double StepDistribution::v_alpha() const {
  if (std::fabs(p_.alpha - 2) < 1e-12)
    throw DomainError("stepdist", "alpha", "v_alpha is undefined at alpha = 2");
  return v_alpha_;
}

double StepDistribution::v_alpha_subordination_sum() const {
  require(kind_ == DistKind::Subordinated && p_.alpha > 2, "stepdist", "alpha",
          "subordination sum needs a subordinated walk with alpha > 2");
  const long N = opts_.N;
  double m = 0;
  for (long t = N; t >= 1; --t) m += double(t) * (*T_)(double(t));
  m += hurwitz_zeta(T_->s() - 1, double(N) + 1) / T_->norm_constant();
  return block_->sigmaL2() / (2 * p_.d) * m;
}

void StepDistribution::finish_v_alpha() {
  const double a2 = p_.alpha2();
  // Richardson along k = (k,0,...,0) with unknown correction exponent.
  const double k0 = 0.5 / p_.L;
  std::vector<double> f;
  for (int j = 0; j < 6; ++j) {
    const double k = k0 * std::pow(4.0, -j);
    f.push_back(one_minus_hat(axis_momentum(k)) / std::pow(k, a2));
  }
  const double r = (f[3] - f[4]) / (f[4] - f[5]);
  eps_fit_ = (r > 0 && std::isfinite(r)) ? std::log(r) / std::log(4.0) : 0.0;
  const double richardson = (eps_fit_ > 0) ? f[5] - (f[4] - f[5]) / (std::pow(4.0, eps_fit_) - 1) : f[5];
  if (std::fabs(p_.alpha - 2) < 1e-12) {
    v_alpha_ = std::numeric_limits<double>::quiet_NaN();
  } else if (p_.alpha > 2) {
    v_alpha_ = sigma2_ / (2 * p_.d);
  } else if (kind_ == DistKind::Subordinated) {
    v_alpha_ = subordinated_v_alpha(p_.alpha, p_.d, block_->sigmaL2());
  } else {
    v_alpha_ = richardson;
  }
}

double StepDistribution::mass_outside_box(long R) const {
  require(R >= 0, "stepdist", "R", "box radius must be nonnegative");
  const int d = p_.d;
  if (kind_ == DistKind::PowerLaw) {
    const double s = d + p_.alpha;
    if (double(R) < p_.L) {
      double in = 0;
      for_each_in_box(d, R, [&](const Site& x) { in += (*this)(x); });
      return std::max(0.0, 1 - in);
    }
    double out;
    if (d == 1) {
      out = hurwitz_tail_1d(s, R);
    } else {
      double box = 0;
      for_each_in_box(d, R, [&](const Site& x) {
        const double r2 = norm2(x, d);
        if (r2 > 0) box += std::pow(r2, -0.5 * s);
      });
      out = std::max(0.0, ewald_->at_zero() - box);
    }
    return std::pow(p_.L, s) * out / norm_;
  }
  // Subordinated: exact box probabilities for exact layers, Hoeffding beyond.
  const long RU = block_->radius();
  const bool exact_layers = block_->separable() && R <= layers_->m_max();
  double total = 0;
  long t = 1;
  if (exact_layers) {
    for (; t <= layers_->t_exact(); ++t) {
      if (t * RU < R) continue;
      const double p1 = layers_->box_probability_1d(t, R);
      const double out = 1 - std::pow(p1, d);
      total += (*T_)(double(t)) * std::max(0.0, out);
    }
  }
  auto hoeffding = [&](double tt) {
    if (tt * RU < R) return 0.0;
    return std::min(1.0, 2.0 * d * std::exp(-double(R) * R / (2 * tt * RU * RU)));
  };
  // Blocks [t, b]: T-mass of the block times the bound at its right end.
  while (true) {
    const long b = std::max(t, long(std::ceil(t * 1.05)));
    const double h = hoeffding(double(b));
    const double mass = T_->tail(t - 1) - T_->tail(b);
    total += mass * h;
    t = b + 1;
    if (h >= 1) {
      total += T_->tail(t - 1);
      break;
    }
    if (T_->tail(t - 1) < 1e-18) break;
  }
  return std::min(1.0, total);
}

nlohmann::json StepDistribution::metadata() const {
  nlohmann::json j;
  j["d"] = p_.d;
  j["alpha"] = p_.alpha;
  j["L"] = p_.L;
  j["kind"] = to_string(kind_);
  j["normConstant"] = norm_;
  j["sigma2"] = std::isfinite(sigma2_) ? nlohmann::json(sigma2_) : nlohmann::json("inf");
  j["vAlpha"] = std::isfinite(v_alpha_) ? nlohmann::json(v_alpha_) : nlohmann::json(nullptr);
  j["alphaIsTwo"] = std::fabs(p_.alpha - 2) < 1e-12;
  j["window"] = window_;
  j["tailCertificate"] = certificate_;
  j["envelopeConstant"] = envelope_;
  j["fittedEpsilon"] = eps_fit_;
  j["D0"] = (*this)(Site{});
  if (kind_ == DistKind::Subordinated) {
    j["profile"] = opts_.profile.name;
    j["tExact"] = opts_.t_exact;
    j["N"] = opts_.N;
    j["edgeworthOrder"] = opts_.ell;
    j["sigmaL2"] = block_->sigmaL2();
    j["layerSwitchMismatch"] = layers_->switch_mismatch();
  }
  return j;
}

StepDistribution build_power_law(const LatticeParams& p, long window) {
  p.validate();
  if (window == 0) window = std::max<long>(16, long(std::ceil(4 * p.L)));
  require(double(window) >= p.L, "stepdist", "window", "window must be at least L");
  StepDistribution D;
  D.p_ = p;
  D.kind_ = DistKind::PowerLaw;
  D.window_ = window;
  const int d = p.d;
  const double s = d + p.alpha, Ls = std::pow(p.L, s);
  double inner = 0;
  long n_in = 0;
  for_each_in_box(d, long(std::floor(p.L)), [&](const Site& x) {
    const double r = norm(x, d);
    if (r > p.L) return;
    ++n_in;
    if (r == 0) {
      D.core_.emplace_back(x, 1.0);
    } else {
      const double pw = Ls * std::pow(r, -s);
      inner += std::pow(r, -s);
      D.core_.emplace_back(x, 1 - pw);
    }
  });
  D.ewald_ = std::make_shared<EwaldSum>(d, s);
  D.norm_ = double(n_in) + Ls * (D.ewald_->at_zero() - inner);
  if (p.alpha > 2) {
    double core2 = 0;
    for (const auto& [x, c] : D.core_) core2 += norm2(x, d) * c;
    D.sigma2_ = (Ls * epstein_zeta(d, s - 2) + core2) / D.norm_;
  } else {
    D.sigma2_ = std::numeric_limits<double>::infinity();
  }
  D.envelope_ = std::pow(p.L, d) / D.norm_;
  D.certificate_ = 0;
  D.finish_v_alpha();
  if (!(D(Site{}) < 1)) throw CertificateError("stepdist", "D(o)", D(Site{}), 1, "degenerate step distribution");
  return D;
}

StepDistribution build_subordinated(const LatticeParams& p, const SubordinatedOptions& opts) {
  p.validate();
  require(opts.t_exact >= 1 && opts.t_exact <= opts.N, "stepdist", "T_max", "need 1 <= T_max <= N");
  require(opts.N >= 1024, "stepdist", "N", "coefficient range too short");
  require(opts.m_max >= 1, "stepdist", "window", "window must be positive");
  StepDistribution D;
  D.p_ = p;
  D.kind_ = DistKind::Subordinated;
  D.opts_ = opts;
  D.window_ = opts.m_max;
  D.block_ = std::make_shared<BlockDistribution>(p.d, p.L, opts.profile);
  D.T_ = std::make_shared<SubordinatorWeights>(p.alpha);
  D.layers_ = std::make_shared<LayerTable>(*D.block_, opts.m_max, opts.t_exact, opts.ell);
  D.D_sum_ = std::make_shared<TimeSum>(subordinator_sequence(*D.T_, opts.N), opts.t_exact);
  D.norm_ = D.T_->norm_constant();
  D.sigma2_ = p.alpha > 2 ? D.block_->sigmaL2() * D.T_->mean() : std::numeric_limits<double>::infinity();

  // Uniform error of the expansion beyond t_exact: K t^{-(d+ell+2)/2}, K fitted at t_exact.
  const double te = double(opts.t_exact);
  const double peak1 = D.layers_->block().separable() ? D.layers_->smooth(te, Site{}) : 0.0;
  double err_at_te;
  if (D.block_->separable()) {
    const double p1 = std::pow(peak1, 1.0 / p.d);
    err_at_te = p.d * D.layers_->switch_mismatch() * p1 * std::pow(p1, p.d - 1);
  } else {
    err_at_te = D.layers_->switch_mismatch() * D.layers_->smooth(te, Site{});
  }
  const double expo = 0.5 * (p.d + opts.ell + 2);
  const double K = err_at_te * std::pow(te, expo);
  D.layer_K_ = K;
  D.certificate_ = K * hurwitz_zeta(D.T_->s() + expo, te + 1) / D.norm_;

  const double mass = D.D_sum_->total_mass();
  if (std::fabs(mass - 1) > 1e-12)
    throw CertificateError("stepdist", "normalization", std::fabs(mass - 1), 1e-12, "subordinated weights not normalized");
  D.finish_v_alpha();
  // Measured envelope constant on a log-spaced grid along the axis and the diagonal.
  const double s = p.d + p.alpha;
  double C = 0;
  for (int j = 0;; ++j) {
    const long r = j == 0 ? 0 : long(std::round(std::pow(2.0, 0.5 * (j - 1))));
    if (r > opts.m_max) break;
    for (const Site& x : {axis_site(p.d, r), diagonal_site(p.d, r)}) {
      const double v = D(x) * std::pow(bracket(x, p.d, p.L), s) / std::pow(p.L, p.alpha);
      C = std::max(C, v);
    }
  }
  D.envelope_ = C;
  if (!(D(Site{}) < 1)) throw CertificateError("stepdist", "D(o)", D(Site{}), 1, "degenerate step distribution");
  return D;
}

StepDistribution build_distribution(DistKind kind, const LatticeParams& p) {
  return kind == DistKind::PowerLaw ? build_power_law(p) : build_subordinated(p);
}

DeltaBounds delta_bounds(const StepDistribution& D, int n) {
  require(n >= 4, "stepdist", "points", "need at least 4 points per axis");
  const int d = D.dim();
  const double L = D.params().L;
  DeltaBounds b;
  b.min_outside = std::numeric_limits<double>::infinity();
  // Canonical momenta pi >= k_1 >= k_2 >= ... >= 0 suffice by symmetry.
  std::array<int, kMaxDim> idx{};
  std::function<void(int, int)> rec = [&](int pos, int hi) {
    if (pos == d) {
      Momentum k{};
      double sup = 0;
      for (int i = 0; i < d; ++i) {
        k[i] = std::numbers::pi * idx[i] / n;
        sup = std::max(sup, k[i]);
      }
      const double v = D.one_minus_hat(k);
      b.max_one_minus_hat = std::max(b.max_one_minus_hat, v);
      if (sup >= 1 / L) b.min_outside = std::min(b.min_outside, v);
      return;
    }
    for (int j = 0; j <= hi; ++j) {
      idx[pos] = j;
      rec(pos + 1, j);
    }
  };
  rec(0, n);
  // the boundary |k|_inf = 1/L itself
  for (int j = 0; j <= n; ++j) {
    Momentum k{};
    k[0] = 1 / L;
    for (int i = 1; i < d; ++i) k[i] = std::min(1 / L, std::numbers::pi * j / n);
    b.min_outside = std::min(b.min_outside, D.one_minus_hat(k));
  }
  b.delta = std::min(2 - b.max_one_minus_hat, b.min_outside);
  return b;
}

double small_k_exponent(const StepDistribution& D, double k_lo, double k_hi, int n) {
  require(k_lo > 0 && k_hi > k_lo, "stepdist", "k", "need 0 < k_lo < k_hi");
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    const double k = k_lo * std::pow(k_hi / k_lo, double(i) / (n - 1));
    x.push_back(std::log(k));
    y.push_back(std::log(D.one_minus_hat(axis_momentum(k))));
  }
  return linear_fit(x, y).slope;
}

std::vector<std::pair<Site, double>> mass_table(const StepDistribution& D, long R) {
  std::vector<std::pair<Site, double>> out;
  for_each_in_box(D.dim(), R, [&](const Site& x) { out.emplace_back(x, D(x)); });
  return out;
}

}  // namespace lacelab
