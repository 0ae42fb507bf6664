#include "lacelab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lacelab/errors.hpp"

namespace lacelab {

double TorusField::sum() const {
  double s = 0, c = 0;  // Kahan
  for (double v : values) {
    const double y = v - c, t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double TorusField::max_abs_diff(const TorusField& o) const {
  if (!(grid == o.grid)) throw std::invalid_argument("TorusField: grid mismatch");
  double m = 0;
  for (std::size_t i = 0; i < values.size(); ++i) m = std::max(m, std::fabs(values[i] - o.values[i]));
  return m;
}

double TorusField::symmetry_defect() const {
  double worst = 0;
  const int dd = d();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Site x = grid.site(i);
    worst = std::max(worst, std::fabs(values[i] - at(-x)));
    if (dd >= 2) {
      Site y = x;
      std::swap(y[0], y[1]);
      worst = std::max(worst, std::fabs(values[i] - at(y)));
    }
    Site z = x;
    z[0] = -z[0];
    worst = std::max(worst, std::fabs(values[i] - at(z)));
  }
  return worst;
}

TorusField make_field(const Grid& g, double fill) {
  TorusField f;
  f.grid = g;
  f.values.assign(g.size(), fill);
  return f;
}

TorusField delta_field(const Grid& g) {
  TorusField f = make_field(g);
  f.values[g.index(Site{})] = 1;
  return f;
}

TorusField convolve(const TorusField& a, const TorusField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("convolve: grid mismatch");
  Spectrum sa = fft_forward(a.grid, a.values);
  const Spectrum sb = fft_forward(b.grid, b.values);
  for (std::size_t i = 0; i < sa.data.size(); ++i) sa.data[i] *= sb.data[i];
  TorusField out;
  out.grid = a.grid;
  out.values = fft_inverse(sa);
  out.wrapError = a.wrapError + b.wrapError;
  return out;
}

// Evaluate an even, permutation-symmetric symbol on all grid momenta, computing
// each canonical momentum once.
Spectrum symmetric_spectrum(const Grid& g, const std::function<double(const Momentum&)>& f) {
  const long H = g.M / 2 + 1;
  std::size_t cache_size = 1;
  for (int i = 0; i < g.d; ++i) cache_size *= std::size_t(H);
  std::vector<double> cache(cache_size, std::numeric_limits<double>::quiet_NaN());
  const double step = 2 * std::numbers::pi / double(g.M);
  return spectrum_from(g, [&](const Momentum& k) {
    std::array<long, kMaxDim> j{};
    for (int i = 0; i < g.d; ++i) j[i] = std::lround(std::fabs(k[i]) / step);
    std::sort(j.begin(), j.begin() + g.d, std::greater<long>());
    std::size_t key = 0;
    for (int i = 0; i < g.d; ++i) key = key * std::size_t(H) + std::size_t(j[i]);
    double& v = cache[key];
    if (std::isnan(v)) {
      Momentum kc{};
      for (int i = 0; i < g.d; ++i) kc[i] = step * double(j[i]);
      v = f(kc);
    }
    return std::complex<double>(v, 0.0);
  });
}

TorusField embed(const StepDistribution& D, long M) {
  const auto& p = D.params();
  require(M >= 4 && M % 2 == 0, "torus-kernels", "M", "M must be an even integer >= 4");
  require(double(M) >= 4 * p.L, "torus-kernels", "M", "M must be at least 4L");
  const Grid g{p.d, M};
  TorusField f;
  f.grid = g;
  if (D.kind() == DistKind::PowerLaw && p.d == 1) {
    // Exact fold: images |x + Mz| > L are pure power terms summed by Hurwitz zeta.
    const double s = 1 + p.alpha;
    f.values.resize(g.size());
    const double pre = std::pow(p.L, s) * std::pow(double(M), -s) / D.norm_constant();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Site x = g.site(i);
      const double u = double(x[0]) / double(M);
      f.values[i] = D(x) + pre * (hurwitz_zeta(s, 1 + u) + hurwitz_zeta(s, 1 - u));
    }
  } else {
    // Poisson summation: the folded kernel is the inverse DFT of D^ at grid momenta.
    f.values = fft_inverse(symmetric_spectrum(g, [&](const Momentum& k) { return D.hat(k); }));
  }
  f.wrapError = D.mass_outside_box(M / 2 - 1);
  return f;
}

KernelLadder::KernelLadder(const StepDistribution& D, long M, double max_wrap)
    : D_(D), base_(embed(D, M)), max_wrap_(max_wrap) {
  require(max_wrap > 0, "torus-kernels", "max_wrap", "wrap tolerance must be positive");
  spec_ = fft_forward(base_.grid, base_.values);
  symbol_.resize(spec_.data.size());
  for (std::size_t i = 0; i < symbol_.size(); ++i) symbol_[i] = spec_.data[i].real();
  // Truncated second moments by sup-norm shell (the folded field dominates D inside the box).
  const long H = M / 2;
  std::vector<double> shell(H + 1, 0.0);
  for (std::size_t i = 0; i < base_.values.size(); ++i) {
    const Site x = base_.grid.site(i);
    const long r = sup_norm(x, D.dim());
    if (r <= H) shell[r] += norm2(x, D.dim()) * base_.values[i];
  }
  std::vector<long> rhos;
  for (long r = 1; r < H - 1; r *= 2) rhos.push_back(r);
  rhos.push_back(H - 1);
  for (long rho : rhos) {
    double m2 = 0;
    for (long r = 0; r <= rho; ++r) m2 += shell[r];
    trunc_.emplace_back(D.mass_outside_box(rho), m2);
  }
}

double KernelLadder::wrap_error(long n) const {
  const double half = 0.5 * double(base_.M());
  double best = 1.0;
  for (const auto& [tau, m2] : trunc_) best = std::min(best, double(n) * (tau + m2 / (half * half)));
  if (n == 1) best = std::min(best, base_.wrapError);
  return best;
}

TorusField KernelLadder::power(long n) const {
  require(n >= 1, "torus-kernels", "n", "power must be >= 1");
  const double w = wrap_error(n);
  if (w > max_wrap_)
    throw CertificateError("torus-kernels", "wrapError", w, max_wrap_,
                           "wrap-around certificate for D^{*" + std::to_string(n) + "} exceeds tolerance; enlarge M");
  if (n == 1) return base_;
  // Repeated squaring of the Fourier multiplier.
  std::vector<double> result(symbol_.size(), 1.0), sq = symbol_;
  long e = n;
  while (e > 0) {
    if (e & 1)
      for (std::size_t i = 0; i < result.size(); ++i) result[i] *= sq[i];
    e >>= 1;
    if (e)
      for (double& v : sq) v *= v;
  }
  Spectrum s;
  s.grid = base_.grid;
  s.data.resize(result.size());
  for (std::size_t i = 0; i < result.size(); ++i) s.data[i] = result[i];
  TorusField out;
  out.grid = base_.grid;
  out.values = fft_inverse(s);
  out.wrapError = w;
  return out;
}

TorusField convolve_power(const KernelLadder& ladder, long n) { return ladder.power(n); }

namespace {

void finish(BoundReport& r) {
  std::vector<double> sups;
  r.finite = true;
  r.overall_sup = 0;
  for (const auto& row : r.rows) {
    sups.push_back(row.sup);
    r.finite = r.finite && std::isfinite(row.sup);
    r.overall_sup = std::max(r.overall_sup, row.sup);
  }
  r.trend = kendall_trend(sups);
  r.stable = r.finite && r.trend.p_increasing > 0.05;
}

void require_alpha_not_two(const StepDistribution& D) {
  require(std::fabs(D.params().alpha - 2) > 1e-12, "torus-kernels", "alpha", "heat-kernel bounds exclude alpha = 2");
}

}  // namespace

BoundReport verify_Dbd(const KernelLadder& ladder, const std::vector<long>& nRange) {
  const auto& p = ladder.distribution().params();
  BoundReport r;
  r.name = "Dbd";
  for (long n : nRange) {
    const TorusField f = ladder.power(n);
    BoundRow row;
    row.n = n;
    row.wrap = f.wrapError;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      if (f.values[i] > row.sup) {
        row.sup = f.values[i];
        row.argmax = f.grid.site(i);
      }
    row.sup *= std::pow(double(n), p.d / p.alpha2()) * std::pow(p.L, p.d);
    r.rows.push_back(row);
  }
  finish(r);
  return r;
}

BoundReport verify_HK1(const KernelLadder& ladder, const std::vector<long>& nRange, const std::vector<Site>& xGrid) {
  const StepDistribution& D = ladder.distribution();
  require_alpha_not_two(D);
  const auto& p = D.params();
  const double a2 = p.alpha2();
  BoundReport r;
  r.name = "HK1";
  for (long n : nRange) {
    const TorusField f = ladder.power(n);
    BoundRow row;
    row.n = n;
    row.wrap = f.wrapError;
    for (const Site& x : xGrid) {
      const double v = f.at(x) * std::pow(bracket(x, p.d, p.L), p.d + a2) / (double(n) * std::pow(p.L, a2));
      if (v > row.sup) {
        row.sup = v;
        row.argmax = x;
      }
    }
    r.rows.push_back(row);
  }
  finish(r);
  return r;
}

BoundReport verify_HK2(const KernelLadder& ladder, const std::vector<long>& nRange,
                       const std::vector<std::pair<Site, Site>>& pairs) {
  const StepDistribution& D = ladder.distribution();
  require_alpha_not_two(D);
  const auto& p = D.params();
  const double a2 = p.alpha2();
  for (const auto& [x, y] : pairs)
    require(norm(y, p.d) <= norm(x, p.d) / 3 + 1e-12, "torus-kernels", "y", "HK2 needs |y| <= |x|/3");
  BoundReport r;
  r.name = "HK2";
  for (long n : nRange) {
    const TorusField f = ladder.power(n);
    BoundRow row;
    row.n = n;
    row.wrap = f.wrapError;
    for (const auto& [x, y] : pairs) {
      const double second = std::fabs(f.at(x) - 0.5 * (f.at(x + y) + f.at(x - y)));
      const double by = bracket(y, p.d, p.L);
      const double v = second * std::pow(bracket(x, p.d, p.L), p.d + a2 + 2) / (std::pow(p.L, a2) * by * by * double(n));
      if (v > row.sup) {
        row.sup = v;
        row.argmax = x;
      }
    }
    r.rows.push_back(row);
  }
  finish(r);
  return r;
}

std::vector<Site> log_grid(int d, long rmax, double ratio) {
  std::vector<long> rs{0};
  for (double r = 1; r <= double(rmax) + 1e-9;) {
    const long ri = std::lround(r);
    if (ri != rs.back()) rs.push_back(ri);
    r = std::max(r * ratio, r + 1);
  }
  std::vector<Site> out;
  for (long r : rs) {
    out.push_back(axis_site(d, r));
    if (d > 1 && r > 0) out.push_back(diagonal_site(d, r));
  }
  return out;
}

std::vector<std::pair<Site, Site>> admissible_pairs(int d, const std::vector<Site>& xs, const std::vector<Site>& ys) {
  std::vector<std::pair<Site, Site>> out;
  for (const Site& x : xs)
    for (const Site& y : ys)
      if (norm(y, d) <= norm(x, d) / 3 + 1e-12) out.emplace_back(x, y);
  return out;
}

TorusField direct_power_1d(const TorusField& base, int n) {
  require(base.d() == 1, "torus-kernels", "d", "direct convolution oracle is one-dimensional");
  require(n >= 1, "torus-kernels", "n", "power must be >= 1");
  const long M = base.M();
  TorusField cur = base;
  for (int k = 1; k < n; ++k) {
    TorusField next = make_field(base.grid);
    for (long i = 0; i < M; ++i)
      for (long j = 0; j < M; ++j) next.values[(i + j) % M] += cur.values[i] * base.values[j];
    cur = std::move(next);
  }
  return cur;
}

}  // namespace lacelab
