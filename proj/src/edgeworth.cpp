#include "lacelab/edgeworth.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "lacelab/errors.hpp"
#include "lacelab/stats.hpp"

namespace lacelab {

namespace {

int total(const MultiIndex& n) {
  int s = 0;
  for (int v : n) s += v;
  return s;
}

double factorial_prod(const MultiIndex& n) {
  double f = 1;
  for (int v : n)
    for (int k = 2; k <= v; ++k) f *= k;
  return f;
}

// All multi-indices in d variables with total degree <= maxdeg.
std::vector<MultiIndex> indices_upto(int d, int maxdeg) {
  std::vector<MultiIndex> out;
  MultiIndex n{};
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d) {
      out.push_back(n);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      n[pos] = v;
      rec(pos + 1, left - v);
    }
    n[pos] = 0;
  };
  rec(0, maxdeg);
  return out;
}

}  // namespace

Poly Poly::constant(int d, double c) {
  Poly p;
  p.d = d;
  p.terms[MultiIndex{}] = c;
  return p;
}

int Poly::degree() const {
  int g = 0;
  for (const auto& [n, c] : terms)
    if (c != 0) g = std::max(g, total(n));
  return g;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [n, c] : o.terms) terms[n] += c;
  return *this;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.d = d;
  for (const auto& [n1, c1] : terms)
    for (const auto& [n2, c2] : o.terms) {
      MultiIndex n;
      for (int i = 0; i < kMaxDim; ++i) n[i] = n1[i] + n2[i];
      r.terms[n] += c1 * c2;
    }
  return r;
}

Poly Poly::scaled(double c) const {
  Poly r = *this;
  for (auto& [n, v] : r.terms) v *= c;
  return r;
}

Poly Poly::truncated(int max_degree) const {
  Poly r;
  r.d = d;
  for (const auto& [n, c] : terms)
    if (total(n) <= max_degree) r.terms[n] = c;
  return r;
}

double Poly::coef(const MultiIndex& n) const {
  auto it = terms.find(n);
  return it == terms.end() ? 0.0 : it->second;
}

double CumulantSet::get(const MultiIndex& n) const {
  auto it = Q.find(n);
  return it == Q.end() ? 0.0 : it->second;
}

CumulantSet cumulants(const BlockDistribution& U, int maxOrder) {
  require(maxOrder >= 2 && maxOrder <= 8 && maxOrder % 2 == 0, "edgeworth", "maxOrder",
          "cumulant order must be even and in [2, 8]");
  const int d = U.dim();
  CumulantSet out;
  out.d = d;
  out.maxOrder = maxOrder;
  out.sigmaL2 = U.sigmaL2();
  // moment series M(z) = sum_n mu_n z^n / n!
  Poly X;
  X.d = d;
  for (const auto& n : indices_upto(d, maxOrder)) {
    if (total(n) == 0) continue;
    double mu = 0;
    for (const auto& [x, w] : U.support()) {
      double m = w;
      for (int i = 0; i < d; ++i) m *= std::pow(double(x[i]), n[i]);
      mu += m;
    }
    if (mu != 0) X.terms[n] = mu / factorial_prod(n);
  }
  // log(1 + X) = sum_j (-1)^{j+1} X^j / j
  Poly logM;
  logM.d = d;
  Poly Xj = Poly::constant(d, 1.0);
  for (int j = 1; j <= maxOrder; ++j) {
    Xj = (Xj * X).truncated(maxOrder);
    logM += Xj.scaled((j % 2 ? 1.0 : -1.0) / j);
  }
  for (const auto& [n, c] : logM.terms) {
    double q = c * factorial_prod(n);
    if (std::fabs(q) < 1e-13 * std::pow(std::max(1.0, out.sigmaL2), 0.5 * total(n))) q = 0;
    out.Q[n] = q;
  }
  return out;
}

EdgeworthExpansion::EdgeworthExpansion(const CumulantSet& Q, int ell) : d_(Q.d), ell_(ell), sigmaL2_(Q.sigmaL2) {
  require(ell >= 0, "edgeworth", "ell", "truncation order must be >= 0");
  require(Q.maxOrder >= ell + 2, "edgeworth", "ell", "cumulant order too low for this truncation");
  const double sigma = std::sqrt(sigmaL2_);
  // f_l = Q~_{l+2}(z), l = 1..ell
  std::vector<Poly> f(ell + 1);
  for (int l = 1; l <= ell; ++l) {
    f[l].d = d_;
    for (const auto& [n, q] : Q.Q)
      if (total(n) == l + 2 && q != 0) f[l].terms[n] = q / std::pow(sigma, l + 2) / factorial_prod(n);
  }
  P_.resize(ell + 1);
  P_[0] = Poly::constant(d_, 1.0);
  for (int j = 1; j <= ell; ++j) {
    Poly acc;
    acc.d = d_;
    for (int l = 1; l <= j; ++l) acc += (f[l] * P_[j - l]).scaled(double(l));
    P_[j] = acc.scaled(1.0 / j);
    for (auto it = P_[j].terms.begin(); it != P_[j].terms.end();)
      it = (it->second == 0) ? P_[j].terms.erase(it) : std::next(it);
  }
}

double gaussian_nu(int d, double c, double r2) {
  return std::pow(d / (2 * std::numbers::pi * c), 0.5 * d) * std::exp(-d * r2 / (2 * c));
}

double EdgeworthExpansion::scaled_term(int j, const double* xt) const {
  const Poly& p = P_.at(j);
  const int deg = p.degree();
  const double sd = std::sqrt(double(d_));
  // He_n(sqrt(d) x_s) for each coordinate
  std::array<std::vector<double>, kMaxDim> he;
  double r2 = 0;
  for (int s = 0; s < d_; ++s) {
    const double z = sd * xt[s];
    r2 += xt[s] * xt[s];
    he[s].resize(deg + 1);
    he[s][0] = 1;
    if (deg >= 1) he[s][1] = z;
    for (int n = 1; n < deg; ++n) he[s][n + 1] = z * he[s][n] - n * he[s][n - 1];
  }
  double sum = 0;
  for (const auto& [n, c] : p.terms) {
    double v = c;
    for (int s = 0; s < d_; ++s) v *= std::pow(sd, n[s]) * he[s][n[s]];
    sum += v;
  }
  return sum * gaussian_nu(d_, 1.0, r2);
}

double EdgeworthExpansion::term(int j, double t, const double* x) const {
  const double scale = std::sqrt(sigmaL2_ * t);
  double xt[kMaxDim];
  for (int s = 0; s < d_; ++s) xt[s] = x[s] / scale;
  return std::pow(scale, -d_) * std::pow(t, -0.5 * j) * scaled_term(j, xt);
}

double EdgeworthExpansion::eval(double t, const double* x) const {
  const double scale = std::sqrt(sigmaL2_ * t);
  double xt[kMaxDim];
  for (int s = 0; s < d_; ++s) xt[s] = x[s] / scale;
  double sum = 0;
  for (int j = 0; j <= ell_; ++j)
    if (!P_[j].terms.empty()) sum += std::pow(t, -0.5 * j) * scaled_term(j, xt);
  return std::pow(scale, -d_) * sum;
}

double EdgeworthExpansion::eval(double t, const Site& x) const {
  double y[kMaxDim];
  for (int s = 0; s < d_; ++s) y[s] = double(x[s]);
  return eval(t, y);
}

ExactLayers::ExactLayers(const BlockDistribution& U) : U_(U) {
  require(U.dim() <= 2, "edgeworth", "d", "exact convolution layers support d in {1,2}");
  if (U.separable()) u1t_ = {1.0};
  else vals_ = {1.0};
}

void ExactLayers::advance() {
  const long R = U_.radius();
  const long W = half_width(), Wn = W + R;
  if (U_.separable()) {
    std::vector<double> next(2 * Wn + 1, 0.0);
    const auto& u = U_.marginal();
    for (long i = -W; i <= W; ++i) {
      const double v = u1t_[i + W];
      if (v == 0) continue;
      for (long m = -R; m <= R; ++m) next[i + m + Wn] += v * u[m + R];
    }
    u1t_.swap(next);
  } else if (U_.dim() == 1) {
    std::vector<double> next(2 * Wn + 1, 0.0);
    for (long i = -W; i <= W; ++i)
      for (const auto& [y, w] : U_.support()) next[i + y[0] + Wn] += vals_[i + W] * w;
    vals_.swap(next);
  } else {
    const long n = 2 * W + 1, nn = 2 * Wn + 1;
    std::vector<double> next(nn * nn, 0.0);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        const double v = vals_[i * n + j];
        if (v == 0) continue;
        for (const auto& [y, w] : U_.support()) next[(i + y[0] + R) * nn + (j + y[1] + R)] += v * w;
      }
    vals_.swap(next);
  }
  ++t_;
}

double ExactLayers::operator()(const Site& x) const {
  const long W = half_width();
  for (int i = 0; i < U_.dim(); ++i)
    if (std::labs(x[i]) > W) return 0;
  if (U_.separable()) {
    double v = 1;
    for (int i = 0; i < U_.dim(); ++i) v *= u1t_[x[i] + W];
    return v;
  }
  if (U_.dim() == 1) return vals_[x[0] + W];
  const long n = 2 * W + 1;
  return vals_[(x[0] + W) * n + (x[1] + W)];
}

std::vector<long> default_A1_times() {
  std::vector<long> ts;
  for (int j = 0; j <= 24; ++j) {
    const long t = std::lround(4 * std::pow(2.0, j / 4.0));
    if (ts.empty() || ts.back() != t) ts.push_back(t);
  }
  return ts;
}

TheoremA1Report verify_theorem_A1(const BlockDistribution& U, int ell, const std::vector<long>& tRange,
                                  double tolerance) {
  require(U.dim() <= 2, "edgeworth", "d", "exact verification supports d in {1,2}");
  require(tRange.size() >= 3, "edgeworth", "tRange", "need at least three t values for a slope fit");
  for (std::size_t i = 1; i < tRange.size(); ++i)
    require(tRange[i] > tRange[i - 1] && tRange[0] >= 1, "edgeworth", "tRange", "t values must be increasing and >= 1");
  const int order = std::max(4, ((ell + 2) + 1) / 2 * 2);
  EdgeworthExpansion E(cumulants(U, order), ell);
  ExactLayers layers(U);
  TheoremA1Report rep;
  rep.d = U.dim();
  rep.ell = ell;
  rep.tolerance = tolerance;
  rep.expected = -0.5 * (U.dim() + ell);
  std::vector<double> lt, le;
  std::size_t next = 0;
  while (next < tRange.size()) {
    layers.advance();
    if (layers.t() != tRange[next]) continue;
    const double t = double(layers.t());
    const double scale2 = U.sigmaL2() * t;
    TheoremA1Row row;
    row.t = layers.t();
    layers.for_each([&](const Site& x, double v) {
      const double err = std::fabs(v - E.eval(t, x));
      const double xt = std::sqrt(norm2(x, U.dim()) / scale2);
      row.sup_error = std::max(row.sup_error, err);
      row.weighted_sup_error = std::max(row.weighted_sup_error, (1 + std::pow(xt, ell + 2)) * err);
    });
    rep.rows.push_back(row);
    rep.constant = std::max(rep.constant, row.weighted_sup_error * std::pow(t, 0.5 * (U.dim() + ell)));
    lt.push_back(std::log(t));
    le.push_back(std::log(row.weighted_sup_error));
    ++next;
  }
  const auto fit = linear_fit(lt, le);
  rep.slope = fit.slope;
  rep.slope_stderr = fit.slope_stderr;
  rep.bound_ok = rep.slope <= rep.expected + tolerance;
  return rep;
}

}  // namespace lacelab
