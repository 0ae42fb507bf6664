#include "lacelab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "lacelab/errors.hpp"
#include "lacelab/fft.hpp"

namespace lacelab {

namespace {
constexpr double kExpTol = 1e-9;
}

void GenSeries::add(double e, double c) {
  if (e > emax_ + kExpTol || c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e - kExpTol,
                             [](const auto& t, double v) { return t.first < v; });
  if (it != terms_.end() && std::fabs(it->first - e) <= kExpTol) {
    it->second += c;
    return;
  }
  terms_.insert(it, {e, c});
}

GenSeries GenSeries::operator*(const GenSeries& o) const {
  GenSeries r(std::min(emax_, o.emax_));
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) r.add(e1 + e2, c1 * c2);
  return r;
}

GenSeries& GenSeries::operator+=(const GenSeries& o) {
  for (const auto& [e, c] : o.terms_) add(e, c);
  return *this;
}

GenSeries GenSeries::scaled(double c) const {
  GenSeries r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

GenSeries GenSeries::inverse() const {
  if (terms_.empty()) throw std::domain_error("GenSeries::inverse: empty series");
  const auto [e0, c0] = terms_.front();
  // this = c0 tau^e0 (1 + R),  1/this = tau^{-e0}/c0 * sum_m (-R)^m
  GenSeries R(emax_ + e0);
  for (std::size_t i = 1; i < terms_.size(); ++i) R.add(terms_[i].first - e0, terms_[i].second / c0);
  GenSeries sum(emax_ + e0), power(emax_ + e0);
  sum.add(0, 1);
  power.add(0, 1);
  const GenSeries minusR = R.scaled(-1);
  for (int m = 1; m < 400; ++m) {
    power = power * minusR;
    if (power.terms_.empty()) break;
    sum += power;
  }
  GenSeries out(emax_);
  for (const auto& [e, c] : sum.terms_) out.add(e - e0, c / c0);
  return out;
}

GenSeries GenSeries::compose(const std::vector<double>& taylor) const {
  for (const auto& t : terms_)
    if (t.first <= 0) throw std::domain_error("GenSeries::compose: needs positive exponents");
  GenSeries out(emax_), power(emax_);
  power.add(0, 1);
  for (std::size_t j = 0; j < taylor.size(); ++j) {
    if (j > 0) power = power * (*this);
    if (power.terms_.empty()) break;
    out += power.scaled(taylor[j]);
  }
  return out;
}

double GenSeries::coefficient_asymptotic(double t) const {
  double s = 0;
  for (const auto& [e, c] : terms_) {
    const double r = std::round(e);
    if (r >= 0 && std::fabs(e - r) < 1e-7) continue;  // analytic terms carry no power tail
    s += c * std::pow(t, -e - 1) / boost::math::tgamma(-e);
  }
  return s;
}

GenSeries subordinator_symbol(const SubordinatorWeights& T, double emax) {
  const double a = T.a(), s = T.s();
  if (std::fabs(a - std::round(a)) < 1e-9)
    throw DomainError("stepdist", "alpha", "even integer alpha has logarithmic generating-function corrections");
  GenSeries z(emax);
  z.add(a, -std::tgamma(-a) / T.norm_constant());
  double fact = 1;
  for (int k = 1; k <= int(emax) + 1; ++k) {
    fact *= k;
    z.add(k, -zeta(s - k) * ((k % 2) ? -1.0 : 1.0) / (fact * T.norm_constant()));
  }
  return z;
}

std::vector<double> series_multiply(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  return linear_convolution(a, b, n);
}

std::vector<double> series_inverse(const std::vector<double>& a, std::size_t n) {
  if (a.empty() || a[0] == 0) throw std::domain_error("series_inverse: a[0] must be nonzero");
  std::vector<double> b{1.0 / a[0]};
  std::size_t len = 1;
  while (len < n) {
    len = std::min(2 * len, n);
    std::vector<double> ab = series_multiply(std::vector<double>(a.begin(), a.begin() + long(std::min(a.size(), len))), b, len);
    for (double& v : ab) v = -v;
    ab[0] += 2;
    b = series_multiply(b, ab, len);
  }
  b.resize(n);
  return b;
}

namespace {

std::vector<double> phi_coefficients(const SubordinatorWeights& T, long N) {
  std::vector<double> phi(N + 1, 0.0);
  for (long t = 1; t <= N; ++t) phi[t] = T(double(t));
  return phi;
}

void attach_tail(CoefficientSequence& c, GenSeries g) {
  auto series = std::make_shared<GenSeries>(std::move(g));
  c.tail = [series](double t) { return series->coefficient_asymptotic(t); };
  const double e = c.exact.back();
  const double a = c.tail(double(c.N()));
  c.tail_mismatch = e != 0 ? std::fabs(a - e) / std::fabs(e) : std::fabs(a);
}

constexpr double kSeriesOrder = 5.0;

}  // namespace

CoefficientSequence subordinator_sequence(const SubordinatorWeights& T, long N) {
  CoefficientSequence c;
  c.label = "T";
  c.exact = phi_coefficients(T, N);
  const double zs = T.norm_constant(), s = T.s();
  c.tail = [zs, s](double t) { return std::pow(t, -s) / zs; };
  return c;
}

CoefficientSequence renewal_sequence(const SubordinatorWeights& T, double p, long N) {
  require(p >= 0 && p <= 1, "green", "p", "fugacity must be in [0,1]");
  std::vector<double> a = phi_coefficients(T, N);
  for (double& v : a) v *= -p;
  a[0] = 1;
  CoefficientSequence c;
  c.label = "renewal";
  c.exact = series_inverse(a, std::size_t(N + 1));
  if (p == 0) return c;
  const GenSeries z = subordinator_symbol(T, kSeriesOrder);
  if (p == 1) {
    attach_tail(c, z.inverse());
  } else {
    std::vector<double> taylor;
    for (int j = 0; j < 40; ++j) taylor.push_back(std::pow(-p, j) / std::pow(1 - p, j + 1));
    attach_tail(c, z.compose(taylor));
  }
  return c;
}

CoefficientSequence power_sequence(const SubordinatorWeights& T, int n, long N) {
  require(n >= 0, "torus-kernels", "n", "power must be >= 0");
  const std::vector<double> phi = phi_coefficients(T, N);
  std::vector<double> pw(N + 1, 0.0);
  pw[0] = 1;
  for (int i = 0; i < n; ++i) pw = series_multiply(pw, phi, std::size_t(N + 1));
  CoefficientSequence c;
  c.label = "T^*" + std::to_string(n);
  c.exact = std::move(pw);
  if (n == 0) return c;
  std::vector<double> taylor(n + 1);
  double binom = 1;
  for (int j = 0; j <= n; ++j) {
    taylor[j] = ((j % 2) ? -1.0 : 1.0) * binom;
    binom = binom * (n - j) / (j + 1);
  }
  attach_tail(c, subordinator_symbol(T, kSeriesOrder).compose(taylor));
  return c;
}

CoefficientSequence poisson_sequence(const SubordinatorWeights& T, double Tc, long N) {
  require(Tc > 0, "green", "T", "time cutoff must be positive");
  const std::vector<double> phi = phi_coefficients(T, N);
  std::vector<double> acc(N + 1, 0.0), pw(N + 1, 0.0);
  pw[0] = 1;
  for (int n = 0;; ++n) {
    const double gn = gamma_p(n + 1.0, Tc);  // P(Poisson(Tc) >= n+1)
    for (long t = 0; t <= N; ++t) acc[t] += gn * pw[t];
    if (gn < 1e-18 && n > Tc) break;
    pw = series_multiply(pw, phi, std::size_t(N + 1));
  }
  CoefficientSequence c;
  c.label = "poisson";
  c.exact = std::move(acc);
  std::vector<double> taylor;
  double term = Tc;
  for (int j = 0; j < 60; ++j) {
    taylor.push_back(((j % 2) ? -1.0 : 1.0) * term);
    term *= Tc / (j + 2);
  }
  attach_tail(c, subordinator_symbol(T, kSeriesOrder).compose(taylor));
  return c;
}

LayerTable::LayerTable(const BlockDistribution& U, long m_max, long t_exact, int ell)
    : U_(U), m_max_(m_max), t_exact_(t_exact), d_(U.dim()), separable_(U.separable()) {
  require(m_max >= 0, "stepdist", "m_max", "window must be nonnegative");
  require(t_exact >= 1, "stepdist", "t_exact", "need at least one exact layer");
  const int order = std::max(4, ((ell + 2) + 1) / 2 * 2);
  if (separable_) {
    BlockDistribution U1(1, U.L(), U.profile());
    e1_ = std::make_unique<EdgeworthExpansion>(cumulants(U1, order), ell);
    const long R = U.radius();
    const auto& u = U.marginal();
    std::vector<double> cur{1.0};  // u^{*0} on [-0, 0]
    table_.assign(t_exact + 1, std::vector<double>(m_max + 1, 0.0));
    table_[0][0] = 1;
    for (long t = 1; t <= t_exact; ++t) {
      const long W = (t - 1) * R, Wn = t * R;
      std::vector<double> next(2 * Wn + 1, 0.0);
      for (long i = 0; i <= 2 * W; ++i) {
        const double v = cur[i];
        if (v == 0) continue;
        for (long j = 0; j <= 2 * R; ++j) next[i + j] += v * u[j];
      }
      cur.swap(next);
      for (long m = 0; m <= std::min(m_max, Wn); ++m) table_[t][m] = cur[Wn + m];
    }
    double peak = table_[t_exact][0], worst = 0;
    for (long m = 0; m <= m_max; ++m) {
      const double xm = double(m);
      worst = std::max(worst, std::fabs(table_[t_exact][m] - e1_->eval(double(t_exact), &xm)));
    }
    switch_mismatch_ = worst / peak;
  } else {
    require(d_ <= 2, "stepdist", "d", "non-separable profiles are limited to d <= 2");
    ed_ = std::make_unique<EdgeworthExpansion>(cumulants(U, order), ell);
    const long n = 2 * m_max + 1;
    const std::size_t size = d_ == 1 ? std::size_t(n) : std::size_t(n * n);
    table_.assign(t_exact + 1, std::vector<double>(size, 0.0));
    table_[0][d_ == 1 ? std::size_t(m_max) : std::size_t(m_max * n + m_max)] = 1;
    ExactLayers layers(U_);
    for (long t = 1; t <= t_exact; ++t) {
      layers.advance();
      layers.for_each([&](const Site& x, double v) {
        if (sup_norm(x, d_) > m_max) return;
        const std::size_t idx = d_ == 1 ? std::size_t(x[0] + m_max) : std::size_t((x[0] + m_max) * n + x[1] + m_max);
        table_[t][idx] = v;
      });
    }
    double peak = 0, worst = 0;
    for_each_in_box(d_, m_max, [&](const Site& x) {
      const double ex = (*this)(t_exact, x);
      peak = std::max(peak, ex);
      worst = std::max(worst, std::fabs(ex - smooth(double(t_exact), x)));
    });
    switch_mismatch_ = worst / peak;
  }
}

double LayerTable::one_d(long t, long m) const {
  m = std::labs(m);
  if (m > t * U_.radius()) return 0;
  if (m > m_max_) throw DomainError("stepdist", "m_max", "layer table window too small for requested site");
  return table_[t][m];
}

double LayerTable::operator()(long t, const Site& x) const {
  if (t > t_exact_) return smooth(double(t), x);
  if (separable_) {
    double v = 1;
    for (int i = 0; i < d_; ++i) {
      v *= one_d(t, x[i]);
      if (v == 0) return 0;
    }
    return v;
  }
  if (sup_norm(x, d_) > t * U_.radius()) return 0;
  if (sup_norm(x, d_) > m_max_) throw DomainError("stepdist", "m_max", "layer table window too small for requested site");
  const long n = 2 * m_max_ + 1;
  const std::size_t idx = d_ == 1 ? std::size_t(x[0] + m_max_) : std::size_t((x[0] + m_max_) * n + x[1] + m_max_);
  return table_[t][idx];
}

double LayerTable::smooth(double t, const Site& x) const {
  if (separable_) {
    double v = 1;
    for (int i = 0; i < d_; ++i) {
      const double xi = double(x[i]);
      v *= e1_->eval(t, &xi);
    }
    return v;
  }
  return ed_->eval(t, x);
}

double LayerTable::box_probability_1d(long t, long R) const {
  require(separable_, "stepdist", "profile", "box probabilities need a separable profile");
  require(t <= t_exact_, "stepdist", "t", "box probability only for exact layers");
  double s = 0;
  for (long m = -R + 1; m <= R; ++m) s += one_d(t, m);
  return s;
}

TimeSum::TimeSum(CoefficientSequence c, long t_exact) : c_(std::move(c)), t_exact_(std::min(t_exact, c_.N())) {
  constexpr int q = 12;
  constexpr double growth = 0.06;
  long ta = t_exact_ + 1;
  const long N = c_.N();
  while (ta <= N) {
    const long len = std::max<long>(q, long(growth * double(ta)));
    const long tb = std::min(N, ta + len - 1);
    Block b;
    if (tb - ta + 1 <= q) {
      for (long t = ta; t <= tb; ++t) {
        b.nodes.push_back(double(t));
        b.weights.push_back(c_.exact[t]);
      }
    } else {
      const double mid = 0.5 * (ta + tb), half = 0.5 * (tb - ta);
      std::vector<double> bw(q);
      b.nodes.resize(q);
      b.weights.assign(q, 0.0);
      for (int j = 0; j < q; ++j) {
        const double th = (2 * j + 1) * std::numbers::pi / (2 * q);
        b.nodes[j] = mid + half * std::cos(th);
        bw[j] = ((j % 2) ? -1.0 : 1.0) * std::sin(th);
      }
      std::vector<double> l(q);
      for (long t = ta; t <= tb; ++t) {
        double den = 0;
        int hit = -1;
        for (int j = 0; j < q; ++j) {
          const double diff = double(t) - b.nodes[j];
          if (std::fabs(diff) < 1e-13) {
            hit = j;
            break;
          }
          l[j] = bw[j] / diff;
          den += l[j];
        }
        if (hit >= 0) {
          b.weights[hit] += c_.exact[t];
          continue;
        }
        for (int j = 0; j < q; ++j) b.weights[j] += c_.exact[t] * l[j] / den;
      }
    }
    blocks_.push_back(std::move(b));
    ta = tb + 1;
  }
}

double TimeSum::apply(const std::function<double(long)>& exact_part,
                      const std::function<double(double)>& smooth_part) const {
  double s = 0;
  for (long t = 0; t <= t_exact_; ++t)
    if (c_.exact[t] != 0) s += c_.exact[t] * exact_part(t);
  for (const auto& b : blocks_)
    for (std::size_t j = 0; j < b.nodes.size(); ++j) s += b.weights[j] * smooth_part(b.nodes[j]);
  if (!c_.tail) return s;
  // int_{N+1/2}^inf c(t) g(t) dt with t = T0 e^y
  const double T0 = double(c_.N()) + 0.5;
  static const double edges[] = {0, 0.5, 1, 2, 4, 8, 16, 32, 64, 128};
  double tail = 0, last = 0;
  for (int i = 0; i + 1 < int(std::size(edges)); ++i) {
    last = gl_integrate(
        [&](double y) {
          const double t = T0 * std::exp(y);
          return t * c_.tail(t) * smooth_part(t);
        },
        edges[i], edges[i + 1], 20);
    tail += last;
  }
  if (std::fabs(last) > 1e-9 * std::max(std::fabs(s + tail), 1e-300))
    throw CertificateError("green", "time_tail", std::fabs(last), 1e-9 * std::fabs(s + tail),
                           "time series does not converge (kernel not summable for these parameters)");
  return s + tail;
}

double TimeSum::apply(const LayerTable& layers, const Site& x) const {
  if (layers.t_exact() < t_exact_)
    throw DomainError("stepdist", "t_exact", "layer table shorter than the exact time range");
  return apply([&](long t) { return layers(t, x); }, [&](double t) { return layers.smooth(t, x); });
}

double TimeSum::total_mass() const {
  return apply([](long) { return 1.0; }, [](double) { return 1.0; });
}

}  // namespace lacelab
