#pragma once

// Time-domain machinery for subordinated walks.
//
// Every kernel built from D = sum_t T(t) U^{*t} has the form
//     K(x) = sum_t c(t) U^{*t}(x)
// for a coefficient sequence c: T itself (K = D), the coefficients of Phi^n
// (K = D^{*n}), of 1/(1 - p Phi) (K = S_p), or of a Poisson mixture of Phi^n
// (the small-time kernel of the error decomposition). Sequences are known
// exactly up to N and through their singular expansion at u = 1 beyond.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lacelab/block.hpp"
#include "lacelab/edgeworth.hpp"

namespace lacelab {

/// Generalized power series sum_i c_i tau^{e_i} with real exponents.
class GenSeries {
 public:
  GenSeries() = default;
  explicit GenSeries(double emax) : emax_(emax) {}
  void add(double e, double c);
  const std::vector<std::pair<double, double>>& terms() const { return terms_; }
  double emax() const { return emax_; }
  GenSeries operator*(const GenSeries& o) const;
  GenSeries& operator+=(const GenSeries& o);
  GenSeries scaled(double c) const;
  /// 1 / (this); leading coefficient must be nonzero.
  GenSeries inverse() const;
  /// sum_j a_j this^j (this must have only positive exponents).
  GenSeries compose(const std::vector<double>& taylor) const;
  /// Large-t coefficient asymptotics: c(t) ~ sum C_e t^{-e-1} / Gamma(-e).
  double coefficient_asymptotic(double t) const;

 private:
  double emax_ = 4;
  std::vector<std::pair<double, double>> terms_;  // sorted by exponent
};

/// Series of z(tau) = 1 - Phi(e^{-tau}) for the subordinator generating function.
GenSeries subordinator_symbol(const SubordinatorWeights& T, double emax);

/// c(t) for 0 <= t <= N exactly plus a tail function for t > N.
struct CoefficientSequence {
  std::vector<double> exact;                 // c(0..N)
  std::function<double(double)> tail;        // c(t), t > N (may be empty: zero tail)
  double tail_mismatch = 0;                  // |tail(N) - exact(N)| / |exact(N)|
  std::string label;

  long N() const { return long(exact.size()) - 1; }
  double operator()(long t) const {
    if (t <= N()) return exact[t];
    return tail ? tail(double(t)) : 0.0;
  }
};

/// Truncated product of power series via FFT (first n coefficients).
std::vector<double> series_multiply(const std::vector<double>& a, const std::vector<double>& b, std::size_t n);
/// First n coefficients of 1/a (a[0] != 0), Newton iteration.
std::vector<double> series_inverse(const std::vector<double>& a, std::size_t n);

CoefficientSequence subordinator_sequence(const SubordinatorWeights& T, long N);
/// Coefficients of 1/(1 - p Phi(u)): w_p(t) = sum_n p^n T^{*n}(t).
CoefficientSequence renewal_sequence(const SubordinatorWeights& T, double p, long N);
/// Coefficients of Phi(u)^n, i.e. T^{*n}.
CoefficientSequence power_sequence(const SubordinatorWeights& T, int n, long N);
/// Coefficients of int_0^Tc e^{-s(1-Phi(u))} ds = sum_n P(Poisson(Tc) > n) Phi^n.
CoefficientSequence poisson_sequence(const SubordinatorWeights& T, double Tc, long N);

/// Exact U^{*t}(x) for t <= t_exact (direct convolution) and the Edgeworth
/// expansion beyond. Separable profiles use one-dimensional tables.
class LayerTable {
 public:
  LayerTable(const BlockDistribution& U, long m_max, long t_exact, int ell = 6);

  const BlockDistribution& block() const { return U_; }
  long t_exact() const { return t_exact_; }
  long m_max() const { return m_max_; }
  /// U^{*t}(x), exact for t <= t_exact.
  double operator()(long t, const Site& x) const;
  /// Edgeworth value at real t (used beyond t_exact).
  double smooth(double t, const Site& x) const;
  /// max |exact - expansion| / peak at t = t_exact over the table (diagnostic).
  double switch_mismatch() const { return switch_mismatch_; }
  /// P(S_t^{(1)} in (-R, R]) for one coordinate (separable), t <= t_exact.
  double box_probability_1d(long t, long R) const;

 private:
  double one_d(long t, long m) const;
  BlockDistribution U_;
  long m_max_, t_exact_;
  int d_;
  bool separable_;
  std::vector<std::vector<double>> table_;   // [t][m] (m >= 0) or [t][canonical index]
  std::unique_ptr<EdgeworthExpansion> e1_;   // one-dimensional expansion
  std::unique_ptr<EdgeworthExpansion> ed_;   // d-dimensional expansion (non-separable)
  double switch_mismatch_ = 0;
};

/// Evaluates sum_t c(t) g(t) for g exact up to t_exact and smooth beyond,
/// using block-wise polynomial product quadrature on (t_exact, N] and a
/// log-substituted integral for t > N.
class TimeSum {
 public:
  TimeSum(CoefficientSequence c, long t_exact);
  const CoefficientSequence& sequence() const { return c_; }
  double apply(const std::function<double(long)>& exact_part,
               const std::function<double(double)>& smooth_part) const;
  double apply(const LayerTable& layers, const Site& x) const;
  /// Mass sum_t c(t) (finite only for summable sequences).
  double total_mass() const;

 private:
  struct Block {
    std::vector<double> nodes, weights;
  };
  CoefficientSequence c_;
  long t_exact_;
  std::vector<Block> blocks_;
};

}  // namespace lacelab
