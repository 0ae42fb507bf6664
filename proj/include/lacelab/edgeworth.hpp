#pragma once

#include <array>
#include <map>
#include <vector>

#include "lacelab/block.hpp"

namespace lacelab {

using MultiIndex = std::array<int, kMaxDim>;

/// Polynomial in d variables, sparse over multi-indices.
struct Poly {
  int d = 1;
  std::map<MultiIndex, double> terms;

  static Poly constant(int d, double c);
  int degree() const;
  Poly& operator+=(const Poly& o);
  Poly operator*(const Poly& o) const;
  Poly scaled(double c) const;
  Poly truncated(int max_degree) const;
  double coef(const MultiIndex& n) const;
};

struct CumulantSet {
  int d = 1;
  int maxOrder = 4;
  double sigmaL2 = 0;
  /// Q_n with the convention log U^(k) = sum_n Q_n prod (i k_s)^{n_s}/n_s!.
  std::map<MultiIndex, double> Q;

  double get(const MultiIndex& n) const;
};

/// Moments by direct summation over the support, cumulants from log of the
/// moment series. maxOrder must be even and <= 8 (a DomainError otherwise).
CumulantSet cumulants(const BlockDistribution& U, int maxOrder);

/// l-truncated Cramer-Edgeworth expansion
///   (sigma_L^2 t)^{-d/2} sum_{j<=l} t^{-j/2} P~_j nu_1(x~),  x~ = x/sqrt(sigma_L^2 t).
class EdgeworthExpansion {
 public:
  EdgeworthExpansion(const CumulantSet& Q, int ell);

  int dim() const { return d_; }
  int ell() const { return ell_; }
  double sigmaL2() const { return sigmaL2_; }
  /// P_j as a polynomial in z = ik.
  const Poly& P(int j) const { return P_.at(j); }

  double eval(double t, const double* x) const;
  double eval(double t, const Site& x) const;
  /// single term j of the expansion
  double term(int j, double t, const double* x) const;
  /// P~_j nu_1 at scaled point xt (no prefactor).
  double scaled_term(int j, const double* xt) const;

 private:
  int d_;
  int ell_;
  double sigmaL2_;
  std::vector<Poly> P_;
};

/// nu_c(x) = (d / 2 pi c)^{d/2} exp(-d|x|^2 / 2c)
double gaussian_nu(int d, double c, double r2);

/// Exact U^{*t} for d in {1,2} by direct windowed convolution.
/// Values are stored on the full support [-tR, tR]^d.
class ExactLayers {
 public:
  explicit ExactLayers(const BlockDistribution& U);
  void advance();  // t -> t+1
  long t() const { return t_; }
  long half_width() const { return t_ * U_.radius(); }
  double operator()(const Site& x) const;
  /// Visit all support points with their values.
  template <class F>
  void for_each(F&& f) const {
    const long W = half_width(), n = 2 * W + 1;
    if (U_.dim() == 1) {
      for (long i = 0; i < n; ++i) f(make_site({i - W}), U_.separable() ? u1t_[i] : vals_[i]);
    } else {
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
          f(make_site({i - W, j - W}), U_.separable() ? u1t_[i] * u1t_[j] : vals_[i * n + j]);
    }
  }

 private:
  BlockDistribution U_;
  long t_ = 0;
  std::vector<double> vals_;
  std::vector<double> u1t_;  // separable shortcut: one-dimensional u^{*t}
};

struct TheoremA1Row {
  long t = 0;
  double sup_error = 0;
  double weighted_sup_error = 0;
};

struct TheoremA1Report {
  int d = 1;
  int ell = 0;
  std::vector<TheoremA1Row> rows;
  double slope = 0;          // fitted t-exponent of the weighted sup-error
  double slope_stderr = 0;
  double expected = 0;       // -(d+l)/2
  bool bound_ok = false;     // slope <= expected + tolerance
  double tolerance = 0.15;
  double constant = 0;       // sup_t weighted_sup_error * t^{(d+l)/2}
};

/// Compare exact U^{*t} against the l-truncated expansion for t in tRange.
TheoremA1Report verify_theorem_A1(const BlockDistribution& U, int ell, const std::vector<long>& tRange,
                                  double tolerance = 0.15);

/// Default t grid: 4..256 on a geometric grid (ratio 2^{1/4}).
std::vector<long> default_A1_times();

}  // namespace lacelab
