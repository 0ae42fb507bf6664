#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lacelab/fft.hpp"
#include "lacelab/stats.hpp"
#include "lacelab/stepdist.hpp"

namespace lacelab {

/// Real field on (Z/M)^d, indexed by representatives in (-M/2, M/2]^d.
struct TorusField {
  Grid grid;
  std::vector<double> values;
  /// Uniform bound on |stored - Z^d value|.
  double wrapError = 0;

  int d() const { return grid.d; }
  long M() const { return grid.M; }
  double at(const Site& x) const { return values[grid.index(x)]; }
  double& at(const Site& x) { return values[grid.index(x)]; }
  double sum() const;
  double max_abs_diff(const TorusField& o) const;
  /// Largest deviation from invariance under sign flips and coordinate swaps.
  double symmetry_defect() const;
};

TorusField make_field(const Grid& g, double fill = 0);
TorusField delta_field(const Grid& g);

/// Circular convolution via FFT.
TorusField convolve(const TorusField& a, const TorusField& b);

/// Grid spectrum of an even, permutation-symmetric symbol; each canonical momentum is
/// evaluated once.
Spectrum symmetric_spectrum(const Grid& g, const std::function<double(const Momentum&)>& f);

/// Fold all of D onto the torus. wrapError is the mass with |x|_inf >= M/2.
TorusField embed(const StepDistribution& D, long M);

/// D^{*n} on the torus by repeated squaring in Fourier space.
class KernelLadder {
 public:
  /// `max_wrap`: convolve_power refuses when the wrap certificate exceeds it.
  KernelLadder(const StepDistribution& D, long M, double max_wrap = 1e-6);

  const StepDistribution& distribution() const { return D_; }
  const TorusField& base() const { return base_; }
  const Grid& grid() const { return base_.grid; }
  double max_wrap() const { return max_wrap_; }
  /// Certified bound on |D_M^{*n}(x) - D^{*n}(x)|, nondecreasing in n.
  double wrap_error(long n) const;
  /// Fourier multiplier D_M^(k) (real) of the embedded field.
  const std::vector<double>& symbol() const { return symbol_; }
  const Spectrum& spectrum() const { return spec_; }

  TorusField power(long n) const;

 private:
  StepDistribution D_;
  TorusField base_;
  Spectrum spec_;
  std::vector<double> symbol_;
  double max_wrap_;
  std::vector<std::pair<double, double>> trunc_;  // (tau_rho, truncated second moment)
};

TorusField convolve_power(const KernelLadder& ladder, long n);

struct BoundRow {
  long n = 0;
  double sup = 0;          // sup over the sampled x (or pairs) of the normalized ratio
  Site argmax{};
  double wrap = 0;         // wrap certificate at this n
};

struct BoundReport {
  std::string name;
  std::vector<BoundRow> rows;
  double overall_sup = 0;
  bool finite = false;
  KendallResult trend;
  bool stable = false;     // no significant monotone increase (p > 0.05)
};

/// sup_x D^{*n}(x) n^{d/(alpha^2)} L^d
BoundReport verify_Dbd(const KernelLadder& ladder, const std::vector<long>& nRange);
/// sup_x D^{*n}(x) <x>_L^{d+alpha^2} / (n L^{alpha^2})
BoundReport verify_HK1(const KernelLadder& ladder, const std::vector<long>& nRange, const std::vector<Site>& xGrid);
/// sup |D^{*n}(x) - (D^{*n}(x+y)+D^{*n}(x-y))/2| <x>_L^{d+alpha^2+2} / (L^{alpha^2} <y>_L^2 n)
/// over pairs with |y| <= |x|/3 (DomainError otherwise).
BoundReport verify_HK2(const KernelLadder& ladder, const std::vector<long>& nRange,
                       const std::vector<std::pair<Site, Site>>& pairs);

/// Log-spaced points along the first axis and the diagonal with |x|_inf <= rmax.
std::vector<Site> log_grid(int d, long rmax, double ratio = 1.5);
/// All pairs (x, y) from the grids with |y| <= |x|/3.
std::vector<std::pair<Site, Site>> admissible_pairs(int d, const std::vector<Site>& xs, const std::vector<Site>& ys);

/// n-fold circular self-convolution by direct O(M^2) summation (d = 1; test oracle).
TorusField direct_power_1d(const TorusField& base, int n);

}  // namespace lacelab
