#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "lacelab/lattice.hpp"
#include "lacelab/special.hpp"

namespace lacelab {

using Momentum = std::array<double, kMaxDim>;

/// Block profile h on [-1,1]^d. Separable profiles are products of one even
/// one-dimensional factor; these enable the fast one-dimensional layer tables.
struct Profile {
  std::string name = "uniform";
  bool separable = true;
  std::function<double(double)> h1;                 // separable factor on [-1,1]
  std::function<double(const double*, int)> h;      // full profile, d-dim argument

  static Profile uniform();   // 2^{-d} 1{|x|_inf <= 1}
  static Profile tent();      // prod (1 - |x_i|)_+
  static Profile dome();      // (1 - |x|^2)_+, not separable
  static Profile by_name(const std::string& name);
};

/// U_L(x) = h(x/L) / sum_y h(y/L) on Z^d.
class BlockDistribution {
 public:
  BlockDistribution(int d, double L, Profile h = Profile::uniform());

  int dim() const { return d_; }
  double L() const { return L_; }
  long radius() const { return R_; }  // support in [-R, R]^d
  const Profile& profile() const { return h_; }
  bool separable() const { return h_.separable; }

  double mass(const Site& x) const;
  /// One-dimensional factor u(m), |m| <= R (separable profiles only).
  const std::vector<double>& marginal() const { return u1_; }
  double marginal(long m) const { return (m < -R_ || m > R_) ? 0.0 : u1_[m + R_]; }

  /// sum |x|^2 U(x)
  double sigmaL2() const { return sigmaL2_; }
  /// sigma_L^2 / L^2, the constant in sigma_L^2 = O(L^2)
  double sigma_constant() const { return sigmaL2_ / (L_ * L_); }

  double hat(const Momentum& k) const;
  /// 1 - U^(k), computed without cancellation.
  double one_minus_hat(const Momentum& k) const;
  /// Support points with their masses (for moment sums and convolutions).
  const std::vector<std::pair<Site, double>>& support() const { return support_; }

 private:
  int d_;
  double L_;
  long R_;
  Profile h_;
  std::vector<double> u1_;
  std::vector<std::pair<Site, double>> support_;
  double sigmaL2_ = 0;
};

/// T_alpha(t) = t^{-1-alpha/2} / zeta(1+alpha/2), t >= 1.
class SubordinatorWeights {
 public:
  explicit SubordinatorWeights(double alpha);

  double alpha() const { return alpha_; }
  double a() const { return 0.5 * alpha_; }
  double s() const { return 1 + 0.5 * alpha_; }
  double norm_constant() const { return zeta_s_; }
  double operator()(double t) const { return t >= 1 ? std::pow(t, -s()) / zeta_s_ : 0.0; }
  /// sum_{t > T} T_alpha(t)
  double tail(long T) const;
  /// sum t T_alpha(t) (infinite for alpha <= 2)
  double mean() const;
  /// Generating function Phi(u) = sum T(t) u^t = Li_s(u)/zeta(s).
  double phi(double u) const { return li_(u) / zeta_s_; }
  /// 1 - Phi(e^mu) for mu <= 0, accurate near mu = 0.
  double one_minus_phi_log(double mu) const { return li_.deficit(mu) / zeta_s_; }
  /// 1 - Phi(v) given v and 1 - v (the latter accurate).
  double one_minus_phi(double v, double one_minus_v) const;
  const Polylog& polylog() const { return li_; }

 private:
  double alpha_;
  double zeta_s_;
  Polylog li_;
};

}  // namespace lacelab
