#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacelab/block.hpp"
#include "lacelab/renewal.hpp"

namespace lacelab {

struct LatticeParams {
  int d = 1;
  double alpha = 1.5;
  double L = 1;

  void validate() const;
  /// alpha ^ 2
  double alpha2() const { return alpha < 2 ? alpha : 2.0; }
};

enum class DistKind { PowerLaw, Subordinated };
std::string to_string(DistKind k);
DistKind dist_kind_from(const std::string& s);

struct SubordinatedOptions {
  Profile profile = Profile::uniform();
  long t_exact = 2048;     // exact layers U^{*t}, t <= t_exact
  long m_max = 256;        // window of the exact layer tables
  long N = 1L << 17;       // exact coefficient range of the time sums
  int ell = 6;             // Edgeworth order beyond t_exact
};

/// One-step distribution D on Z^d. Immutable; cheap to copy.
class StepDistribution {
 public:
  const LatticeParams& params() const { return p_; }
  int dim() const { return p_.d; }
  DistKind kind() const { return kind_; }

  double operator()(const Site& x) const;
  double hat(const Momentum& k) const;
  double one_minus_hat(const Momentum& k) const;

  double norm_constant() const { return norm_; }
  /// sum |x|^2 D(x); infinite for alpha <= 2.
  double sigma2() const { return sigma2_; }
  /// Coefficient of |k|^{alpha^2} in 1 - D^(k).
  double v_alpha() const;
  /// C with D(x) <= C L^alpha <x>_L^{-d-alpha}: exact for PowerLaw, measured on
  /// a log-spaced grid for Subordinated.
  double envelope_constant() const { return envelope_; }
  long window() const { return window_; }
  /// Uniform bound on |computed D(x) - D(x)| (0 for PowerLaw closed form).
  double tail_certificate() const { return certificate_; }
  /// K in |U^{*t}(x) - expansion(t, x)| <= K t^{-(d+ell+2)/2} for t > t_exact (Subordinated).
  double layer_error_constant() const { return layer_K_; }
  /// sum_{|x|_inf > R} D(x) (exact for PowerLaw, rigorous upper bound for Subordinated).
  double mass_outside_box(long R) const;

  // Subordinated internals (null for PowerLaw).
  const BlockDistribution* block() const { return block_.get(); }
  const SubordinatorWeights* weights() const { return T_.get(); }
  const LayerTable* layers() const { return layers_.get(); }
  const TimeSum* time_sum() const { return D_sum_.get(); }
  const SubordinatedOptions& options() const { return opts_; }

  /// Fitted correction exponent of (1 - D^(k))/|k|^{alpha^2} - v_alpha (Richardson).
  double fitted_epsilon() const { return eps_fit_; }
  /// Cross-check of v_alpha for subordinated alpha > 2: (sigma_L^2/2d) sum t T(t).
  double v_alpha_subordination_sum() const;

  nlohmann::json metadata() const;

  friend StepDistribution build_power_law(const LatticeParams&, long);
  friend StepDistribution build_subordinated(const LatticeParams&, const SubordinatedOptions&);

 private:
  void finish_v_alpha();
  LatticeParams p_;
  DistKind kind_ = DistKind::PowerLaw;
  double norm_ = 1, sigma2_ = 0, envelope_ = 0, certificate_ = 0;
  double v_alpha_ = 0, eps_fit_ = 0, layer_K_ = 0;
  long window_ = 0;
  // PowerLaw: correction c(x) = <x/L>^{-d-a} - L^{d+a}|x|^{-d-a} on |x| <= L.
  std::vector<std::pair<Site, double>> core_;
  std::shared_ptr<const EwaldSum> ewald_;
  SubordinatedOptions opts_;
  std::shared_ptr<const BlockDistribution> block_;
  std::shared_ptr<const SubordinatorWeights> T_;
  std::shared_ptr<const LayerTable> layers_;
  std::shared_ptr<const TimeSum> D_sum_;
};

/// D(x) = <x/L>_1^{-d-alpha} / norm. `window` is the radius of the explicit table.
StepDistribution build_power_law(const LatticeParams& p, long window = 0);
/// D(x) = sum_t T_alpha(t) U_L^{*t}(x).
StepDistribution build_subordinated(const LatticeParams& p, const SubordinatedOptions& opts = {});
StepDistribution build_distribution(DistKind kind, const LatticeParams& p);

/// Closed-form v_alpha of the subordinated walk for alpha < 2.
double subordinated_v_alpha(double alpha, int d, double sigmaL2);

struct DeltaBounds {
  double max_one_minus_hat = 0;   // over [-pi,pi]^d
  double min_outside = 0;         // over |k|_inf >= 1/L
  double delta = 0;               // min(2 - max, min_outside)
};
DeltaBounds delta_bounds(const StepDistribution& D, int points_per_axis = 64);

/// Log-log slope of 1 - D^(k) along the first axis over [k_lo, k_hi].
double small_k_exponent(const StepDistribution& D, double k_lo, double k_hi, int n = 21);

/// Table of D on the box |x|_inf <= R.
std::vector<std::pair<Site, double>> mass_table(const StepDistribution& D, long R);

}  // namespace lacelab
