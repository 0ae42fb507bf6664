#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lacelab/percolation.hpp"
#include "lacelab/saw.hpp"
#include "lacelab/torus.hpp"

namespace lacelab {

/// Site-wise check of lhs <= rhs. A violation is counted only when the lower
/// confidence limit of lhs exceeds the upper confidence limit of rhs. Rows hold
/// pointwise 95% limits; `violations` uses limits with simultaneous coverage
/// 1 - level over the sites of the report (Bonferroni), so that a true inequality
/// fails the whole report with probability <= level.
struct InequalityReport {
  std::string id;
  double p = 0;
  int d = 1;
  double level = 0.05;
  std::vector<Site> sites;
  std::vector<double> lhs, lhs_lo, lhs_hi, rhs, rhs_lo, rhs_hi;
  long violations = 0;
  long pointwise_violations = 0;
  std::string note;

  void add(const Site& x, double l, double llo, double lhi, double r, double rlo, double rhi);
  /// min over sites of rhs_hi - lhs_lo (negative means a significant violation)
  double worst_margin() const;
  nlohmann::json to_json() const;
};

/// pD(x)[x != o] <= G(x) - delta <= (pD * G)(x) and G <= S_p, all for the torus
/// model that was sampled (bond probabilities min(pD, 1), minimal-image offsets).
/// The S_p comparison is skipped (with a note) when sum_x min(pD(x), 1) >= 1.
std::vector<InequalityReport> check_rw_bounds(const PercResult& run, std::size_t layer, const std::vector<Site>& xs,
                                              double level = 0.05);

/// G <= S_p for the truncated-step SAW, both sides exact.
InequalityReport check_saw_rw_bound(const SawResult& r);

/// G(x) <= sum_{u in B, v notin B} G(u) q(v - u) G(x - v), B = {|u|_inf <= ell}.
/// ell <= 0 selects |x| / 3 for each x.
InequalityReport check_simon_lieb(const PercResult& run, std::size_t layer, const std::vector<Site>& xs,
                                  double ell = 0, double level = 0.05);

/// Exhaustive check on a segment graph: every (a, b, ell) with 0 < ell < |b - a|.
InequalityReport check_simon_lieb_exact(const BondGraph& g);

struct DecayReport {
  double p = 0;
  double exponent = 0, exponent_stderr = 0, expected = 0;
  bool exponent_ok = false;
  long r_lo = 0, r_hi = 0;
  int points = 0;
  bool insufficient_signal = false;
  bool subcritical = false;
  double mean_cluster_size = 0;
  // measured range of G/D and the a-priori sandwich p <= G/D <= sup S_p/D
  double ratio_min = 0, ratio_max = 0;
  double c1 = 0, c2 = 0;
  long sandwich_violations = 0;
  bool sandwich_ok = false;
  std::vector<double> r, G, G_lo, G_hi, D, S;

  nlohmann::json to_json() const;
};

/// Log-log fit of G along the first axis over the range where the relative CI
/// half-width is below `max_rel_ci`; exponent_ok when within `tolerance` of d + alpha.
/// Sandwich violations use simultaneous limits at `level` over the fitted range.
DecayReport check_subcritical_decay(const PercResult& run, std::size_t layer, double tolerance = 0.3,
                                    double max_rel_ci = 0.2, double level = 0.05);

/// S_p = sum_n q^{*n} on the sampled torus (q(o) = 0). Requires sum q < 1.
TorusField torus_rw_green(const PercResult& run, std::size_t layer);

}  // namespace lacelab
