#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "lacelab/stepdist.hpp"

namespace lacelab {

/// Finitely supported, symmetric, normalized step table.
struct StepTable {
  int d = 1;
  long R = 0;
  std::vector<std::pair<Site, double>> steps;  // nonzero entries only
  /// Mass the parent distribution puts outside |x|_inf <= R (0 for hand-made tables).
  double tail_mass = 0;

  double at(const Site& x) const;
};

/// D restricted to |x|_inf <= R_cut and renormalized; R_cut = 0 selects ceil(3L).
StepTable truncate_step(const StepDistribution& D, long R_cut = 0);
/// Validates symmetry and normalization of an explicit table.
StepTable make_step_table(int d, const std::vector<std::pair<Site, double>>& steps);

struct SawEnumConfig {
  StepTable step;
  int N = 4;
  double p = 1;
};

struct SawResult {
  int d = 1;
  int N = 0;
  double p = 0;
  std::map<Site, double> G;   // self-avoiding walks of length <= N
  std::map<Site, double> rw;  // same sum without the avoidance indicator
  /// sum_{n > N} p^n bounds the length truncation of both sums (D normalized).
  double length_tail = 0;
  double truncation_mass = 0;
  long walks = 0;

  double at(const Site& x) const;
  double rw_at(const Site& x) const;
  nlohmann::json to_json() const;
};

/// Largest number of walks visited; the enumeration refuses above this.
inline constexpr double kSawWalkBudget = 1e9;

SawResult saw_enumerate(const SawEnumConfig& cfg);
std::vector<double> saw_enumerate(const SawEnumConfig& cfg, const std::vector<Site>& xs);

/// sum_{n <= N} p^n D^{*n}(x) by direct convolution.
std::map<Site, double> rw_series(const StepTable& step, double p, int N);

/// delta + pD(x)[x != o] + p^2 sum_{y != o, x} D(y) D(x - y)[x != o].
double saw_two_step(const StepTable& step, double p, const Site& x);

}  // namespace lacelab
