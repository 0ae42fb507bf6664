#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacelab/fft.hpp"
#include "lacelab/stats.hpp"
#include "lacelab/stepdist.hpp"

namespace lacelab {

enum class Boundary { Free, Periodic };
std::string to_string(Boundary b);
Boundary boundary_from(const std::string& s);

/// Long-range bond percolation on the box (Z/M)^d (Periodic) or {0..M-1}^d (Free):
/// {u,v} is open with probability min(p D(v - u), 1), independently.
struct PercConfig {
  std::vector<double> ps{0.5};
  long M = 256;
  Boundary boundary = Boundary::Periodic;
  std::uint64_t seed = 1;
  long samples = 10000;
};

struct PercEstimate {
  double mean = 0;
  Interval ci;
};

/// One p of a coupled run. Periodic: G(x) is estimated by the per-sample average
/// over all u of 1{u <-> u+x}; Free: by 1{c <-> c+x} with c the box centre.
struct PercLayer {
  double p = 0;
  std::vector<double> sum, sumsq, maxy;  // per-sample estimator moments, indexed like a TorusField on Grid{d, M}
  double chi_sum = 0;              // mean cluster size of a uniform vertex
  long clamped_pairs = 0;

  /// Periodic: Fay-Feuer gamma interval of the per-sample averages (conservative for
  /// rare connections); Free: Wilson interval. `z` sets the coverage.
  PercEstimate estimate(const Grid& g, const Site& x, long samples, Boundary b,
                        double z = 1.959963984540054) const;
  double mean_cluster_size(long samples) const { return chi_sum / double(samples); }
};

struct PercResult {
  int d = 1;
  LatticeParams params;
  PercConfig config;
  Grid grid;
  StepDistribution D;
  std::vector<PercLayer> layers;  // sorted as config.ps
  std::vector<std::string> warnings;

  const PercLayer& layer(double p) const;
  PercEstimate estimate(std::size_t layer, const Site& x, double z = 1.959963984540054) const;
  /// Bond probability min(p D(x), 1) with x read as a torus offset (Periodic) or a Z^d offset.
  double bond_probability(std::size_t layer, const Site& x) const;
  nlohmann::json summary() const;
};

/// Largest number of vertices accepted.
inline constexpr long kPercMaxSites = 1L << 20;

/// All p in `cfg.ps` are sampled from the same uniforms: a bond open at p is open at
/// every larger p, so estimates are monotone in p sample by sample.
PercResult perc_sample(const StepDistribution& D, const PercConfig& cfg);

/// Small explicit graphs for exact checks.
struct Bond {
  int u = 0, v = 0;
  double q = 0;
};
struct BondGraph {
  int n = 0;
  std::vector<Bond> bonds;
};

/// Largest bond count accepted by the exhaustive enumeration.
inline constexpr int kExactMaxBonds = 12;
/// P(a <-> b), by summing over all 2^bonds configurations.
double exact_connection(const BondGraph& g, int a, int b);
/// All pairwise connection probabilities, one enumeration.
std::vector<std::vector<double>> exact_connections(const BondGraph& g);
/// Monte Carlo estimate of P(a <-> b) with a Wilson interval.
PercEstimate mc_connection(const BondGraph& g, int a, int b, long samples, std::uint64_t seed);
/// q1 + q2 q3 - q1 q2 q3 for the triangle a-b (q1), a-c (q2), c-b (q3).
double triangle_connection(double q1, double q2, double q3);
/// Segment {0..n-1} of Z with every pair joined with probability min(p D(v-u), 1).
BondGraph segment_graph(const StepDistribution& D, double p, int n);

}  // namespace lacelab
