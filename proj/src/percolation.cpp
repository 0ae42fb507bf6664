#include "lacelab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lacelab/errors.hpp"

namespace lacelab {

namespace {

constexpr const char* kMod = "models-mc";
constexpr double kZ = 1.959963984540054;

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

struct OffsetClass {
  Site w{};
  double D = 0;
  bool self_inverse = false;
};

struct Candidate {
  int u, v, cls;
  double t;  // open at p iff t < q_p(cls)
};

std::mt19937_64 sample_rng(std::uint64_t seed, long sample) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(sample),
                    std::uint32_t(std::uint64_t(sample) >> 32)};
  return std::mt19937_64(seq);
}

double bond_q(double p, double D) { return std::min(p * D, 1.0); }

}  // namespace

std::string to_string(Boundary b) { return b == Boundary::Free ? "free" : "periodic"; }

Boundary boundary_from(const std::string& s) {
  if (s == "free") return Boundary::Free;
  if (s == "periodic") return Boundary::Periodic;
  throw DomainError(kMod, "boundary", "boundary must be 'free' or 'periodic'");
}

PercEstimate PercLayer::estimate(const Grid& g, const Site& x, long n, Boundary b, double z) const {
  const std::size_t i = g.index(x);
  PercEstimate e;
  e.mean = sum[i] / double(n);
  if (b == Boundary::Free) {
    e.ci = wilson_interval(std::lround(sum[i]), n, z);
    return e;
  }
  if (sum[i] == 0) {
    e.ci = {0, wilson_interval(0, n, z).hi};
    return e;
  }
  if (sumsq[i] == double(n)) {  // every sample gave 1 (x = o)
    e.ci = {1, 1};
    return e;
  }
  const double nn = double(n);
  e.ci = gamma_interval(sum[i] / nn, sumsq[i] / (nn * nn), maxy[i] / nn, z);
  e.ci.hi = std::min(e.ci.hi, 1.0);
  return e;
}

const PercLayer& PercResult::layer(double p) const {
  for (const auto& l : layers)
    if (l.p == p) return l;
  throw DomainError(kMod, "p", "p = " + std::to_string(p) + " was not sampled");
}

PercEstimate PercResult::estimate(std::size_t l, const Site& x, double z) const {
  return layers.at(l).estimate(grid, x, config.samples, config.boundary, z);
}

double PercResult::bond_probability(std::size_t l, const Site& x) const {
  if (is_origin(x)) return 0;
  Site y = x;
  if (config.boundary == Boundary::Periodic) y = grid.site(grid.index(x));
  return bond_q(layers.at(l).p, D(y));
}

nlohmann::json PercResult::summary() const {
  nlohmann::json j;
  j["d"] = d;
  j["alpha"] = params.alpha;
  j["L"] = params.L;
  j["M"] = config.M;
  j["boundary"] = to_string(config.boundary);
  j["seed"] = config.seed;
  j["samples"] = config.samples;
  auto& ls = j["layers"] = nlohmann::json::array();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto e1 = estimate(i, axis_site(d, 1));
    ls.push_back({{"p", layers[i].p},
                  {"meanClusterSize", layers[i].mean_cluster_size(config.samples)},
                  {"G_e1", e1.mean},
                  {"clampedPairs", layers[i].clamped_pairs}});
  }
  j["warnings"] = warnings;
  return j;
}

PercResult perc_sample(const StepDistribution& D, const PercConfig& cfg) {
  const int d = D.dim();
  require(cfg.M >= 4, kMod, "M", "box side must be >= 4");
  require(cfg.samples >= 1, kMod, "samples", "need at least one sample");
  require(!cfg.ps.empty(), kMod, "p", "empty p grid");
  for (double p : cfg.ps) require(std::isfinite(p) && p >= 0, kMod, "p", "p must be finite and nonnegative");
  double sites = 1;
  for (int i = 0; i < d; ++i) sites *= double(cfg.M);
  if (sites > double(kPercMaxSites))
    throw DomainError(kMod, "M", "memory guard: M^d = " + std::to_string(sites) + " exceeds " +
                                     std::to_string(kPercMaxSites) + " vertices");
  PercResult res;
  res.d = d;
  res.params = D.params();
  res.config = cfg;
  res.D = D;
  const Grid g{d, cfg.M};
  res.grid = g;
  const std::size_t n = g.size();
  const bool periodic = cfg.boundary == Boundary::Periodic;
  const double pmax = *std::max_element(cfg.ps.begin(), cfg.ps.end());

  // vertex coordinates in {0..M-1}^d
  std::vector<Site> coord(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = i;
    for (int a = d - 1; a >= 0; --a) {
      coord[i][a] = long(k % std::size_t(cfg.M));
      k /= std::size_t(cfg.M);
    }
  }
  auto lin = [&](const Site& x) { return g.index(x); };

  // one class per unordered offset {w, -w}
  std::vector<OffsetClass> classes;
  if (periodic) {
    for (std::size_t i = 1; i < n; ++i) {
      const Site w = g.site(i);
      const std::size_t j = lin(-w);
      if (j < i) continue;
      classes.push_back({w, D(w), j == i});
    }
  } else {
    for_each_in_box(d, cfg.M - 1, [&](const Site& w) {
      int a = 0;
      while (a < d && w[a] == 0) ++a;
      if (a == d || w[a] < 0) return;
      classes.push_back({w, D(w), false});
    });
  }
  res.layers.resize(cfg.ps.size());
  for (std::size_t l = 0; l < cfg.ps.size(); ++l) {
    auto& L = res.layers[l];
    L.p = cfg.ps[l];
    L.sum.assign(n, 0.0);
    L.sumsq.assign(n, 0.0);
    L.maxy.assign(n, 0.0);
    for (const auto& c : classes)
      if (L.p * c.D > 1) L.clamped_pairs += 1;
    if (L.clamped_pairs)
      res.warnings.push_back("p D > 1 for " + std::to_string(L.clamped_pairs) + " offsets at p = " +
                             std::to_string(L.p) + "; bond probabilities clamped to 1");
  }

  const Site centre = [&] {
    Site c{};
    for (int a = 0; a < d; ++a) c[a] = cfg.M / 2;
    return c;
  }();
  std::vector<Candidate> cand;
  std::vector<double> counts(n, 0.0);
  std::vector<std::size_t> touched;
  std::vector<int> order(n), start(n + 1);
  for (long s = 0; s < cfg.samples; ++s) {
    auto rng = sample_rng(cfg.seed, s);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    cand.clear();
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const double qmax = bond_q(pmax, classes[c].D);
      if (qmax <= 0) continue;
      const double lq = qmax < 1 ? std::log1p(-qmax) : 0.0;
      std::size_t pos = 0;
      while (true) {
        if (qmax < 1) {
          const double u = 1.0 - unif(rng);  // (0, 1]
          const double skip = std::floor(std::log(u) / lq);
          if (skip >= double(n - pos)) break;
          pos += std::size_t(skip);
        }
        if (pos >= n) break;
        const double t = unif(rng) * qmax;
        const Site& u = coord[pos];
        Site v = u + classes[c].w;
        bool keep = true;
        if (periodic) {
          if (classes[c].self_inverse) keep = lin(v) > pos;
        } else {
          for (int a = 0; a < d; ++a) keep = keep && v[a] >= 0 && v[a] < cfg.M;
        }
        if (keep) cand.push_back({int(pos), int(lin(v)), int(c), t});
        ++pos;
      }
    }
    for (auto& L : res.layers) {
      UnionFind uf(n);
      for (const auto& b : cand)
        if (b.t < bond_q(L.p, classes[b.cls].D)) uf.unite(b.u, b.v);
      if (periodic) {
        // group vertices by cluster (counting sort on root)
        std::fill(start.begin(), start.end(), 0);
        std::vector<int> root(n);
        for (std::size_t i = 0; i < n; ++i) ++start[(root[i] = uf.find(int(i))) + 1];
        for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
        std::vector<int> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) order[fill[root[i]]++] = int(i);
        double chi = 0;
        for (std::size_t r = 0; r < n; ++r) {
          const int b0 = start[r], b1 = start[r + 1], sz = b1 - b0;
          if (sz == 0) continue;
          chi += double(sz) * sz;
          if (sz < 2) continue;
          if (double(sz) * sz > 16.0 * double(n)) {
            // large cluster: #{a in C : a + i in C} from the autocorrelation of its indicator
            std::vector<double> ind(n, 0.0);
            for (int k = b0; k < b1; ++k) ind[order[k]] = 1;
            Spectrum sp = fft_forward(g, ind);
            for (auto& z : sp.data) z = std::norm(z);
            const auto ac = fft_inverse(sp);
            for (std::size_t i = 1; i < n; ++i) {
              const double c = std::round(ac[i]);
              if (c == 0) continue;
              if (counts[i] == 0) touched.push_back(i);
              counts[i] += c;
            }
            continue;
          }
          for (int a = b0; a < b1; ++a)
            for (int b = b0; b < b1; ++b) {
              if (a == b) continue;
              const std::size_t off = lin(coord[order[b]] - coord[order[a]]);
              if (counts[off] == 0) touched.push_back(off);
              counts[off] += 1;
            }
        }
        L.chi_sum += chi / double(n);
        L.sum[0] += 1;
        L.sumsq[0] += 1;
        L.maxy[0] = 1;
        for (std::size_t off : touched) {
          const double y = counts[off] / double(n);
          L.sum[off] += y;
          L.sumsq[off] += y * y;
          L.maxy[off] = std::max(L.maxy[off], y);
          counts[off] = 0;
        }
        touched.clear();
      } else {
        const int rc = uf.find(int(lin(centre)));
        double sz = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (uf.find(int(i)) == rc) {
            const std::size_t off = lin(coord[i] - centre);
            L.sum[off] += 1;
            L.sumsq[off] += 1;
            L.maxy[off] = 1;
            sz += 1;
          }
        L.chi_sum += sz;
      }
    }
  }
  return res;
}

double triangle_connection(double q1, double q2, double q3) { return q1 + q2 * q3 - q1 * q2 * q3; }

std::vector<std::vector<double>> exact_connections(const BondGraph& g) {
  require(g.n >= 1, kMod, "graph", "empty graph");
  require(int(g.bonds.size()) <= kExactMaxBonds, kMod, "bonds",
          "exhaustive enumeration is limited to " + std::to_string(kExactMaxBonds) + " bonds");
  for (const auto& b : g.bonds)
    require(b.u >= 0 && b.v >= 0 && b.u < g.n && b.v < g.n && b.q >= 0 && b.q <= 1, kMod, "bonds", "invalid bond");
  std::vector<std::vector<double>> tau(g.n, std::vector<double>(g.n, 0.0));
  const int m = int(g.bonds.size());
  for (long mask = 0; mask < (1L << m); ++mask) {
    double w = 1;
    UnionFind uf(g.n);
    for (int i = 0; i < m; ++i) {
      if (mask >> i & 1) {
        w *= g.bonds[i].q;
        uf.unite(g.bonds[i].u, g.bonds[i].v);
      } else {
        w *= 1 - g.bonds[i].q;
      }
    }
    if (w == 0) continue;
    for (int a = 0; a < g.n; ++a)
      for (int b = 0; b < g.n; ++b)
        if (uf.find(a) == uf.find(b)) tau[a][b] += w;
  }
  return tau;
}

double exact_connection(const BondGraph& g, int a, int b) {
  require(a >= 0 && b >= 0 && a < g.n && b < g.n, kMod, "vertex", "vertex out of range");
  return exact_connections(g)[a][b];
}

PercEstimate mc_connection(const BondGraph& g, int a, int b, long samples, std::uint64_t seed) {
  require(samples >= 1, kMod, "samples", "need at least one sample");
  require(a >= 0 && b >= 0 && a < g.n && b < g.n, kMod, "vertex", "vertex out of range");
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    auto rng = sample_rng(seed, s);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    UnionFind uf(g.n);
    for (const auto& bd : g.bonds)
      if (unif(rng) < bd.q) uf.unite(bd.u, bd.v);
    hits += uf.find(a) == uf.find(b);
  }
  return {double(hits) / double(samples), wilson_interval(hits, samples)};
}

BondGraph segment_graph(const StepDistribution& D, double p, int n) {
  require(D.dim() == 1, kMod, "d", "segment graphs are one-dimensional");
  require(n >= 2 && n * (n - 1) / 2 <= kExactMaxBonds, kMod, "n", "segment too long for exhaustive enumeration");
  BondGraph g;
  g.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.bonds.push_back({u, v, bond_q(p, D(axis_site(1, v - u)))});
  return g;
}

}  // namespace lacelab
