#include "lacelab/saw.hpp"

#include <cmath>

#include "lacelab/errors.hpp"

namespace lacelab {

namespace {
constexpr const char* kMod = "models-mc";
}

double StepTable::at(const Site& x) const {
  for (const auto& [y, w] : steps)
    if (y == x) return w;
  return 0;
}

StepTable make_step_table(int d, const std::vector<std::pair<Site, double>>& steps) {
  require(d >= 1 && d <= kMaxDim, kMod, "d", "dimension must be in 1..4");
  StepTable t;
  t.d = d;
  double total = 0;
  std::map<Site, double> m;
  for (const auto& [x, w] : steps) {
    require(std::isfinite(w) && w >= 0, kMod, "steps", "step weights must be finite and nonnegative");
    if (w == 0) continue;
    m[x] += w;
    total += w;
    t.R = std::max(t.R, sup_norm(x, d));
  }
  require(std::fabs(total - 1) < 1e-12, kMod, "steps", "step table must be normalized");
  for (const auto& [x, w] : m) {
    auto it = m.find(-x);
    require(it != m.end() && std::fabs(it->second - w) <= 1e-15 * w, kMod, "steps", "step table must be symmetric");
    t.steps.emplace_back(x, w);
  }
  return t;
}

StepTable truncate_step(const StepDistribution& D, long R_cut) {
  if (R_cut <= 0) R_cut = long(std::ceil(3 * D.params().L));
  const auto table = mass_table(D, R_cut);
  double total = 0;
  for (const auto& [x, w] : table) total += w;
  std::vector<std::pair<Site, double>> steps;
  for (const auto& [x, w] : table) steps.emplace_back(x, w / total);
  StepTable t = make_step_table(D.dim(), steps);
  t.R = R_cut;
  t.tail_mass = D.mass_outside_box(R_cut);
  return t;
}

double SawResult::at(const Site& x) const {
  auto it = G.find(x);
  return it == G.end() ? 0.0 : it->second;
}

double SawResult::rw_at(const Site& x) const {
  auto it = rw.find(x);
  return it == rw.end() ? 0.0 : it->second;
}

nlohmann::json SawResult::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["N"] = N;
  j["p"] = p;
  j["lengthTail"] = length_tail;
  j["truncationMass"] = truncation_mass;
  j["walks"] = walks;
  auto& e = j["values"] = nlohmann::json::array();
  for (const auto& [x, v] : G)
    e.push_back({{"x", std::vector<long>(x.begin(), x.begin() + d)}, {"G", v}, {"rw", rw_at(x)}});
  return j;
}

SawResult saw_enumerate(const SawEnumConfig& cfg) {
  const StepTable& st = cfg.step;
  require(cfg.N >= 0, kMod, "N", "maximal length must be >= 0");
  require(cfg.p >= 0 && std::isfinite(cfg.p), kMod, "p", "p must be finite and nonnegative");
  require(!st.steps.empty(), kMod, "steps", "empty step table");
  double budget = 0, pw = 1;
  for (int n = 0; n <= cfg.N; ++n) {
    budget += pw;
    pw *= double(st.steps.size());
  }
  if (budget > kSawWalkBudget)
    throw DomainError(kMod, "N",
                      "enumeration infeasible: sum_n (#support)^n = " + std::to_string(budget) + " exceeds 1e9");
  SawResult r;
  r.d = st.d;
  r.N = cfg.N;
  r.p = cfg.p;
  r.truncation_mass = st.tail_mass;
  r.length_tail = cfg.p < 1 ? std::pow(cfg.p, cfg.N + 1) / (1 - cfg.p) : std::numeric_limits<double>::infinity();
  std::vector<Site> path{Site{}};
  std::vector<double> weight{1.0};
  // rw keeps walks through revisits; G only self-avoiding prefixes
  std::vector<char> avoiding{1};
  auto rec = [&](auto&& self) -> void {
    const Site x = path.back();
    const double w = weight.back();
    ++r.walks;
    r.rw[x] += w;
    if (avoiding.back()) r.G[x] += w;
    if (int(path.size()) - 1 == cfg.N) return;
    for (const auto& [s, ds] : st.steps) {
      const Site y = x + s;
      bool ok = avoiding.back();
      if (ok)
        for (const Site& z : path)
          if (z == y) {
            ok = false;
            break;
          }
      path.push_back(y);
      weight.push_back(w * cfg.p * ds);
      avoiding.push_back(ok);
      self(self);
      path.pop_back();
      weight.pop_back();
      avoiding.pop_back();
    }
  };
  rec(rec);
  for (auto it = r.G.begin(); it != r.G.end();) it = it->second == 0 ? r.G.erase(it) : std::next(it);
  return r;
}

std::vector<double> saw_enumerate(const SawEnumConfig& cfg, const std::vector<Site>& xs) {
  const SawResult r = saw_enumerate(cfg);
  std::vector<double> out;
  for (const Site& x : xs) out.push_back(r.at(x));
  return out;
}

std::map<Site, double> rw_series(const StepTable& step, double p, int N) {
  std::map<Site, double> out, layer{{Site{}, 1.0}};
  out[Site{}] = 1.0;
  for (int n = 1; n <= N; ++n) {
    std::map<Site, double> next;
    for (const auto& [x, v] : layer)
      for (const auto& [s, w] : step.steps) next[x + s] += v * p * w;
    for (const auto& [x, v] : next) out[x] += v;
    layer.swap(next);
  }
  return out;
}

double saw_two_step(const StepTable& step, double p, const Site& x) {
  if (is_origin(x)) return 1.0;
  double two = 0;
  for (const auto& [y, w] : step.steps)
    if (!is_origin(y) && y != x) two += w * step.at(x - y);
  return p * step.at(x) + p * p * two;
}

}  // namespace lacelab
