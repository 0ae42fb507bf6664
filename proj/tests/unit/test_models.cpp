#include <gtest/gtest.h>

#include "lacelab/errors.hpp"
#include "lacelab/inequalities.hpp"
#include "lacelab/percolation.hpp"
#include "lacelab/saw.hpp"

using namespace lacelab;

namespace {
StepTable nearest() { return make_step_table(1, {{make_site({1}), 0.5}, {make_site({-1}), 0.5}}); }
}  // namespace

TEST(Saw, NearestNeighbourTwoSteps) {
  // dyadic weights: every value is exact in binary
  const auto r = saw_enumerate({nearest(), 2, 0.5});
  EXPECT_EQ(r.at(make_site({0})), 1.0);
  EXPECT_EQ(r.at(make_site({1})), 0.25);
  EXPECT_EQ(r.at(make_site({2})), 0.0625);
  EXPECT_EQ(r.rw_at(make_site({0})), 1.125);  // the immediate return is not self-avoiding
  EXPECT_EQ(r.walks, 1 + 2 + 4);  // every walk is visited, avoiding or not
}

TEST(Saw, TwoStepClosedForm) {
  const auto step = make_step_table(1, {{make_site({1}), 0.375}, {make_site({-1}), 0.375},
                                        {make_site({2}), 0.125}, {make_site({-2}), 0.125}});
  const auto r = saw_enumerate({step, 2, 0.5});
  for (long x = -4; x <= 4; ++x) EXPECT_EQ(r.at(make_site({x})), saw_two_step(step, 0.5, make_site({x}))) << x;
  EXPECT_EQ(check_saw_rw_bound(r).violations, 0);
}

TEST(Saw, RejectsUnnormalisedSteps) {
  EXPECT_THROW(make_step_table(1, {{make_site({1}), 0.5}}), DomainError);
}

TEST(Percolation, TriangleExact) {
  BondGraph g;
  g.n = 3;
  g.bonds = {{0, 1, 0.3}, {0, 2, 0.6}, {2, 1, 0.45}};
  EXPECT_NEAR(exact_connection(g, 0, 1), triangle_connection(0.3, 0.6, 0.45), 1e-15);
  EXPECT_NEAR(triangle_connection(0.3, 0.6, 0.45), 0.3 + 0.27 - 0.081, 1e-15);
  const auto mc = mc_connection(g, 0, 1, 20000, 7);
  EXPECT_LE(mc.ci.lo, 0.489);
  EXPECT_GE(mc.ci.hi, 0.489);
}

TEST(Percolation, ZeroDensityIsDelta) {
  const auto D = build_power_law({1, 2.5, 1.0});
  PercConfig cfg;
  cfg.ps = {0.0};
  cfg.M = 32;
  cfg.samples = 50;
  const auto run = perc_sample(D, cfg);
  EXPECT_EQ(run.estimate(0, make_site({0})).mean, 1.0);
  EXPECT_EQ(run.estimate(0, make_site({1})).mean, 0.0);
}

TEST(Percolation, CoupledLayersAreMonotone) {
  const auto D = build_power_law({1, 2.5, 1.0});
  PercConfig cfg;
  cfg.ps = {0.2, 0.4, 0.6};
  cfg.M = 64;
  cfg.samples = 300;
  const auto run = perc_sample(D, cfg);
  for (long x = 1; x < 10; ++x) {
    const Site s = make_site({x});
    EXPECT_LE(run.estimate(0, s).mean, run.estimate(1, s).mean);
    EXPECT_LE(run.estimate(1, s).mean, run.estimate(2, s).mean);
  }
}

TEST(Percolation, SameSeedSameResult) {
  const auto D = build_power_law({1, 2.5, 1.0});
  PercConfig cfg;
  cfg.ps = {0.4};
  cfg.M = 32;
  cfg.samples = 100;
  const auto a = perc_sample(D, cfg), b = perc_sample(D, cfg);
  EXPECT_EQ(a.layers[0].sum, b.layers[0].sum);
}

TEST(Percolation, MemoryGuard) {
  const auto D = build_power_law({3, 2.5, 1.0});
  PercConfig cfg;
  cfg.M = 128;
  EXPECT_THROW(perc_sample(D, cfg), DomainError);
}

TEST(Inequalities, SimonLiebOnSmallSegment) {
  const auto D = build_power_law({1, 2.5, 1.0});
  for (double p : {0.3, 0.8}) {
    const auto rep = check_simon_lieb_exact(segment_graph(D, p, 5));
    EXPECT_EQ(rep.violations, 0) << p;
    EXPECT_GE(rep.worst_margin(), 0) << p;
  }
}

TEST(Inequalities, RandomWalkBoundsOnSample) {
  const auto D = build_power_law({1, 3.0, 1.0});
  PercConfig cfg;
  cfg.ps = {0.3};
  cfg.M = 64;
  cfg.samples = 2000;
  cfg.seed = 11;
  const auto run = perc_sample(D, cfg);
  std::vector<Site> xs;
  for (long x = 0; x < 20; ++x) xs.push_back(make_site({x}));
  for (const auto& r : check_rw_bounds(run, 0, xs)) EXPECT_EQ(r.violations, 0) << r.id;
}
