#include <gtest/gtest.h>

#include "lacelab/block.hpp"
#include "lacelab/edgeworth.hpp"
#include "lacelab/errors.hpp"

using namespace lacelab;

namespace {
MultiIndex idx(int a, int b = 0) { return MultiIndex{a, b, 0, 0}; }
}  // namespace

TEST(Cumulants, UniformOnFivePoints) {
  // U uniform on {-2..2}: mu2 = 2, mu4 = 6.8, Q4 = mu4 - 3 mu2^2
  const BlockDistribution U(1, 2.0);
  EXPECT_EQ(U.radius(), 2);
  const auto Q = cumulants(U, 4);
  EXPECT_NEAR(U.sigmaL2(), 2.0, 1e-14);
  EXPECT_NEAR(Q.get(idx(2)), 2.0, 1e-13);
  EXPECT_NEAR(Q.get(idx(4)), -5.2, 1e-12);
  EXPECT_NEAR(Q.get(idx(1)), 0.0, 1e-15);
  EXPECT_NEAR(Q.get(idx(3)), 0.0, 1e-15);
}

TEST(Cumulants, PermutationSymmetric) {
  const auto Q = cumulants(BlockDistribution(2, 2.5, Profile::dome()), 4);
  EXPECT_NEAR(Q.get(idx(4, 0)), Q.get(idx(0, 4)), 1e-12);
  EXPECT_NEAR(Q.get(idx(3, 1)), 0.0, 1e-14);
}

TEST(Cumulants, RejectsOddOrder) { EXPECT_THROW(cumulants(BlockDistribution(1, 2.0), 5), DomainError); }

TEST(Edgeworth, ExactLayersConserveMass) {
  ExactLayers E(BlockDistribution(1, 2.0));
  for (int t = 0; t < 5; ++t) E.advance();
  double s = 0;
  for (long x = -E.half_width(); x <= E.half_width(); ++x) s += E(make_site({x}));
  EXPECT_NEAR(s, 1.0, 1e-13);
}

TEST(Edgeworth, ExpansionApproachesExactLayers) {
  const BlockDistribution U(1, 3.0);
  const EdgeworthExpansion ex(cumulants(U, 8), 2);
  ExactLayers E(U);
  for (int t = 0; t < 64; ++t) E.advance();
  const double peak = E(make_site({0}));
  EXPECT_NEAR(ex.eval(64.0, make_site({0})) / peak, 1.0, 1e-4);
}

TEST(Edgeworth, SupErrorDecaysAtLeastAtTheStatedRate) {
  const auto rep = verify_theorem_A1(BlockDistribution(1, 3.0), 0, default_A1_times(), 0.15);
  EXPECT_TRUE(rep.bound_ok);
  EXPECT_LE(rep.slope, rep.expected + 0.15);
}
