#include <gtest/gtest.h>

#include <cmath>

#include "lacelab/fft.hpp"
#include "lacelab/stepdist.hpp"
#include "lacelab/torus.hpp"

using namespace lacelab;

TEST(Fft, RoundTrip) {
  const Grid g{2, 8};
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = double(i % 7) - 3;
  const auto back = fft_inverse(fft_forward(g, f));
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(back[i], f[i], 1e-13);
}

TEST(Fft, LinearConvolution) {
  const auto c = linear_convolution({1, 2, 3}, {1, 1}, 4);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c[0], 1, 1e-14);
  EXPECT_NEAR(c[1], 3, 1e-14);
  EXPECT_NEAR(c[2], 5, 1e-14);
  EXPECT_NEAR(c[3], 3, 1e-14);
}

TEST(Torus, LadderMatchesDirectConvolution) {
  const auto D = build_power_law({1, 1.5, 2.0});
  const KernelLadder ladder(D, 256, 1.0);
  for (int n : {1, 2, 3, 4}) EXPECT_LT(ladder.power(n).max_abs_diff(direct_power_1d(ladder.base(), n)), 1e-12) << n;
}

TEST(Torus, PowersConserveMass) {
  const auto D = build_subordinated({2, 1.5, 2.0});
  const KernelLadder ladder(D, 64, 1.0);
  const auto P = ladder.power(5);
  EXPECT_NEAR(P.sum(), std::pow(ladder.base().sum(), 5), 1e-12);
  EXPECT_LT(P.symmetry_defect(), 1e-14);
  EXPECT_LE(ladder.wrap_error(4), ladder.wrap_error(8));
}

TEST(Torus, DeltaIsConvolutionIdentity) {
  const auto D = build_power_law({2, 3.0, 1.0});
  const auto f = embed(D, 16);
  EXPECT_LT(convolve(f, delta_field(f.grid)).max_abs_diff(f), 1e-15);
}

TEST(Torus, HeatKernelBoundsAreFinite) {
  const auto D = build_power_law({1, 1.5, 2.0});
  const KernelLadder ladder(D, 1024, 1.0);
  const auto rep = verify_Dbd(ladder, {1, 2, 4, 8, 16});
  EXPECT_TRUE(rep.finite);
  EXPECT_GT(rep.overall_sup, 0);
}
