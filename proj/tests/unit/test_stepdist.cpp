#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lacelab/errors.hpp"
#include "lacelab/renewal.hpp"
#include "lacelab/special.hpp"
#include "lacelab/stepdist.hpp"

using namespace lacelab;

TEST(PowerLaw, OneDimensionalAlphaThree) {
  // <x>^{-4} with <x> = max(|x|, 1): normalisation 1 + 2 zeta(4) = 1 + pi^4/45
  const auto D = build_power_law({1, 3.0, 1.0});
  const double D0 = 1 / (1 + std::pow(std::numbers::pi, 4) / 45);
  EXPECT_NEAR(D(make_site({0})), D0, 1e-14);
  EXPECT_NEAR(D(make_site({1})), D0, 1e-14);
  EXPECT_NEAR(D(make_site({2})), 0.0625 * D0, 1e-14);
  EXPECT_NEAR(D(make_site({-7})), D(make_site({7})), 0);
}

class Normalisation : public ::testing::TestWithParam<std::tuple<DistKind, int, double>> {};

TEST_P(Normalisation, MassSumsToOne) {
  const auto [kind, d, alpha] = GetParam();
  const auto D = build_distribution(kind, {d, alpha, 2.0});
  const long R = d == 1 ? 200 : 40;
  double s = 0;
  for (const auto& [x, m] : mass_table(D, R)) s += m;
  // the outside mass is exact for power-law D and an upper bound otherwise
  EXPECT_LE(s, 1.0 + 1e-12);
  EXPECT_GE(s + D.mass_outside_box(R), 1.0 - 1e-12);
  if (kind == DistKind::PowerLaw) EXPECT_NEAR(s + D.mass_outside_box(R), 1.0, 1e-12);
  // symmetry under reflection and (for d = 2) coordinate swap
  if (d == 2) EXPECT_NEAR(D(make_site({3, -1})), D(make_site({-1, 3})), 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Kinds, Normalisation,
                         ::testing::Values(std::make_tuple(DistKind::PowerLaw, 1, 1.5),
                                           std::make_tuple(DistKind::PowerLaw, 2, 3.0),
                                           std::make_tuple(DistKind::Subordinated, 1, 1.5),
                                           std::make_tuple(DistKind::Subordinated, 2, 2.5)));

TEST(PowerLaw, SymbolNearOrigin) {
  // 1 - D^(k) ~ v_alpha |k|^alpha for alpha < 2
  const auto D = build_power_law({1, 1.5, 1.0});
  Momentum k{};
  k[0] = 1e-4;
  EXPECT_NEAR(D.one_minus_hat(k) / (D.v_alpha() * std::pow(1e-4, 1.5)), 1.0, 2e-2);
}

TEST(Subordinated, VAlphaAboveTwoMatchesSubordinationSum) {
  const auto D = build_subordinated({1, 3.0, 2.0});
  EXPECT_NEAR(D.v_alpha() / D.v_alpha_subordination_sum(), 1.0, 1e-10);
}

TEST(Subordinated, WeightsAtOne) {
  // T_alpha(1) = 1 / zeta(1 + alpha/2)
  EXPECT_NEAR(SubordinatorWeights(1.0)(1.0), 1 / 2.6123753486854882, 1e-15);
  EXPECT_NEAR(SubordinatorWeights(1.0).phi(1.0), 1.0, 1e-14);
}

TEST(Params, Validation) {
  for (const LatticeParams& p : {LatticeParams{0, 1.5, 1}, LatticeParams{1, -1, 1}, LatticeParams{1, 1.5, 0.5}}) {
    try {
      p.validate();
      FAIL() << "accepted invalid parameters";
    } catch (const DomainError& e) {
      EXPECT_EQ(e.module(), "stepdist");
    }
  }
}

TEST(Params, AlphaTwoIsFlaggedNotBuilt) {
  // accepted at construction, rejected by the asymptotic constants
  const auto D = build_power_law({1, 2.0, 1.0});
  EXPECT_TRUE(D.metadata()["alphaIsTwo"].get<bool>());
  EXPECT_THROW(D.v_alpha(), DomainError);
}

TEST(Renewal, SeriesInverse) {
  // 1/(1 - u) = 1 + u + u^2 + ...
  const auto inv = series_inverse({1.0, -1.0}, 8);
  for (double c : inv) EXPECT_NEAR(c, 1.0, 1e-13);
}
