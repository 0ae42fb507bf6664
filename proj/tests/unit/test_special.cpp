#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lacelab/special.hpp"
#include "lacelab/stable.hpp"

using namespace lacelab;

// reference values from mpmath at 30 digits

TEST(Special, ZetaNegativeArgument) { EXPECT_NEAR(zeta(-1.25), -0.0489088676268548, 1e-15); }

TEST(Special, UpperGammaNegativeOrder) { EXPECT_NEAR(upper_gamma(-0.75, 2.0), 0.0237313399952516, 1e-15); }

TEST(Special, UpperGammaContinuedFractionMatchesRecurrence) {
  // x = 1 is where the two branches meet
  const double lo = upper_gamma(-1.5, 1.0 - 1e-9), hi = upper_gamma(-1.5, 1.0 + 1e-9);
  EXPECT_NEAR(lo, hi, 1e-8 * std::fabs(lo));
}

TEST(Special, HurwitzZeta) {
  EXPECT_NEAR(hurwitz_zeta(2.5, 0.3), 21.0692392022477249, 1e-12);
  EXPECT_NEAR(hurwitz_zeta(1.5, 1.0), zeta(1.5), 1e-13);
}

TEST(Special, Polylog) {
  EXPECT_NEAR(Polylog(2)(0.5), 0.58224052646501251, 1e-14);
  EXPECT_NEAR(Polylog(2.5)(0.9), 1.13900302520215679, 1e-13);
  EXPECT_NEAR(Polylog(2.5)(-0.7), -0.62997723051344042, 1e-13);
  EXPECT_NEAR(Polylog(1.5)(1.0), 2.6123753486854882, 1e-13);
}

TEST(Special, PolylogDeficitIsContinuousAtZero) {
  const Polylog li(1.75);
  EXPECT_EQ(li.deficit(0.0), 0.0);
  EXPECT_NEAR(li.deficit(-1e-3), zeta(1.75) - li(std::exp(-1e-3)), 1e-12);
}

TEST(Special, GaussLegendreIntegratesPolynomials) {
  const auto& [x, w] = gauss_legendre(12);
  double s0 = 0, s22 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s22 += w[i] * std::pow(x[i], 22);
  }
  EXPECT_NEAR(s0, 2.0, 1e-14);
  EXPECT_NEAR(s22, 2.0 / 23, 1e-14);
}

TEST(Special, EpsteinZetaOneDimension) {
  // sum_{n != 0} |n|^{-s} = 2 zeta(s)
  EXPECT_NEAR(epstein_zeta(1, 4.0), 2 * std::pow(std::numbers::pi, 4) / 90, 1e-12);
}

TEST(Stable, DensityReferenceValues) {
  // d = 1, alpha = 1.5, scale s = 1.3; independent quadrature in mpmath
  EXPECT_NEAR(stable_density(1.5, 1, 1.3, 0.0), 0.24124211374070701, 1e-12);
  EXPECT_NEAR(stable_density(1.5, 1, 1.3, 2.0), 0.096980577754602053, 1e-12);
  EXPECT_NEAR(stable_density(1.5, 1, 1.3, 10.0), 0.0014046555933119530, 1e-13);
  EXPECT_NEAR(stable_density(1.5, 1, 1.3, 60.0) / 1.4074030766115581e-05, 1.0, 1e-8);
}
