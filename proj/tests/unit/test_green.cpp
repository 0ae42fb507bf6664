#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lacelab/errors.hpp"
#include "lacelab/green.hpp"

using namespace lacelab;

TEST(Green, GammaAlphaClosedForms) {
  // d = 5, alpha > 2: Gamma(3/2) / (4 pi^{5/2}) = 1/(8 pi^2)
  EXPECT_NEAR(gamma_alpha(5, 3.0), 1 / (8 * std::numbers::pi * std::numbers::pi), 1e-16);
  // alpha > 2 reduces to the finite-range amplitude a_d / (2d), a_d = d Gamma((d-2)/2) / (2 pi^{d/2})
  const int d = 3;
  const double a_d = d * std::tgamma(0.5 * (d - 2)) / (2 * std::pow(std::numbers::pi, 0.5 * d));
  EXPECT_NEAR(gamma_alpha(d, 2.5), a_d / (2 * d), 1e-15);
  EXPECT_THROW(gamma_alpha(1, 1.0), DomainError);
}

TEST(Green, ZeroFugacityIsDelta) {
  const auto D = build_power_law({1, 1.5, 1.0});
  const auto t = green_neumann(D, 0.0, {make_site({0}), make_site({3})});
  EXPECT_NEAR(*t.value(make_site({0})), 1.0, 1e-15);
  EXPECT_NEAR(*t.value(make_site({3})), 0.0, 1e-15);
}

TEST(Green, NeumannAgreesWithSpectral) {
  const auto D = build_power_law({2, 1.5, 2.0});
  const std::vector<Site> xs{make_site({0, 0}), make_site({2, 1}), make_site({5, 0})};
  GreenOptions o;
  o.M = 64;
  const auto a = green_neumann(D, 0.6, xs, o);
  const auto b = green_spectral(D, 0.6, xs, 64);
  for (const Site& x : xs) EXPECT_NEAR(*a.value(x), *b.value(x), 1e-8);
}

TEST(Green, CriticalAmplitudeAlongTheAxis) {
  // S_1(x) |x|^{d - alpha} -> gamma_alpha / v_alpha
  const auto D = build_subordinated({3, 1.5, 5.0});
  const auto xs = ray_sites(3, 128, false);
  GreenOptions o;
  o.M = 256;
  const auto table = green_neumann(D, 1.0, xs, o);
  const auto rep = asymptotic_ratio(table, asymptotic_constants(D));
  EXPECT_LE(rep.worst_deviation, 0.02);
}
