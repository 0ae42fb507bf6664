#include <gtest/gtest.h>

#include <cmath>

#include "lacelab/errors.hpp"
#include "lacelab/io.hpp"
#include "lacelab/lace.hpp"

using namespace lacelab;

TEST(Lace, RandomWalkSusceptibility) {
  // Pi = delta: chi = 1 / (1 - p)
  const auto s = solve_qr(0.5, 1.0, 0.0);
  EXPECT_NEAR(s.chi, 2.0, 1e-15);
  EXPECT_NEAR(s.r, 1.0, 1e-15);
  EXPECT_LT(s.chi_identity_residual, 1e-14);
  EXPECT_NEAR(critical_point(delta_pi(2)), 1.0, 0);
}

TEST(Lace, DeltaPiReproducesTheRandomWalk) {
  const auto D = build_power_law({1, 1.5, 2.0});
  const auto lg = solve_G_from_lace(D, delta_pi(1), 0.5, {make_site({0})}, 512);
  EXPECT_NEAR(lg.chi_torus, 2.0, 1e-12);
  EXPECT_LT(lg.residual, 1e-12);
}

TEST(Lace, CriticalAmplitudeIdentities) {
  SyntheticPiSpec s;
  s.d = 2;
  s.alpha = 1.5;
  s.L = 2;
  s.c = 0.01;
  s.radius = 3;
  const auto Pi = synthetic_pi(s);
  const auto D = build_power_law({2, 1.5, 2.0});
  const auto sys = make_lace_system(D, Pi, critical_point(Pi));
  EXPECT_TRUE(sys.qr.critical);
  const auto h = build_H_and_A(sys);
  EXPECT_NEAR(h.A_from_H, h.A_pc_over_r, 1e-10);
  EXPECT_NEAR(h.A_from_H, h.A_formula, 1e-10);
}

TEST(Lace, AboveCriticalIsRejected) {
  const auto D = build_power_law({1, 1.5, 2.0});
  EXPECT_THROW(make_lace_system(D, delta_pi(1), 1.2), DomainError);
}

TEST(Lace, CorruptedTableIsRejected) {
  try {
    PiFunction::from_json(read_json(std::string(LACELAB_FIXTURES) + "/corrupted_pi.json"));
    FAIL() << "accepted a corrupted table";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.module(), "lace-algebra");
  }
}

TEST(Lace, AsymmetricTableIsRejected) {
  const nlohmann::json j{{"d", 1}, {"entries", {{{"x", {0}}, {"value", 1.0}}, {{"x", {1}}, {"value", 0.1}}}}};
  EXPECT_THROW(PiFunction::from_json(j), DomainError);
}

TEST(Lace, JsonRoundTrip) {
  const auto P = PiFunction::from_json(read_json(std::string(LACELAB_FIXTURES) + "/valid_pi.json"));
  const auto Q = PiFunction::from_json(P.to_json());
  EXPECT_EQ(P.values, Q.values);
  EXPECT_NEAR(P.hat_zero(), 1.03, 1e-15);
}
