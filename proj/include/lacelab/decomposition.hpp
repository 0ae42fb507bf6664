#pragma once

#include <array>

#include <json.hpp>

#include "lacelab/lattice.hpp"
#include "lacelab/stepdist.hpp"

namespace lacelab {

/// S_1(x) = (gamma/v)|x|^{a-d} + I_1 + ... + I_5, a = alpha ^ 2, for a time
/// cutoff T and a momentum cutoff R.
struct ErrorDecomposition {
  Site x{};
  int d = 0;
  double T = 0, R = 0;
  double mu = 0;                   // exponent used in the T schedule
  std::array<double, 5> I{};
  std::array<double, 5> err{};     // per-term quadrature / truncation estimates
  double rieszTerm = 0;
  double reconstructed = 0;        // rieszTerm + sum I
  double S1 = 0;                   // independent S_1(x), when requested
  double relative_residual = 0;    // |reconstructed / S1 - 1|
  double I12_constant = 0;         // |I_1 + I_2| |x|^{d+a} / (L^a T^2)
  double scaled_total = 0;         // |sum I| |x|^{d-a+mu}
  nlohmann::json to_json() const;
};

struct DecompositionOptions {
  double T = 0;           // <= 0: T = (|x|/L)^{a - mu/2}
  double R = 1.5707963267948966;
  double delta = 0.7853981633974483;  // width of the smooth cutoff used for I_4
  long M = 128;           // trapezoid grid for the smooth part of I_4 (and the torus route of I_1)
  bool with_S1 = true;    // also compute S_1(x) by green_neumann
};

/// mu = 2 a eps / (d + a + eps), eps the correction exponent of 1 - D^ (fitted
/// for power-law D, structural for subordinated D).
double schedule_mu(const StepDistribution& D);
double schedule_T(const StepDistribution& D, double r);

/// Needs d in {1, 2, 3}, d > a, alpha != 2.
ErrorDecomposition decompose_error(const StepDistribution& D, const Site& x, const DecompositionOptions& o = {});

}  // namespace lacelab
