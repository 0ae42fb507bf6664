#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacelab/green.hpp"
#include "lacelab/stepdist.hpp"
#include "lacelab/torus.hpp"

namespace lacelab {

enum class LaceModel { RandomWalk, SAW, Percolation, Ising };
std::string to_string(LaceModel m);
LaceModel lace_model_from(const std::string& s);
/// Number of disjoint paths in the diagrammatic bound: 2 for percolation, 3 otherwise.
int model_ell(LaceModel m);

/// Finite-support Z^d-symmetric lace coefficient Pi_p plus an l1 certificate for
/// whatever the representation leaves out.
struct PiFunction {
  int d = 1;
  LaceModel model = LaceModel::SAW;
  int ell = 3;
  std::map<Site, double> values;
  double l1_tail = 0;
  int terms = 0;                     // series terms kept (pi_series_from_pi)
  double ratio = 0;                  // geometric ratio of the series

  double hat_zero() const;
  double hat(const Momentum& k) const;
  double second_moment() const;      // sum |x|^2 Pi(x)
  double l1_norm() const;
  long radius() const;               // sup-norm radius of the support
  double at(const Site& x) const;
  /// Largest |Pi(x) - Pi(g x)| over signed permutations g.
  double symmetry_defect() const;
  /// sup_{x != o} |Pi(x)| / <x>_L^{(a - d) ell}.
  double envelope_constant(double alpha, double L) const;
  TorusField fold(const Grid& g) const;

  nlohmann::json to_json() const;
  /// Validates finiteness and symmetry; DomainError("lace-algebra", ...) otherwise.
  static PiFunction from_json(const nlohmann::json& j);
};

PiFunction delta_pi(int d);

/// Pi = sum_{n>=0} pi^{*n} (SAW) or sum_{n>=1} (-pD(o))^{n-1} pi^{*n} (percolation, Ising).
/// The partial sums are exact (computed on a torus that holds the whole support).
PiFunction pi_series_from_pi(int d, const std::map<Site, double>& pi, double pDo, LaceModel model, int Nmax,
                             double tolerance = 1e-14);

/// 1 / Pi^(0).
double critical_point(const PiFunction& Pi);
/// Fixed point of p = 1 / Pi_p^(0) by damped iteration.
struct CriticalPoint {
  double pc = 0;
  int iterations = 0;
  double residual = 0;
};
CriticalPoint critical_point(const std::function<PiFunction(double)>& family, double p0 = 1.0,
                             double damping = 0.5, double tolerance = 1e-12);

/// 0 for alpha < 2, sum |x|^2 Pi(x) / sigma^2 for alpha > 2.
double nabla_hat(const PiFunction& Pi, const StepDistribution& D);
/// (Pi^(0) - Pi^(k)) / (1 - D^(k)) along the first axis at |k| = k (diagnostic).
double nabla_hat_quotient(const PiFunction& Pi, const StepDistribution& D, double k);

struct QRSolution {
  double p = 0, hatZero = 0, nablaHat = 0;
  double q = 0, r = 0;
  double chi = 0;                    // Pi^(0) / (1 - Pi^(0) p); +inf at p = p_c
  double r_closed_residual = 0;      // |r - 1/(1 + p nabla)|
  double q_closed_residual = 0;      // |q - (1 - r/(1 + p chi))|
  double chi_identity_residual = 0;  // |chi - Pi^(0) - Pi^(0) p chi|
  bool q_in_range = false;           // q in (0, 1]
  bool critical = false;
};
/// Solves the two boundary conditions as a linear system in (q, r).
QRSolution solve_qr(double p, double hatZero, double nablaHat);

struct LaceOptions {
  long M = 64;
  double tolerance = 1e-10;          // E-def vs E-rep, H Neumann tail
};

struct LaceSystem {
  StepDistribution D;
  PiFunction Pi;
  QRSolution qr;
  double pc = 0;
  Grid grid;
  std::vector<double> Dsym;          // D_M^(k) on the r2c half grid
  std::vector<double> Pisym;         // Pi^(k)
};

/// p <= p_c; p = p_c (relative 1e-14) gives the critical system with q = 1.
LaceSystem make_lace_system(const StepDistribution& D, const PiFunction& Pi, double p, const LaceOptions& o = {});

struct EReport {
  TorusField E;
  double def_rep_difference = 0;     // max |E_def - E_rep|
  double hat_zero = 0;               // E^(0)
  double slope_ratio = 0;            // E^(k1) / (1 - D^(k1)) at the smallest grid momentum
  double l1 = 0;
};
EReport build_E(const LaceSystem& s, const LaceOptions& o = {});

struct HReport {
  TorusField H;
  TorusField ES;                     // E * S_q
  double es_l1 = 0;                  // ||E * S_q||_1
  int terms = 0;
  double tail = 0;                   // l1 certificate of the truncated Neumann series
  double partial_sum_sup = 0;        // sup_N || sum_{n<N} (E*S_q)^{*n} ||_1
  double A_from_H = 0;               // 1 / H^(0)
  double A_pc_over_r = 0;            // p_c / r
  double A_formula = 0;              // p_c + [alpha > 2] p_c^2 sum|x|^2 Pi / sigma^2
  double rho = 0;                    // fitted decay exponent of E * S_q along the axis
};
HReport build_H_and_A(const LaceSystem& s, const LaceOptions& o = {});

struct LaceGreen {
  GreenTable table;
  TorusField G;
  double residual = 0;               // max |G - Pi - Pi*pD*G|
  double chi_torus = 0;              // G^(0)
  double chi_rep = 0;                // Pi^(0) / (1 - Pi^(0) p)
};
LaceGreen solve_G_from_lace(const StepDistribution& D, const PiFunction& Pi, double p, const std::vector<Site>& xs,
                            long M);

struct BootstrapReport {
  double g = 0, sup_term = 0;
  Site argmax{};
  std::string regime;                // "<=2", "(2,3]", ">3"
};
BootstrapReport bootstrap_g(const GreenTable& table, double lambda, double p);

struct Conv1Report {
  double a = 0, b = 0, L = 1;
  int d = 1;
  std::string regime;                // "a>d" or "a<d"
  double C = 0;                      // measured constant
  double tail = 0;                   // truncation bound added to every LHS value
  std::vector<double> r, lhs;
};
/// sum_y <x-y>_L^{-a} <y>_L^{-b} on the first axis by FFT on [-W, W]^d plus a tail bound.
Conv1Report conv1_harness(int d, double a, double b, double L, long W);

struct Conv2Report {
  double C1 = 0, g_l1 = 0;
  std::vector<double> r, residual;   // (f*g)(x) - C1 ||g||_1 <x>^{a-d}
  double rho_prime = 0;              // fitted from the residual's log-log slope
};
/// f = C1 <x>_L^{alpha^2 - d}, g finite support.
Conv2Report conv2_harness(int d, double alpha, double L, double C1, const std::map<Site, double>& g, long rmax);

/// delta (1 + u) + c s(x) <x>_L^{(a-d) ell} on 0 < |x|_inf <= radius; s = +1, or (-1)^{|x|_1}
/// when `alternating`.
struct SyntheticPiSpec {
  int d = 1;
  double alpha = 1.5, L = 1;
  int ell = 3;
  double c = 0.01, u = 0.0;
  long radius = 3;
  bool alternating = false;
  LaceModel model = LaceModel::SAW;
};
PiFunction synthetic_pi(const SyntheticPiSpec& s);
/// p-dependent family Pi_p = delta + p (Pi - delta).
std::function<PiFunction(double)> synthetic_family(const SyntheticPiSpec& s);

}  // namespace lacelab
