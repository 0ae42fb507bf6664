#pragma once

#include <vector>

namespace lacelab {

/// Density of the isotropic law with characteristic function exp(-s|k|^{alpha^2}) on R^d,
/// evaluated at radius r = |x|. Closed Gaussian form for alpha >= 2; for alpha < 2 the
/// radial Fourier integral is taken along a rotated contour where it decays
/// exponentially (d in 1..4).
double stable_density(double alpha, int d, double s, double r);

/// int_{R^d} p_s(x) dx by radial quadrature (should be 1).
double stable_total_mass(double alpha, int d, double s);

/// int_0^inf p_{v t}(x) dt by quadrature in log t.
double stable_time_integral(double alpha, int d, double v, double r);

struct HK0Report {
  double sup = 0;       // sup p_s(x) |x|^{d+alpha^2} / s over the grid
  double min = 0;       // inf of the same ratio
  bool finite = false;
};
HK0Report verify_HK0(double alpha, int d, const std::vector<double>& sGrid, const std::vector<double>& rGrid);

}  // namespace lacelab
