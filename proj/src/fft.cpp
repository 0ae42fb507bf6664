#include "lacelab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lacelab {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::array<double, kMaxDim> Spectrum::momentum(std::size_t idx) const {
  std::array<double, kMaxDim> k{};
  const std::size_t last = last_len();
  const double step = 2 * std::numbers::pi / double(grid.M);
  k[grid.d - 1] = step * double(idx % last);
  idx /= last;
  for (int i = grid.d - 2; i >= 0; --i) {
    k[i] = step * double(grid.rep(long(idx % std::size_t(grid.M))));
    idx /= std::size_t(grid.M);
  }
  return k;
}

double Spectrum::weight(std::size_t idx) const {
  const long j = long(idx % last_len());
  return (j == 0 || 2 * j == grid.M) ? 1.0 : 2.0;
}

Spectrum fft_forward(const Grid& g, const std::vector<double>& f) {
  if (f.size() != g.size()) throw std::invalid_argument("fft_forward: size mismatch");
  Spectrum s;
  s.grid = g;
  std::size_t n = g.size() / std::size_t(g.M) * std::size_t(g.M / 2 + 1);
  s.data.resize(n);
  int dims[kMaxDim];
  for (int i = 0; i < g.d; ++i) dims[i] = int(g.M);
  std::vector<double> in(f);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c(g.d, dims, in.data(), reinterpret_cast<fftw_complex*>(s.data.data()),
                             FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return s;
}

std::vector<double> fft_inverse(const Spectrum& s) {
  const Grid& g = s.grid;
  std::vector<double> out(g.size());
  std::vector<std::complex<double>> in(s.data);  // c2r destroys its input
  int dims[kMaxDim];
  for (int i = 0; i < g.d; ++i) dims[i] = int(g.M);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r(g.d, dims, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                             FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double norm = 1.0 / double(g.size());
  for (double& v : out) v *= norm;
  return out;
}

std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  if (a.empty() || b.empty() || n == 0) return std::vector<double>(n, 0.0);
  const std::size_t na = std::min(a.size(), n), nb = std::min(b.size(), n);
  std::size_t m = 1;
  while (m < na + nb) m <<= 1;
  std::vector<double> x(m, 0.0), y(m, 0.0), out(m);
  std::copy(a.begin(), a.begin() + long(na), x.begin());
  std::copy(b.begin(), b.begin() + long(nb), y.begin());
  std::vector<std::complex<double>> X(m / 2 + 1), Y(m / 2 + 1);
  fftw_plan p1, p2, p3;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    p1 = fftw_plan_dft_r2c_1d(int(m), x.data(), reinterpret_cast<fftw_complex*>(X.data()), FFTW_ESTIMATE);
    p2 = fftw_plan_dft_r2c_1d(int(m), y.data(), reinterpret_cast<fftw_complex*>(Y.data()), FFTW_ESTIMATE);
    p3 = fftw_plan_dft_c2r_1d(int(m), reinterpret_cast<fftw_complex*>(X.data()), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(p1);
  fftw_execute(p2);
  for (std::size_t i = 0; i < X.size(); ++i) X[i] *= Y[i];
  fftw_execute(p3);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p1);
    fftw_destroy_plan(p2);
    fftw_destroy_plan(p3);
  }
  out.resize(n, 0.0);
  const double norm = 1.0 / double(m);
  for (double& v : out) v *= norm;
  return out;
}

}  // namespace lacelab
