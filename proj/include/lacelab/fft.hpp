#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "lacelab/lattice.hpp"

namespace lacelab {

/// Index arithmetic for the periodic grid (Z/M)^d with representatives in (-M/2, M/2]^d.
struct Grid {
  int d = 1;
  long M = 2;

  std::size_t size() const {
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) n *= std::size_t(M);
    return n;
  }
  long wrap(long v) const {
    v %= M;
    return v < 0 ? v + M : v;
  }
  long rep(long i) const { return i <= M / 2 ? i : i - M; }
  std::size_t index(const Site& x) const {
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * std::size_t(M) + std::size_t(wrap(x[i]));
    return idx;
  }
  Site site(std::size_t idx) const {
    Site x{};
    for (int i = d - 1; i >= 0; --i) {
      x[i] = rep(long(idx % std::size_t(M)));
      idx /= std::size_t(M);
    }
    return x;
  }
  bool operator==(const Grid&) const = default;
};

/// Half spectrum of a real field (FFTW r2c layout: last axis has M/2+1 entries).
struct Spectrum {
  Grid grid;
  std::vector<std::complex<double>> data;

  std::size_t last_len() const { return std::size_t(grid.M / 2 + 1); }
  /// Momentum components (2 pi j / M, mapped into (-pi, pi]) of entry idx.
  std::array<double, kMaxDim> momentum(std::size_t idx) const;
  /// Multiplicity of entry idx when summing over the full spectrum.
  double weight(std::size_t idx) const;
};

/// Forward transform  F(k) = sum_x f(x) e^{-ik.x}.
Spectrum fft_forward(const Grid& g, const std::vector<double>& f);
/// Inverse transform  f(x) = M^{-d} sum_k F(k) e^{ik.x}.
std::vector<double> fft_inverse(const Spectrum& s);

/// First n coefficients of the linear convolution a*b (real FFT, zero padded).
std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b, std::size_t n);

/// Build a spectrum from a function of momentum (values assumed real and even).
template <class F>
Spectrum spectrum_from(const Grid& g, F&& fn) {
  Spectrum s;
  s.grid = g;
  std::size_t n = 1;
  for (int i = 0; i < g.d - 1; ++i) n *= std::size_t(g.M);
  n *= std::size_t(g.M / 2 + 1);
  s.data.resize(n);
  for (std::size_t idx = 0; idx < n; ++idx) s.data[idx] = fn(s.momentum(idx));
  return s;
}

}  // namespace lacelab
