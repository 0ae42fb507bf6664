#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lacelab {

inline constexpr int kMaxDim = 4;

/// A point of Z^d, d <= kMaxDim. Unused trailing coordinates are zero.
using Site = std::array<long, kMaxDim>;

inline Site make_site(std::initializer_list<long> c) {
  Site s{};
  int i = 0;
  for (long v : c) s[i++] = v;
  return s;
}

inline Site axis_site(int d, long r) {
  (void)d;
  Site s{};
  s[0] = r;
  return s;
}

inline Site diagonal_site(int d, long r) {
  Site s{};
  for (int i = 0; i < d; ++i) s[i] = r;
  return s;
}

inline double norm2(const Site& x, int d) {
  double s = 0;
  for (int i = 0; i < d; ++i) s += double(x[i]) * double(x[i]);
  return s;
}

inline double norm(const Site& x, int d) { return std::sqrt(norm2(x, d)); }

inline long sup_norm(const Site& x, int d) {
  long m = 0;
  for (int i = 0; i < d; ++i) m = std::max(m, std::labs(x[i]));
  return m;
}

/// <x>_l = |x| v l
inline double bracket(double r, double ell) { return r > ell ? r : ell; }
inline double bracket(const Site& x, int d, double ell) { return bracket(norm(x, d), ell); }

inline Site operator+(Site a, const Site& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] += b[i];
  return a;
}
inline Site operator-(Site a, const Site& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] -= b[i];
  return a;
}
inline Site operator-(Site a) {
  for (auto& v : a) v = -v;
  return a;
}

inline bool is_origin(const Site& x) {
  for (long v : x)
    if (v) return false;
  return true;
}

std::string to_string(const Site& x, int d);

/// Visit every site with sup-norm <= R, in lexicographic order.
template <class F>
void for_each_in_box(int d, long R, F&& f) {
  Site x{};
  for (int i = 0; i < d; ++i) x[i] = -R;
  while (true) {
    f(x);
    int i = d - 1;
    while (i >= 0 && x[i] == R) {
      x[i] = -R;
      --i;
    }
    if (i < 0) return;
    ++x[i];
  }
}

/// Canonical representative of x under the hyperoctahedral group
/// (sorted absolute values, descending). D and every kernel built from it
/// depend on x only through this.
inline Site canonical(const Site& x, int d) {
  Site c{};
  for (int i = 0; i < d; ++i) c[i] = std::labs(x[i]);
  std::sort(c.begin(), c.begin() + d, std::greater<long>());
  return c;
}

}  // namespace lacelab
