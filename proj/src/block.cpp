#include "lacelab/block.hpp"

#include <cmath>
#include <limits>

#include "lacelab/errors.hpp"

namespace lacelab {

Profile Profile::uniform() {
  Profile p;
  p.name = "uniform";
  p.separable = true;
  p.h1 = [](double u) { return std::fabs(u) <= 1 + 1e-12 ? 0.5 : 0.0; };
  return p;
}

Profile Profile::tent() {
  Profile p;
  p.name = "tent";
  p.separable = true;
  p.h1 = [](double u) { return std::max(0.0, 1 - std::fabs(u)); };
  return p;
}

Profile Profile::dome() {
  Profile p;
  p.name = "dome";
  p.separable = false;
  p.h = [](const double* x, int d) {
    double r2 = 0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    return std::max(0.0, 1 - r2);
  };
  return p;
}

Profile Profile::by_name(const std::string& name) {
  if (name == "uniform") return uniform();
  if (name == "tent") return tent();
  if (name == "dome") return dome();
  throw DomainError("stepdist", "profile", "unknown block profile '" + name + "'");
}

BlockDistribution::BlockDistribution(int d, double L, Profile h) : d_(d), L_(L), h_(std::move(h)) {
  require(d >= 1 && d <= kMaxDim, "stepdist", "d", "dimension must be in 1..4");
  require(L >= 1, "stepdist", "L", "L must be >= 1");
  R_ = long(std::floor(L + 1e-12));
  if (h_.separable) {
    u1_.assign(2 * R_ + 1, 0.0);
    double z = 0;
    for (long m = -R_; m <= R_; ++m) z += (u1_[m + R_] = h_.h1(double(m) / L));
    require(z > 0, "stepdist", "profile", "block profile has zero mass on the lattice");
    for (double& v : u1_) v /= z;
    if (!h_.h) {
      auto f = h_.h1;
      h_.h = [f](const double* x, int dd) {
        double p = 1;
        for (int i = 0; i < dd; ++i) p *= f(x[i]);
        return p;
      };
    }
  }
  double z = 0;
  std::vector<std::pair<Site, double>> pts;
  for_each_in_box(d, R_, [&](const Site& x) {
    double v;
    if (h_.separable) {
      v = 1;
      for (int i = 0; i < d; ++i) v *= u1_[x[i] + R_];
    } else {
      double y[kMaxDim];
      for (int i = 0; i < d; ++i) y[i] = double(x[i]) / L;
      v = h_.h(y, d);
    }
    if (v > 0) {
      pts.emplace_back(x, v);
      z += v;
    }
  });
  require(z > 0, "stepdist", "profile", "block profile has zero mass on the lattice");
  for (auto& [x, v] : pts) {
    v /= z;
    sigmaL2_ += norm2(x, d) * v;
  }
  support_ = std::move(pts);
}

double BlockDistribution::mass(const Site& x) const {
  if (sup_norm(x, d_) > R_) return 0;
  if (h_.separable) {
    double v = 1;
    for (int i = 0; i < d_; ++i) v *= u1_[x[i] + R_];
    return v;
  }
  for (const auto& [y, v] : support_)
    if (y == x) return v;
  return 0;
}

double BlockDistribution::hat(const Momentum& k) const {
  if (h_.separable) {
    double p = 1;
    for (int i = 0; i < d_; ++i) {
      double s = u1_[R_];
      for (long m = 1; m <= R_; ++m) s += 2 * u1_[m + R_] * std::cos(k[i] * m);
      p *= s;
    }
    return p;
  }
  double s = 0;
  for (const auto& [x, v] : support_) {
    double ph = 0;
    for (int i = 0; i < d_; ++i) ph += k[i] * x[i];
    s += v * std::cos(ph);
  }
  return s;
}

double BlockDistribution::one_minus_hat(const Momentum& k) const {
  if (h_.separable) {
    double logsum = 0;
    bool small = true;
    double prod = 1;
    for (int i = 0; i < d_; ++i) {
      double eps = 0;
      for (long m = 1; m <= R_; ++m) {
        const double sn = std::sin(0.5 * k[i] * m);
        eps += 4 * u1_[m + R_] * sn * sn;
      }
      if (eps >= 1) small = false;
      else logsum += std::log1p(-eps);
      prod *= 1 - eps;
    }
    return small ? -std::expm1(logsum) : 1 - prod;
  }
  double s = 0;
  for (const auto& [x, v] : support_) {
    double ph = 0;
    for (int i = 0; i < d_; ++i) ph += k[i] * x[i];
    const double sn = std::sin(0.5 * ph);
    s += 2 * v * sn * sn;
  }
  return s;
}

SubordinatorWeights::SubordinatorWeights(double alpha)
    : alpha_(alpha), zeta_s_(0), li_((require(alpha > 0, "stepdist", "alpha", "alpha must be > 0"), 1 + 0.5 * alpha)) {
  zeta_s_ = zeta(1 + 0.5 * alpha);
}

double SubordinatorWeights::tail(long T) const { return hurwitz_zeta(s(), double(T) + 1) / zeta_s_; }

double SubordinatorWeights::mean() const {
  if (alpha_ <= 2) return std::numeric_limits<double>::infinity();
  return zeta(a()) / zeta_s_;
}

double SubordinatorWeights::one_minus_phi(double v, double one_minus_v) const {
  if (v > 0.5) return one_minus_phi_log(std::log1p(-one_minus_v));
  return 1 - phi(v);
}

}  // namespace lacelab
