#include <algorithm>
#include <cmath>

#include "kinex/kernels.hpp"

namespace kinex::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline double reduce(const double (&acc)[kLanes]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

double sum_scalar(const double* x, std::size_t n) {
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += x[i + l];
  }
  double s = reduce(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

CenteredMoments centered_moments_scalar(const double* x, double mx, const double* y, double my,
                                        std::size_t n) {
  double axx[kLanes] = {0.0, 0.0, 0.0, 0.0};
  double ayy[kLanes] = {0.0, 0.0, 0.0, 0.0};
  double axy[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double dx = x[i + l] - mx;
      const double dy = y[i + l] - my;
      axx[l] += dx * dx;
      ayy[l] += dy * dy;
      axy[l] += dx * dy;
    }
  }
  CenteredMoments m{reduce(axx), reduce(ayy), reduce(axy)};
  for (; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

double rank_weighted_sum_scalar(const double* z, std::size_t n) {
  const double base = 1.0 - static_cast<double>(n);
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double w = 2.0 * static_cast<double>(i + l) + base;
      acc[l] += w * z[i + l];
    }
  }
  double s = reduce(acc);
  for (; i < n; ++i) s += (2.0 * static_cast<double>(i) + base) * z[i];
  return s;
}

double residual_sum_squares_scalar(const double* x, const double* y, std::size_t n, double slope,
                                   double intercept) {
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double r = y[i + l] - (intercept + slope * x[i + l]);
      acc[l] += r * r;
    }
  }
  double s = reduce(acc);
  for (; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    s += r * r;
  }
  return s;
}

void correlation_to_distance_scalar(const double* rho, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::sqrt(std::max(0.0, 2.0 * (1.0 - rho[i])));
  }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{
      Isa::Scalar,
      &sum_scalar,
      &centered_moments_scalar,
      &rank_weighted_sum_scalar,
      &residual_sum_squares_scalar,
      &correlation_to_distance_scalar,
  };
  return table;
}

}  // namespace kinex::kernels
