#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "tables.hpp"

namespace kinex::kernels::detail {
namespace {

// Same lane-combination order as the scalar reference.
inline double reduce(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = reduce(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

CenteredMoments centered_moments_avx2(const double* x, double mx, const double* y, double my,
                                      std::size_t n) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  __m256d axx = _mm256_setzero_pd();
  __m256d ayy = _mm256_setzero_pd();
  __m256d axy = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    axx = _mm256_add_pd(axx, _mm256_mul_pd(dx, dx));
    ayy = _mm256_add_pd(ayy, _mm256_mul_pd(dy, dy));
    axy = _mm256_add_pd(axy, _mm256_mul_pd(dx, dy));
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

double rank_weighted_sum_avx2(const double* z, std::size_t n) {
  const double base = 1.0 - static_cast<double>(n);
  const __m256d step = _mm256_set1_pd(8.0);
  // weights 2i + base for lanes i..i+3
  __m256d w = _mm256_add_pd(_mm256_set_pd(6.0, 4.0, 2.0, 0.0), _mm256_set1_pd(base));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w, _mm256_loadu_pd(z + i)));
    w = _mm256_add_pd(w, step);
  }
  double s = reduce(acc);
  for (; i < n; ++i) s += (2.0 * static_cast<double>(i) + base) * z[i];
  return s;
}

double residual_sum_squares_avx2(const double* x, const double* y, std::size_t n, double slope,
                                 double intercept) {
  const __m256d vb = _mm256_set1_pd(slope);
  const __m256d va = _mm256_set1_pd(intercept);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d fit = _mm256_add_pd(va, _mm256_mul_pd(vb, _mm256_loadu_pd(x + i)));
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y + i), fit);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(r, r));
  }
  double s = reduce(acc);
  for (; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    s += r * r;
  }
  return s;
}

void correlation_to_distance_avx2(const double* rho, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(two, _mm256_sub_pd(one, _mm256_loadu_pd(rho + i)));
    v = _mm256_max_pd(v, zero);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(v));
  }
  for (; i < n; ++i) out[i] = std::sqrt(std::max(0.0, 2.0 * (1.0 - rho[i])));
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{
      Isa::Avx2,
      &sum_avx2,
      &centered_moments_avx2,
      &rank_weighted_sum_avx2,
      &residual_sum_squares_avx2,
      &correlation_to_distance_avx2,
  };
  return table;
}

}  // namespace kinex::kernels::detail
