#pragma once

// Data-parallel inner loops shared by the analytics modules.
//
// Every kernel has a scalar reference implementation and, where the build
// and CPU allow it, an AVX2 variant. The scalar versions accumulate in four
// interleaved lanes and reduce them in the fixed order (l0 + l1) + (l2 + l3),
// which is exactly what the vector versions do, so both paths return
// bit-identical results. Nothing here uses fused multiply-add.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace kinex::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct CenteredMoments {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

struct KernelTable {
  Isa isa;
  // sum of x
  double (*sum)(const double* x, std::size_t n);
  // sums of (x-mx)^2, (y-my)^2, (x-mx)(y-my)
  CenteredMoments (*centered_moments)(const double* x, double mx, const double* y, double my,
                                      std::size_t n);
  // sum over i of (2i - n + 1) * z[i], i zero-based; z sorted ascending
  double (*rank_weighted_sum)(const double* z, std::size_t n);
  // sum of (y - (intercept + slope*x))^2
  double (*residual_sum_squares)(const double* x, const double* y, std::size_t n, double slope,
                                 double intercept);
  // out[i] = sqrt(max(0, 2(1 - rho[i])))
  void (*correlation_to_distance)(const double* rho, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

// Kernel table for `isa`, or nullptr if this build/CPU cannot run it.
const KernelTable* kernels_for(Isa isa) noexcept;

// All tables usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// The table chosen at first use: the widest supported ISA, unless the
// KINEX_SIMD environment variable is set to "scalar" or "avx2".
const KernelTable& active() noexcept;

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline CenteredMoments centered_moments(std::span<const double> x, double mx,
                                        std::span<const double> y, double my) {
  return active().centered_moments(x.data(), mx, y.data(), my, x.size());
}

inline double rank_weighted_sum(std::span<const double> sorted) {
  return active().rank_weighted_sum(sorted.data(), sorted.size());
}

inline double residual_sum_squares(std::span<const double> x, std::span<const double> y,
                                   double slope, double intercept) {
  return active().residual_sum_squares(x.data(), y.data(), x.size(), slope, intercept);
}

inline void correlation_to_distance(std::span<const double> rho, std::span<double> out) {
  active().correlation_to_distance(rho.data(), out.data(), rho.size());
}

}  // namespace kinex::kernels
