#include <cstdlib>
#include <string_view>

#include "tables.hpp"

namespace kinex::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(KINEX_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& choose() noexcept {
  const char* env = std::getenv("KINEX_SIMD");
  const std::string_view want = env ? env : "";
  if (want == "scalar") return scalar_kernels();
  if (const KernelTable* t = kernels_for(Isa::Avx2)) return *t;
  return scalar_kernels();
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return &scalar_kernels();
    case Isa::Avx2:
#if defined(KINEX_BUILD_AVX2)
      if (cpu_has_avx2()) return &detail::avx2_table();
#endif
      return nullptr;
  }
  return nullptr;
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const KernelTable* t = kernels_for(Isa::Avx2)) out.push_back(t);
  return out;
}

const KernelTable& active() noexcept {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace kinex::kernels
