#pragma once

#include "kinex/kernels.hpp"

namespace kinex::kernels::detail {

#if defined(KINEX_BUILD_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace kinex::kernels::detail
