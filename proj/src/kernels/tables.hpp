#pragma once

#include "aggseek/kernels.hpp"

namespace aggseek::kernels {

const KernelTable& scalar_table();
#if defined(AGGSEEK_BUILD_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(AGGSEEK_BUILD_NEON)
const KernelTable& neon_table();
#endif

}  // namespace aggseek::kernels
