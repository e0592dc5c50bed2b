#pragma once

#include "ctfactor/kernels.hpp"

namespace ctfactor::kernels::detail {

extern const KernelTable scalar_table;
#if defined(CTFACTOR_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif

}  // namespace ctfactor::kernels::detail
