#pragma once

#include "yodet/kernels.hpp"

// Variant sets compiled for the target architecture. CMake defines the
// YODET_HAVE_* macros and adds the matching source file.

namespace yodet::kernels {

#ifdef YODET_HAVE_AVX2_BUILD
const Ops& avx2_ops();
#endif

#ifdef YODET_HAVE_NEON_BUILD
const Ops& neon_ops();
#endif

} // namespace yodet::kernels
