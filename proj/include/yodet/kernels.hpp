#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace yodet::kernels {

/// One set of data-parallel inner-loop kernels. All variants share these
/// signatures; the scalar set is the reference the SIMD sets are
/// equivalence-tested against.
struct Ops {
    const char* name;

    /// c(m,n) = a(m,k) * b(k,n), row-major, c fully overwritten.
    void (*sgemm)(int m, int n, int k, const float* a, const float* b, float* c);

    /// out[i] = a[i] + b[i]
    void (*add)(const float* a, const float* b, float* out, int64_t n);

    /// out[i] = in[i] > 0 ? in[i] : slope * in[i]
    void (*leaky_relu)(const float* in, float* out, int64_t n, float slope);

    /// out[i] = in[i] * scale + shift  (per-channel batchnorm / bias row)
    void (*scale_shift)(const float* in, float* out, int64_t n, float scale, float shift);
};

/// Portable reference kernels.
const Ops& scalar_ops();

/// Kernel set chosen for this process: best SIMD variant the CPU supports,
/// unless overridden by select_ops() or the YODET_KERNELS environment
/// variable ("scalar", "avx2", "neon", "auto").
const Ops& active_ops();

/// Force a specific kernel set. Returns false (and leaves the selection
/// unchanged) if the named set is unavailable on this CPU.
bool select_ops(std::string_view name);

/// Every kernel set usable on this CPU, scalar first.
std::vector<const Ops*> available_ops();

} // namespace yodet::kernels
