#include "yodet/kernels.hpp"

#include <cstring>

namespace yodet::kernels {

namespace {

// i-k-j order: for each output row, accumulate one a[i,k] broadcast at a
// time across the b row. Accumulation order over k matches the SIMD
// variants so differences stay within rounding.
void sgemm_scalar(int m, int n, int k, const float* a, const float* b, float* c) {
    std::memset(c, 0, static_cast<size_t>(m) * n * sizeof(float));
    for (int i = 0; i < m; ++i) {
        float* crow = c + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const float av = a[static_cast<size_t>(i) * k + kk];
            const float* brow = b + static_cast<size_t>(kk) * n;
            for (int j = 0; j < n; ++j)
                crow[j] += av * brow[j];
        }
    }
}

void add_scalar(const float* a, const float* b, float* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i)
        out[i] = a[i] + b[i];
}

void leaky_relu_scalar(const float* in, float* out, int64_t n, float slope) {
    for (int64_t i = 0; i < n; ++i) {
        const float x = in[i];
        out[i] = x > 0.0f ? x : slope * x;
    }
}

void scale_shift_scalar(const float* in, float* out, int64_t n, float scale, float shift) {
    for (int64_t i = 0; i < n; ++i)
        out[i] = in[i] * scale + shift;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", sgemm_scalar, add_scalar, leaky_relu_scalar,
                         scale_shift_scalar};
    return ops;
}

} // namespace yodet::kernels
