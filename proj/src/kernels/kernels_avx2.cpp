// AVX2/FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma;
// only dispatched to when the CPU reports both features at runtime.

#include "yodet/kernels.hpp"

#include <cstring>
#include <immintrin.h>

namespace yodet::kernels {

namespace {

// 4 output rows at a time so each loaded b row is reused four times.
void sgemm_avx2(int m, int n, int k, const float* a, const float* b, float* c) {
    std::memset(c, 0, static_cast<size_t>(m) * n * sizeof(float));

    int i = 0;
    for (; i + 4 <= m; i += 4) {
        float* c0 = c + static_cast<size_t>(i + 0) * n;
        float* c1 = c + static_cast<size_t>(i + 1) * n;
        float* c2 = c + static_cast<size_t>(i + 2) * n;
        float* c3 = c + static_cast<size_t>(i + 3) * n;
        for (int kk = 0; kk < k; ++kk) {
            const float* brow = b + static_cast<size_t>(kk) * n;
            const __m256 a0 = _mm256_broadcast_ss(a + static_cast<size_t>(i + 0) * k + kk);
            const __m256 a1 = _mm256_broadcast_ss(a + static_cast<size_t>(i + 1) * k + kk);
            const __m256 a2 = _mm256_broadcast_ss(a + static_cast<size_t>(i + 2) * k + kk);
            const __m256 a3 = _mm256_broadcast_ss(a + static_cast<size_t>(i + 3) * k + kk);
            int j = 0;
            for (; j + 8 <= n; j += 8) {
                const __m256 bv = _mm256_loadu_ps(brow + j);
                _mm256_storeu_ps(c0 + j, _mm256_fmadd_ps(a0, bv, _mm256_loadu_ps(c0 + j)));
                _mm256_storeu_ps(c1 + j, _mm256_fmadd_ps(a1, bv, _mm256_loadu_ps(c1 + j)));
                _mm256_storeu_ps(c2 + j, _mm256_fmadd_ps(a2, bv, _mm256_loadu_ps(c2 + j)));
                _mm256_storeu_ps(c3 + j, _mm256_fmadd_ps(a3, bv, _mm256_loadu_ps(c3 + j)));
            }
            const float s0 = a[static_cast<size_t>(i + 0) * k + kk];
            const float s1 = a[static_cast<size_t>(i + 1) * k + kk];
            const float s2 = a[static_cast<size_t>(i + 2) * k + kk];
            const float s3 = a[static_cast<size_t>(i + 3) * k + kk];
            for (; j < n; ++j) {
                c0[j] += s0 * brow[j];
                c1[j] += s1 * brow[j];
                c2[j] += s2 * brow[j];
                c3[j] += s3 * brow[j];
            }
        }
    }
    for (; i < m; ++i) {
        float* crow = c + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const float* brow = b + static_cast<size_t>(kk) * n;
            const __m256 av = _mm256_broadcast_ss(a + static_cast<size_t>(i) * k + kk);
            int j = 0;
            for (; j + 8 <= n; j += 8) {
                _mm256_storeu_ps(crow + j,
                                 _mm256_fmadd_ps(av, _mm256_loadu_ps(brow + j),
                                                 _mm256_loadu_ps(crow + j)));
            }
            const float s = a[static_cast<size_t>(i) * k + kk];
            for (; j < n; ++j)
                crow[j] += s * brow[j];
        }
    }
}

void add_avx2(const float* a, const float* b, float* out, int64_t n) {
    int64_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] + b[i];
}

void leaky_relu_avx2(const float* in, float* out, int64_t n, float slope) {
    const __m256 vslope = _mm256_set1_ps(slope);
    const __m256 zero = _mm256_setzero_ps();
    int64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 x = _mm256_loadu_ps(in + i);
        const __m256 neg = _mm256_mul_ps(x, vslope);
        const __m256 keep = _mm256_cmp_ps(x, zero, _CMP_GT_OQ);
        _mm256_storeu_ps(out + i, _mm256_blendv_ps(neg, x, keep));
    }
    for (; i < n; ++i) {
        const float x = in[i];
        out[i] = x > 0.0f ? x : slope * x;
    }
}

void scale_shift_avx2(const float* in, float* out, int64_t n, float scale, float shift) {
    const __m256 vscale = _mm256_set1_ps(scale);
    const __m256 vshift = _mm256_set1_ps(shift);
    int64_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_fmadd_ps(_mm256_loadu_ps(in + i), vscale, vshift));
    for (; i < n; ++i)
        out[i] = in[i] * scale + shift;
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops{"avx2", sgemm_avx2, add_avx2, leaky_relu_avx2, scale_shift_avx2};
    return ops;
}

} // namespace yodet::kernels
