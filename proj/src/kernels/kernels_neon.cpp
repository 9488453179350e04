// NEON variants, mirroring the AVX2 kernels at 4-lane width. NEON is
// baseline on aarch64 so no runtime feature probe is needed there.

#include "yodet/kernels.hpp"

#include <arm_neon.h>
#include <cstring>

namespace yodet::kernels {

namespace {

void sgemm_neon(int m, int n, int k, const float* a, const float* b, float* c) {
    std::memset(c, 0, static_cast<size_t>(m) * n * sizeof(float));

    int i = 0;
    for (; i + 4 <= m; i += 4) {
        float* c0 = c + static_cast<size_t>(i + 0) * n;
        float* c1 = c + static_cast<size_t>(i + 1) * n;
        float* c2 = c + static_cast<size_t>(i + 2) * n;
        float* c3 = c + static_cast<size_t>(i + 3) * n;
        for (int kk = 0; kk < k; ++kk) {
            const float* brow = b + static_cast<size_t>(kk) * n;
            const float s0 = a[static_cast<size_t>(i + 0) * k + kk];
            const float s1 = a[static_cast<size_t>(i + 1) * k + kk];
            const float s2 = a[static_cast<size_t>(i + 2) * k + kk];
            const float s3 = a[static_cast<size_t>(i + 3) * k + kk];
            const float32x4_t a0 = vdupq_n_f32(s0);
            const float32x4_t a1 = vdupq_n_f32(s1);
            const float32x4_t a2 = vdupq_n_f32(s2);
            const float32x4_t a3 = vdupq_n_f32(s3);
            int j = 0;
            for (; j + 4 <= n; j += 4) {
                const float32x4_t bv = vld1q_f32(brow + j);
                vst1q_f32(c0 + j, vfmaq_f32(vld1q_f32(c0 + j), a0, bv));
                vst1q_f32(c1 + j, vfmaq_f32(vld1q_f32(c1 + j), a1, bv));
                vst1q_f32(c2 + j, vfmaq_f32(vld1q_f32(c2 + j), a2, bv));
                vst1q_f32(c3 + j, vfmaq_f32(vld1q_f32(c3 + j), a3, bv));
            }
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
            const float s = a[static_cast<size_t>(i) * k + kk];
            const float32x4_t av = vdupq_n_f32(s);
            int j = 0;
            for (; j + 4 <= n; j += 4)
                vst1q_f32(crow + j, vfmaq_f32(vld1q_f32(crow + j), av, vld1q_f32(brow + j)));
            for (; j < n; ++j)
                crow[j] += s * brow[j];
        }
    }
}

void add_neon(const float* a, const float* b, float* out, int64_t n) {
    int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        vst1q_f32(out + i, vaddq_f32(vld1q_f32(a + i), vld1q_f32(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] + b[i];
}

void leaky_relu_neon(const float* in, float* out, int64_t n, float slope) {
    const float32x4_t vslope = vdupq_n_f32(slope);
    const float32x4_t zero = vdupq_n_f32(0.0f);
    int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t x = vld1q_f32(in + i);
        const float32x4_t neg = vmulq_f32(x, vslope);
        const uint32x4_t keep = vcgtq_f32(x, zero);
        vst1q_f32(out + i, vbslq_f32(keep, x, neg));
    }
    for (; i < n; ++i) {
        const float x = in[i];
        out[i] = x > 0.0f ? x : slope * x;
    }
}

void scale_shift_neon(const float* in, float* out, int64_t n, float scale, float shift) {
    const float32x4_t vscale = vdupq_n_f32(scale);
    const float32x4_t vshift = vdupq_n_f32(shift);
    int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        vst1q_f32(out + i, vfmaq_f32(vshift, vld1q_f32(in + i), vscale));
    for (; i < n; ++i)
        out[i] = in[i] * scale + shift;
}

} // namespace

const Ops& neon_ops() {
    static const Ops ops{"neon", sgemm_neon, add_neon, leaky_relu_neon, scale_shift_neon};
    return ops;
}

} // namespace yodet::kernels
