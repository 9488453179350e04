#include "yodet/ops.hpp"

#include <cmath>
#include <cstring>

#include "yodet/errors.hpp"
#include "yodet/kernels.hpp"

namespace yodet {

namespace {

void check_rank3(const Tensor& t, const char* what) {
    if (t.rank() != 3)
        throw ShapeError(std::string(what) + " must be rank 3 (c,h,w), got " + t.shape_str());
}

// col is (c*kh*kw) x (oh*ow); out-of-bounds taps read as zero.
void im2col(const float* src, int c, int h, int w, int kh, int kw, int stride, int pad,
            int oh, int ow, float* col) {
    const size_t plane = static_cast<size_t>(oh) * ow;
    for (int ci = 0; ci < c; ++ci) {
        for (int ky = 0; ky < kh; ++ky) {
            for (int kx = 0; kx < kw; ++kx) {
                float* dst = col + ((static_cast<size_t>(ci) * kh + ky) * kw + kx) * plane;
                for (int y = 0; y < oh; ++y) {
                    const int sy = y * stride - pad + ky;
                    if (sy < 0 || sy >= h) {
                        std::memset(dst + static_cast<size_t>(y) * ow, 0, sizeof(float) * ow);
                        continue;
                    }
                    const float* srow = src + (static_cast<size_t>(ci) * h + sy) * w;
                    float* drow = dst + static_cast<size_t>(y) * ow;
                    for (int x = 0; x < ow; ++x) {
                        const int sx = x * stride - pad + kx;
                        drow[x] = (sx >= 0 && sx < w) ? srow[sx] : 0.0f;
                    }
                }
            }
        }
    }
}

} // namespace

int conv_out_extent(int in, int kernel, int pad, int stride) {
    if (stride < 1)
        throw ShapeError("convolution stride must be >= 1, got " + std::to_string(stride));
    if (pad < 0)
        throw ShapeError("convolution pad must be >= 0, got " + std::to_string(pad));
    const int span = in + 2 * pad - kernel;
    if (span < 0)
        throw ShapeError("kernel extent " + std::to_string(kernel) + " exceeds padded input " +
                         std::to_string(in + 2 * pad));
    return span / stride + 1;
}

Tensor conv2d(const Tensor& input, const ConvParams& params) {
    check_rank3(input, "conv2d input");
    if (params.weights.rank() != 4)
        throw ShapeError("conv2d weights must be rank 4 (o,i,kh,kw), got " +
                         params.weights.shape_str());

    const int c = input.extent(0), h = input.extent(1), w = input.extent(2);
    const int o = params.weights.extent(0);
    const int wc = params.weights.extent(1);
    const int kh = params.weights.extent(2);
    const int kw = params.weights.extent(3);
    if (wc != c)
        throw ShapeError("conv2d channel mismatch: weights expect " + std::to_string(wc) +
                         " input channels, activation has " + std::to_string(c));

    const auto& bn = params.batchnorm;
    if (bn) {
        const size_t n = static_cast<size_t>(o);
        if (bn->gamma.size() != n || bn->beta.size() != n || bn->rolling_mean.size() != n ||
            bn->rolling_var.size() != n)
            throw ShapeError("batchnorm vectors must all have length " + std::to_string(o));
    } else if (params.bias.size() != static_cast<size_t>(o)) {
        throw ShapeError("conv2d bias length " + std::to_string(params.bias.size()) +
                         " does not match " + std::to_string(o) + " output channels");
    }

    const int oh = conv_out_extent(h, kh, params.pad, params.stride);
    const int ow = conv_out_extent(w, kw, params.pad, params.stride);
    const int plane = oh * ow;
    const int taps = c * kh * kw;

    Tensor out = Tensor::zeros({o, oh, ow});
    const auto& ops = kernels::active_ops();

    if (kh == 1 && kw == 1 && params.stride == 1 && params.pad == 0) {
        // 1x1 stride-1 convolution is a plain GEMM on the activation.
        ops.sgemm(o, plane, taps, params.weights.data.data(), input.data.data(),
                  out.data.data());
    } else {
        std::vector<float> col(static_cast<size_t>(taps) * plane);
        im2col(input.data.data(), c, h, w, kh, kw, params.stride, params.pad, oh, ow,
               col.data());
        ops.sgemm(o, plane, taps, params.weights.data.data(), col.data(), out.data.data());
    }

    for (int j = 0; j < o; ++j) {
        float* row = out.data.data() + static_cast<size_t>(j) * plane;
        float scale = 1.0f, shift;
        if (bn) {
            // Precompute gamma/sqrt(var+eps) in double; the affine form is
            // within float rounding of the literal normalization formula.
            const double k = static_cast<double>(bn->gamma[j]) /
                             std::sqrt(static_cast<double>(bn->rolling_var[j]) + bn->epsilon);
            scale = static_cast<float>(k);
            shift = static_cast<float>(bn->beta[j] - k * bn->rolling_mean[j]);
        } else {
            shift = params.bias[j];
        }
        ops.scale_shift(row, row, plane, scale, shift);
    }
    return out;
}

Tensor leaky_relu(const Tensor& input, float slope) {
    Tensor out;
    out.shape = input.shape;
    out.data.resize(input.data.size());
    kernels::active_ops().leaky_relu(input.data.data(), out.data.data(), input.numel(), slope);
    return out;
}

Tensor upsample2x(const Tensor& input) {
    check_rank3(input, "upsample2x input");
    const int c = input.extent(0), h = input.extent(1), w = input.extent(2);
    Tensor out = Tensor::zeros({c, 2 * h, 2 * w});
    for (int ci = 0; ci < c; ++ci) {
        for (int y = 0; y < h; ++y) {
            const float* srow = input.data.data() + (static_cast<size_t>(ci) * h + y) * w;
            float* drow = out.data.data() + (static_cast<size_t>(ci) * 2 * h + 2 * y) * (2 * w);
            for (int x = 0; x < w; ++x) {
                drow[2 * x] = srow[x];
                drow[2 * x + 1] = srow[x];
            }
            std::memcpy(drow + static_cast<size_t>(2) * w, drow, sizeof(float) * 2 * w);
        }
    }
    return out;
}

Tensor shortcut_add(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw ShapeError("shortcut_add shape mismatch: " + a.shape_str() + " vs " +
                         b.shape_str());
    Tensor out;
    out.shape = a.shape;
    out.data.resize(a.data.size());
    kernels::active_ops().add(a.data.data(), b.data.data(), out.data.data(), a.numel());
    return out;
}

Tensor route_concat(const std::vector<const Tensor*>& inputs) {
    if (inputs.empty())
        throw ShapeError("route_concat needs at least one input");
    const Tensor& first = *inputs.front();
    check_rank3(first, "route_concat input");
    const int h = first.extent(1), w = first.extent(2);
    int total_c = 0;
    for (const Tensor* t : inputs) {
        check_rank3(*t, "route_concat input");
        if (t->extent(1) != h || t->extent(2) != w)
            throw ShapeError("route_concat spatial mismatch: " + first.shape_str() + " vs " +
                             t->shape_str());
        total_c += t->extent(0);
    }
    Tensor out = Tensor::zeros({total_c, h, w});
    float* dst = out.data.data();
    for (const Tensor* t : inputs) {
        std::memcpy(dst, t->data.data(), t->data.size() * sizeof(float));
        dst += t->data.size();
    }
    return out;
}

ConvParams fold_batchnorm(const ConvParams& params) {
    if (!params.batchnorm)
        return params;
    const auto& bn = *params.batchnorm;
    const int o = params.weights.extent(0);
    const int64_t per_filter = params.weights.numel() / o;

    ConvParams folded;
    folded.weights = params.weights;
    folded.bias.resize(static_cast<size_t>(o));
    folded.stride = params.stride;
    folded.pad = params.pad;
    for (int j = 0; j < o; ++j) {
        const double k = static_cast<double>(bn.gamma[j]) /
                         std::sqrt(static_cast<double>(bn.rolling_var[j]) + bn.epsilon);
        float* wrow = folded.weights.data.data() + static_cast<size_t>(j) * per_filter;
        for (int64_t i = 0; i < per_filter; ++i)
            wrow[i] = static_cast<float>(wrow[i] * k);
        folded.bias[static_cast<size_t>(j)] =
            static_cast<float>(bn.beta[j] - k * bn.rolling_mean[j]);
    }
    return folded;
}

} // namespace yodet
