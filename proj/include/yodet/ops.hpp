#pragma once

#include <optional>
#include <vector>

#include "yodet/tensor.hpp"

namespace yodet {

/// Inference-time batch normalization parameters, one entry per output
/// channel. Applied as gamma*(x-mean)/sqrt(var+eps)+beta after the
/// convolution sum and before activation.
struct BatchNorm {
    std::vector<float> gamma;
    std::vector<float> beta;
    std::vector<float> rolling_mean;
    std::vector<float> rolling_var;
    float epsilon = 1e-5f;
};

/// Parameters of one convolutional layer. When batchnorm is present the
/// separate bias is ignored and beta provides the shift (Darknet weight
/// file convention).
struct ConvParams {
    Tensor weights; // (out_channels, in_channels, kernel_h, kernel_w)
    std::vector<float> bias;
    std::optional<BatchNorm> batchnorm;
    int stride = 1;
    int pad = 0;
};

/// Output spatial extent of a convolution, floor((in + 2*pad - k)/stride) + 1.
/// Throws ShapeError unless the result is >= 1.
int conv_out_extent(int in, int kernel, int pad, int stride);

/// Cross-correlation of a (c,h,w) activation with params.weights, plus
/// batchnorm or bias. Pure; scratch buffers are local to the call.
Tensor conv2d(const Tensor& input, const ConvParams& params);

/// Elementwise x > 0 ? x : slope*x.
Tensor leaky_relu(const Tensor& input, float slope);

/// Nearest-neighbor 2x upsample of a (c,h,w) tensor.
Tensor upsample2x(const Tensor& input);

/// Elementwise sum of two equal-shape tensors.
Tensor shortcut_add(const Tensor& a, const Tensor& b);

/// Channel-axis concatenation; inputs must agree on h and w.
Tensor route_concat(const std::vector<const Tensor*>& inputs);

/// Fold batchnorm into the convolution weights and bias, producing an
/// equivalent bias-only layer. Equivalence with the unfolded path is
/// within 1e-5.
ConvParams fold_batchnorm(const ConvParams& params);

} // namespace yodet
