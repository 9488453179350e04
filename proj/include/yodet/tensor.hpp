#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace yodet {

/// Dense n-dimensional float32 array, row-major.
///
/// Activations use (channels, height, width); convolution weights use
/// (out_channels, in_channels, kernel_h, kernel_w). Tensors are plain
/// values: once built they are only read, so sharing one across worker
/// threads is safe.
struct Tensor {
    std::vector<int> shape;
    std::vector<float> data;

    Tensor() = default;
    Tensor(std::vector<int> shape_, std::vector<float> data_);

    static Tensor zeros(std::vector<int> shape);
    static Tensor filled(std::vector<int> shape, float value);

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }
    int extent(int axis) const { return shape[static_cast<size_t>(axis)]; }

    // (c,h,w) accessors for rank-3 activations.
    float at3(int c, int y, int x) const {
        return data[(static_cast<size_t>(c) * shape[1] + y) * shape[2] + x];
    }
    float& at3(int c, int y, int x) {
        return data[(static_cast<size_t>(c) * shape[1] + y) * shape[2] + x];
    }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
    std::string shape_str() const;
};

/// Product of extents; throws ShapeError on non-positive extents.
int64_t shape_numel(const std::vector<int>& shape);

} // namespace yodet
