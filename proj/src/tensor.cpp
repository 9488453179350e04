#include "yodet/tensor.hpp"

#include <sstream>

#include "yodet/errors.hpp"

namespace yodet {

int64_t shape_numel(const std::vector<int>& shape) {
    if (shape.empty())
        throw ShapeError("tensor shape must have at least one extent");
    int64_t n = 1;
    for (int e : shape) {
        if (e < 1)
            throw ShapeError("tensor extents must be >= 1, got " + std::to_string(e));
        n *= e;
    }
    return n;
}

Tensor::Tensor(std::vector<int> shape_, std::vector<float> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
    int64_t expect = shape_numel(shape);
    if (expect != static_cast<int64_t>(data.size()))
        throw ShapeError("tensor data length " + std::to_string(data.size()) +
                         " does not match shape product " + std::to_string(expect));
}

Tensor Tensor::zeros(std::vector<int> shape) {
    return filled(std::move(shape), 0.0f);
}

Tensor Tensor::filled(std::vector<int> shape, float value) {
    int64_t n = shape_numel(shape);
    Tensor t;
    t.shape = std::move(shape);
    t.data.assign(static_cast<size_t>(n), value);
    return t;
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ')';
    return os.str();
}

} // namespace yodet
