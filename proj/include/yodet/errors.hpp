#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace yodet {

/// Base class for all recoverable engine errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor extents do not satisfy an operation's preconditions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed network definition text.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = -1)
        : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_number(line) {}

    int line_number;
};

/// Structural problem found while building a graph from parsed specs.
class BuildError : public Error {
public:
    BuildError(const std::string& msg, int layer = -1)
        : Error(layer >= 0 ? "layer " + std::to_string(layer) + ": " + msg : msg),
          layer_index(layer) {}

    int layer_index;
};

/// Weights file does not match the network definition.
class WeightsError : public Error {
public:
    WeightsError(const std::string& msg, int64_t expected = -1, int64_t actual = -1)
        : Error(msg), expected_floats(expected), actual_floats(actual) {}

    int64_t expected_floats;
    int64_t actual_floats;
};

/// File could not be opened, read or decoded.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace yodet
