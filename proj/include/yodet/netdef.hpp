#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "yodet/geometry.hpp"
#include "yodet/ops.hpp"

namespace yodet {

enum class LayerKind { Convolutional, Shortcut, Route, Upsample, Yolo };

const char* to_string(LayerKind k);

/// One parsed section of the network definition file. Unknown keys are
/// kept in `attributes` but otherwise ignored, so definition files with
/// extra training keys load cleanly.
struct LayerSpec {
    LayerKind kind;
    int index = 0;
    std::map<std::string, std::string> attributes;

    // References normalized to absolute earlier-layer indices.
    int from = -1;                 // shortcut
    std::vector<int> route_layers; // route

    bool has(const std::string& key) const { return attributes.count(key) != 0; }
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    std::vector<int> get_int_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
};

/// Parsed definition file: input dimensions from the leading [net]
/// section (defaults 3x416x416 when absent) plus the ordered layer list.
struct NetDef {
    int channels = 3;
    int height = 416;
    int width = 416;
    std::vector<LayerSpec> layers;
};

NetDef parse_netdef(std::istream& text);
NetDef parse_netdef_string(const std::string& text);
NetDef parse_netdef_file(const std::string& path);

/// Detection kernel filter count, B*(5+C).
int kernel_size(int boxes_per_cell, int class_count);

struct WeightsHeader {
    int32_t major = 0;
    int32_t minor = 2;
    int32_t revision = 0;
    uint64_t images_seen = 0;
};

/// Yolo head attributes resolved at build time.
struct YoloSpec {
    std::vector<int> mask;       // anchor slots for this head
    std::vector<Anchor> anchors; // all anchors in the file
    int classes = 0;
};

/// One layer with everything the engine needs to execute it.
struct GraphLayer {
    LayerSpec spec;
    std::array<int, 3> out_shape{}; // (c,h,w)
    std::optional<ConvParams> conv;
    std::optional<YoloSpec> yolo;
};

/// Fully parameterized network. Built once, then only read; safe to share
/// across worker threads.
struct NetworkGraph {
    int in_channels = 3;
    int in_height = 416;
    int in_width = 416;
    WeightsHeader header;
    std::vector<GraphLayer> layers;
    std::vector<int> yolo_heads;     // layer indices, file order
    uint64_t weights_digest = 0;     // fnv1a-64 over the weights byte stream
};

/// Shape inference + structural validation without weights: per-layer
/// output shapes, checked against each op's preconditions and Eq-style
/// head filter counts. Throws BuildError naming the failing layer.
std::vector<std::array<int, 3>> infer_shapes(const NetDef& def);

/// Per-conv-layer float counts ((4n or n) + n*c*kh*kw) and their sum.
int64_t expected_weight_floats(const NetDef& def);
int64_t layer_weight_floats(const NetDef& def, int layer_index);

/// Parse the binary weights stream (header + float payload) against the
/// definition and return the immutable graph. The stream must be consumed
/// exactly: short or trailing data is rejected with float counts.
NetworkGraph load_weights(const std::vector<uint8_t>& bytes, const NetDef& def);
NetworkGraph load_weights_file(const std::string& path, const NetDef& def);

/// Replace every batchnorm conv with its folded bias-only equivalent.
NetworkGraph fold_batchnorm(const NetworkGraph& graph);

/// FNV-1a 64-bit digest, used for weights/file audit fields.
uint64_t fnv1a64(const uint8_t* data, size_t len);

} // namespace yodet
