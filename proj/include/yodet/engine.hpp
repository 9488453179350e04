#pragma once

#include <vector>

#include "yodet/netdef.hpp"

namespace yodet {

/// Geometry of one detection scale. For the full 416 network the strides
/// are 32/16/8 with grids 13/26/52; toy definitions may produce other
/// (possibly fractional) strides.
struct ScaleSpec {
    double stride_x = 0.0; // input pixels per grid cell
    double stride_y = 0.0;
    int grid_w = 0;
    int grid_h = 0;
    std::vector<int> anchor_indices; // mask slots assigned to this head
};

/// Raw tensor of one yolo head, (B*(5+C), S, S), plus everything needed
/// to decode it.
struct ForwardOutput {
    Tensor tensor;
    ScaleSpec scale;
    std::vector<Anchor> anchors; // the masked anchors, in mask order
    int classes = 0;
    int layer_index = -1;
};

/// Activation retention schedule: which earlier outputs must stay alive
/// after each layer because a later route/shortcut still reads them.
struct CachePlan {
    std::vector<int> last_use;
    std::vector<std::vector<int>> retained_after;
    int peak_live = 0;
};

CachePlan activation_cache_plan(const NetworkGraph& graph);

/// Execute the layers in index order on one (c,h,w) input and collect the
/// yolo head tensors, ordered by stride descending (32, 16, 8 for the
/// full network). Deterministic; uses only call-local buffers, so any
/// number of passes may run concurrently over the same graph.
std::vector<ForwardOutput> forward(const NetworkGraph& graph, const Tensor& input,
                                   bool use_cache_plan = true);

} // namespace yodet
