#include "yodet/engine.hpp"

#include <algorithm>
#include <optional>

#include "yodet/errors.hpp"

namespace yodet {

CachePlan activation_cache_plan(const NetworkGraph& graph) {
    const int n = static_cast<int>(graph.layers.size());
    CachePlan plan;
    plan.last_use.assign(static_cast<size_t>(n), -1);

    // A layer's output is read by the next layer unless that layer is a
    // route that skips it, and by any later route/shortcut reference.
    for (int k = 0; k < n; ++k) {
        const LayerSpec& spec = graph.layers[static_cast<size_t>(k)].spec;
        auto consume = [&](int idx) {
            if (idx >= 0)
                plan.last_use[static_cast<size_t>(idx)] =
                    std::max(plan.last_use[static_cast<size_t>(idx)], k);
        };
        switch (spec.kind) {
        case LayerKind::Route:
            for (int ref : spec.route_layers)
                consume(ref);
            break;
        case LayerKind::Shortcut:
            consume(k - 1);
            consume(spec.from);
            break;
        default:
            consume(k - 1);
            break;
        }
    }

    plan.retained_after.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        auto& retained = plan.retained_after[static_cast<size_t>(k)];
        for (int i = 0; i <= k; ++i) {
            if (plan.last_use[static_cast<size_t>(i)] > k)
                retained.push_back(i);
        }
        plan.peak_live = std::max(plan.peak_live, static_cast<int>(retained.size()));
    }
    return plan;
}

namespace {

ForwardOutput make_head_output(const NetworkGraph& graph, int layer_index, Tensor tensor) {
    const GraphLayer& layer = graph.layers[static_cast<size_t>(layer_index)];
    const YoloSpec& ys = *layer.yolo;

    ForwardOutput out;
    out.layer_index = layer_index;
    out.classes = ys.classes;
    out.scale.grid_h = tensor.extent(1);
    out.scale.grid_w = tensor.extent(2);
    out.scale.stride_y = static_cast<double>(graph.in_height) / out.scale.grid_h;
    out.scale.stride_x = static_cast<double>(graph.in_width) / out.scale.grid_w;
    out.scale.anchor_indices = ys.mask;
    for (int m : ys.mask)
        out.anchors.push_back(ys.anchors[static_cast<size_t>(m)]);
    out.tensor = std::move(tensor);
    return out;
}

} // namespace

std::vector<ForwardOutput> forward(const NetworkGraph& graph, const Tensor& input,
                                   bool use_cache_plan) {
    if (input.rank() != 3 || input.extent(0) != graph.in_channels ||
        input.extent(1) != graph.in_height || input.extent(2) != graph.in_width)
        throw ShapeError("forward input " + input.shape_str() + " does not match graph input (" +
                         std::to_string(graph.in_channels) + "x" +
                         std::to_string(graph.in_height) + "x" + std::to_string(graph.in_width) +
                         ")");

    const int n = static_cast<int>(graph.layers.size());
    std::optional<CachePlan> plan;
    if (use_cache_plan)
        plan = activation_cache_plan(graph);

    std::vector<std::optional<Tensor>> acts(static_cast<size_t>(n));
    std::vector<ForwardOutput> heads;

    auto activation_at = [&](int idx) -> const Tensor& {
        if (idx < 0)
            return input;
        if (!acts[static_cast<size_t>(idx)])
            throw Error("internal: activation " + std::to_string(idx) + " already released");
        return *acts[static_cast<size_t>(idx)];
    };

    for (int k = 0; k < n; ++k) {
        const GraphLayer& layer = graph.layers[static_cast<size_t>(k)];
        const LayerSpec& spec = layer.spec;
        Tensor out;
        try {
            switch (spec.kind) {
            case LayerKind::Convolutional: {
                out = conv2d(activation_at(k - 1), *layer.conv);
                if (spec.get_str("activation", "linear") == "leaky")
                    out = leaky_relu(out, static_cast<float>(spec.get_double("leaky_slope", 0.1)));
                break;
            }
            case LayerKind::Upsample:
                out = upsample2x(activation_at(k - 1));
                break;
            case LayerKind::Shortcut: {
                out = shortcut_add(activation_at(k - 1), activation_at(spec.from));
                if (spec.get_str("activation", "linear") == "leaky")
                    out = leaky_relu(out, static_cast<float>(spec.get_double("leaky_slope", 0.1)));
                break;
            }
            case LayerKind::Route: {
                std::vector<const Tensor*> refs;
                for (int ref : spec.route_layers)
                    refs.push_back(&activation_at(ref));
                out = route_concat(refs);
                break;
            }
            case LayerKind::Yolo:
                out = activation_at(k - 1); // pass-through; decode happens downstream
                heads.push_back(make_head_output(graph, k, out));
                break;
            }
        } catch (const ShapeError& e) {
            throw BuildError(std::string("forward failed: ") + e.what(), k);
        }

        if (out.shape != std::vector<int>{layer.out_shape[0], layer.out_shape[1],
                                          layer.out_shape[2]})
            throw BuildError("forward produced " + out.shape_str() +
                                 ", shape inference promised (" +
                                 std::to_string(layer.out_shape[0]) + "x" +
                                 std::to_string(layer.out_shape[1]) + "x" +
                                 std::to_string(layer.out_shape[2]) + ")",
                             k);

        acts[static_cast<size_t>(k)] = std::move(out);

        if (plan) {
            for (int i = 0; i <= k; ++i) {
                if (acts[static_cast<size_t>(i)] && plan->last_use[static_cast<size_t>(i)] <= k)
                    acts[static_cast<size_t>(i)].reset();
            }
        }
    }

    // Heads in stride order 32, 16, 8: coarsest grid first. File order is
    // kept for equal strides.
    std::stable_sort(heads.begin(), heads.end(), [](const ForwardOutput& a,
                                                    const ForwardOutput& b) {
        return a.scale.stride_x > b.scale.stride_x;
    });
    return heads;
}

} // namespace yodet
