#pragma once

#include <string>
#include <vector>

#include "yodet/engine.hpp"
#include "yodet/geometry.hpp"

namespace yodet {

/// Untransformed network outputs for one cell/anchor slot.
struct RawPrediction {
    float tx = 0, ty = 0, tw = 0, th = 0;
    float objectness_logit = 0;
    std::vector<float> class_logits;
    int cell_x = 0, cell_y = 0; // top-left grid coordinates
    Anchor anchor;
    double stride_x = 0, stride_y = 0;
};

/// One decoded cell/anchor: box in CenterNorm (fractions of the network
/// input) plus objectness and the per-class scores
/// objectness * sigmoid(class_logit).
struct Candidate {
    RawPrediction raw;
    BBox box;
    double objectness = 0;
    std::vector<double> class_scores;
};

struct DecodeResult {
    std::vector<Candidate> candidates;
    int dropped_nonfinite = 0; // predictions with NaN/inf raw values
};

/// Apply the box transforms to a head tensor: bx = sigmoid(tx)+cx,
/// by = sigmoid(ty)+cy (grid units, then *stride to pixels),
/// bw = pw*exp(tw), bh = ph*exp(th).
DecodeResult decode_head(const ForwardOutput& head);

struct Detection {
    BBox box;
    int class_id = -1;
    std::string class_name;
    double confidence = 0;
    int frame_id = -1;
};

/// Keep candidates whose best class score exceeds the threshold
/// (strictly); class_id is the argmax, ties to the lowest id. Names give
/// the labels; an empty list falls back to "classN".
std::vector<Detection> confidence_filter(const std::vector<Candidate>& candidates,
                                         double threshold,
                                         const std::vector<std::string>& names);

/// Greedy per-class non-maximal suppression. Within a class, boxes with
/// IoU strictly above the threshold against a kept higher-confidence box
/// are dropped; different classes never suppress each other. Output is
/// sorted by confidence descending. Surviving detections are returned
/// unmodified.
std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold);

/// One class label per line; line index is the class id.
std::vector<std::string> load_names(const std::string& path);

} // namespace yodet
