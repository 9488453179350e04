#include "yodet/decode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "yodet/errors.hpp"

namespace yodet {

namespace {

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

double box_xmin(const BBox& b) {
    return convert_box(b, BoxFormat::CornerPx, {1.0, 1.0}).coords[0];
}

double box_ymin(const BBox& b) {
    return convert_box(b, BoxFormat::CornerPx, {1.0, 1.0}).coords[1];
}

// Confidence descending; ties broken by class id then box position so
// the ordering is deterministic.
bool detection_before(const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence)
        return a.confidence > b.confidence;
    if (a.class_id != b.class_id)
        return a.class_id < b.class_id;
    const double ax = box_xmin(a.box), bx = box_xmin(b.box);
    if (ax != bx)
        return ax < bx;
    return box_ymin(a.box) < box_ymin(b.box);
}

} // namespace

DecodeResult decode_head(const ForwardOutput& head) {
    const Tensor& t = head.tensor;
    const int boxes = static_cast<int>(head.anchors.size());
    const int classes = head.classes;
    const int per_box = 5 + classes;
    if (t.rank() != 3 || t.extent(0) != boxes * per_box)
        throw ShapeError("decode_head expects " + std::to_string(boxes * per_box) +
                         " channels (B*(5+C)), head tensor is " + t.shape_str());

    const int gh = t.extent(1), gw = t.extent(2);
    const double net_w = gw * head.scale.stride_x;
    const double net_h = gh * head.scale.stride_y;

    DecodeResult result;
    result.candidates.reserve(static_cast<size_t>(boxes) * gh * gw);

    for (int b = 0; b < boxes; ++b) {
        const int base = b * per_box;
        for (int cy = 0; cy < gh; ++cy) {
            for (int cx = 0; cx < gw; ++cx) {
                RawPrediction raw;
                raw.tx = t.at3(base + 0, cy, cx);
                raw.ty = t.at3(base + 1, cy, cx);
                raw.tw = t.at3(base + 2, cy, cx);
                raw.th = t.at3(base + 3, cy, cx);
                raw.objectness_logit = t.at3(base + 4, cy, cx);
                raw.class_logits.resize(static_cast<size_t>(classes));
                for (int k = 0; k < classes; ++k)
                    raw.class_logits[static_cast<size_t>(k)] = t.at3(base + 5 + k, cy, cx);
                raw.cell_x = cx;
                raw.cell_y = cy;
                raw.anchor = head.anchors[static_cast<size_t>(b)];
                raw.stride_x = head.scale.stride_x;
                raw.stride_y = head.scale.stride_y;

                bool finite = std::isfinite(raw.tx) && std::isfinite(raw.ty) &&
                              std::isfinite(raw.tw) && std::isfinite(raw.th) &&
                              std::isfinite(raw.objectness_logit);
                for (float l : raw.class_logits)
                    finite = finite && std::isfinite(l);
                if (!finite) {
                    ++result.dropped_nonfinite;
                    continue;
                }

                const double bx_px = (sigmoid(raw.tx) + cx) * head.scale.stride_x;
                const double by_px = (sigmoid(raw.ty) + cy) * head.scale.stride_y;
                const double bw_px = raw.anchor.pw * std::exp(raw.tw);
                const double bh_px = raw.anchor.ph * std::exp(raw.th);

                Candidate cand;
                cand.box = BBox::center_norm(bx_px / net_w, by_px / net_h, bw_px / net_w,
                                             bh_px / net_h);
                cand.objectness = sigmoid(raw.objectness_logit);
                cand.class_scores.resize(static_cast<size_t>(classes));
                for (int k = 0; k < classes; ++k)
                    cand.class_scores[static_cast<size_t>(k)] =
                        cand.objectness * sigmoid(raw.class_logits[static_cast<size_t>(k)]);
                cand.raw = std::move(raw);
                result.candidates.push_back(std::move(cand));
            }
        }
    }
    return result;
}

std::vector<Detection> confidence_filter(const std::vector<Candidate>& candidates,
                                         double threshold,
                                         const std::vector<std::string>& names) {
    std::vector<Detection> out;
    for (const Candidate& cand : candidates) {
        int best = 0;
        for (int k = 1; k < static_cast<int>(cand.class_scores.size()); ++k) {
            if (cand.class_scores[static_cast<size_t>(k)] >
                cand.class_scores[static_cast<size_t>(best)])
                best = k;
        }
        if (cand.class_scores.empty() ||
            cand.class_scores[static_cast<size_t>(best)] <= threshold)
            continue;
        Detection det;
        det.box = cand.box;
        det.class_id = best;
        det.class_name = static_cast<size_t>(best) < names.size()
                             ? names[static_cast<size_t>(best)]
                             : "class" + std::to_string(best);
        det.confidence = cand.class_scores[static_cast<size_t>(best)];
        out.push_back(std::move(det));
    }
    return out;
}

std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold) {
    std::map<int, std::vector<Detection>> by_class;
    for (Detection& det : detections)
        by_class[det.class_id].push_back(std::move(det));

    std::vector<Detection> kept;
    for (auto& [class_id, group] : by_class) {
        (void)class_id;
        std::sort(group.begin(), group.end(), detection_before);
        std::vector<bool> suppressed(group.size(), false);
        for (size_t i = 0; i < group.size(); ++i) {
            if (suppressed[i])
                continue;
            for (size_t j = i + 1; j < group.size(); ++j) {
                if (!suppressed[j] && iou(group[i].box, group[j].box) > iou_threshold)
                    suppressed[j] = true;
            }
            kept.push_back(std::move(group[i]));
        }
    }
    std::sort(kept.begin(), kept.end(), detection_before);
    return kept;
}

std::vector<std::string> load_names(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open names file: " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        names.push_back(line);
    }
    // A trailing newline produces one empty final entry; drop it.
    while (!names.empty() && names.back().empty())
        names.pop_back();
    return names;
}

} // namespace yodet
