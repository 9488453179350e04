#pragma once

#include <array>

namespace yodet {

/// Prior box template in input-image pixels.
struct Anchor {
    double pw = 0.0;
    double ph = 0.0;
};

enum class BoxFormat {
    CenterNorm, // bx,by,bw,bh as fractions of the image in [0,1]
    TopLeftPx,  // x,y,w,h in pixels
    CornerPx,   // xmin,ymin,xmax,ymax in pixels
};

const char* to_string(BoxFormat f);

/// One axis-aligned box. The meaning of the four coordinates depends on
/// the format tag; convert_box moves between the three representations.
struct BBox {
    BoxFormat format = BoxFormat::CornerPx;
    std::array<double, 4> coords{};

    static BBox center_norm(double bx, double by, double bw, double bh) {
        return {BoxFormat::CenterNorm, {bx, by, bw, bh}};
    }
    static BBox topleft_px(double x, double y, double w, double h) {
        return {BoxFormat::TopLeftPx, {x, y, w, h}};
    }
    static BBox corner_px(double xmin, double ymin, double xmax, double ymax) {
        return {BoxFormat::CornerPx, {xmin, ymin, xmax, ymax}};
    }
};

struct ImageSize {
    double width = 0.0;
    double height = 0.0;
};

/// Exact algebraic conversion between formats. CenterNorm endpoints scale
/// by image_size; the two pixel formats ignore it.
BBox convert_box(const BBox& box, BoxFormat target, ImageSize image_size);

/// Intersection over union in [0,1]. Both boxes are reduced to corner
/// form (CenterNorm on the unit square, which leaves the ratio
/// unchanged). A zero-area union gives 0 unless the boxes are identical.
double iou(const BBox& a, const BBox& b);

} // namespace yodet
