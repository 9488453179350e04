#include "yodet/geometry.hpp"

#include <algorithm>

#include "yodet/errors.hpp"

namespace yodet {

const char* to_string(BoxFormat f) {
    switch (f) {
    case BoxFormat::CenterNorm: return "center_norm";
    case BoxFormat::TopLeftPx: return "topleft_px";
    case BoxFormat::CornerPx: return "corner_px";
    }
    return "?";
}

namespace {

BBox to_topleft(const BBox& box, ImageSize sz) {
    const auto& c = box.coords;
    switch (box.format) {
    case BoxFormat::TopLeftPx:
        return box;
    case BoxFormat::CenterNorm:
        return BBox::topleft_px((c[0] - c[2] / 2.0) * sz.width, (c[1] - c[3] / 2.0) * sz.height,
                                c[2] * sz.width, c[3] * sz.height);
    case BoxFormat::CornerPx:
        return BBox::topleft_px(c[0], c[1], c[2] - c[0], c[3] - c[1]);
    }
    throw ShapeError("convert_box: unknown source format tag");
}

} // namespace

BBox convert_box(const BBox& box, BoxFormat target, ImageSize image_size) {
    if (box.format == target)
        return box;
    const BBox tl = to_topleft(box, image_size);
    const auto& c = tl.coords;
    switch (target) {
    case BoxFormat::TopLeftPx:
        return tl;
    case BoxFormat::CornerPx:
        return BBox::corner_px(c[0], c[1], c[0] + c[2], c[1] + c[3]);
    case BoxFormat::CenterNorm:
        if (image_size.width <= 0.0 || image_size.height <= 0.0)
            throw ShapeError("convert_box: CenterNorm conversion needs a positive image size");
        return BBox::center_norm((c[0] + c[2] / 2.0) / image_size.width,
                                 (c[1] + c[3] / 2.0) / image_size.height,
                                 c[2] / image_size.width, c[3] / image_size.height);
    }
    throw ShapeError("convert_box: unknown target format tag");
}

double iou(const BBox& a, const BBox& b) {
    // IoU is invariant under the axis scaling that maps CenterNorm onto
    // pixels, so the unit square stands in for the image.
    const ImageSize unit{1.0, 1.0};
    const BBox ca = convert_box(a, BoxFormat::CornerPx, unit);
    const BBox cb = convert_box(b, BoxFormat::CornerPx, unit);

    const double ix = std::min(ca.coords[2], cb.coords[2]) - std::max(ca.coords[0], cb.coords[0]);
    const double iy = std::min(ca.coords[3], cb.coords[3]) - std::max(ca.coords[1], cb.coords[1]);
    const double inter = (ix > 0.0 && iy > 0.0) ? ix * iy : 0.0;

    const double area_a = (ca.coords[2] - ca.coords[0]) * (ca.coords[3] - ca.coords[1]);
    const double area_b = (cb.coords[2] - cb.coords[0]) * (cb.coords[3] - cb.coords[1]);
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0)
        return ca.coords == cb.coords ? 1.0 : 0.0;
    return inter / uni;
}

} // namespace yodet
