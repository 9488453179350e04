#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace yodet {

/// Interleaved 8-bit RGB raster. Grayscale sources are promoted to three
/// channels on read.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels; // width*height*3, row-major RGB

    uint8_t* at(int x, int y) { return pixels.data() + (static_cast<size_t>(y) * width + x) * 3; }
    const uint8_t* at(int x, int y) const {
        return pixels.data() + (static_cast<size_t>(y) * width + x) * 3;
    }
};

/// Read a binary PPM (P6) or PGM (P5) file with 8-bit samples.
/// Throws IoError on anything undecodable.
Image read_image(const std::string& path);

/// Write a binary PPM (P6).
void write_ppm(const Image& image, const std::string& path);

using Rgb = std::array<uint8_t, 3>;

/// Stable per-class annotation color.
Rgb class_color(int class_id);

void draw_rect(Image& image, int xmin, int ymin, int xmax, int ymax, Rgb color,
               int thickness = 2);

/// 5x7 bitmap text with a filled background bar. Lowercase renders as
/// uppercase.
void draw_label(Image& image, int x, int y, const std::string& text, Rgb color);

} // namespace yodet
