#include "yodet/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "yodet/errors.hpp"

namespace yodet {

namespace {

// Skips whitespace and '#' comments between PNM header tokens.
int read_pnm_int(std::istream& is, const std::string& path) {
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = is.get();
        } else if (std::isspace(c)) {
            c = is.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw IoError("malformed PNM header in " + path);
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30)
            throw IoError("absurd PNM header value in " + path);
        c = is.get();
    }
    return value;
}

} // namespace

Image read_image(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open image file: " + path);

    char magic[2] = {0, 0};
    is.read(magic, 2);
    const bool color = magic[0] == 'P' && magic[1] == '6';
    const bool gray = magic[0] == 'P' && magic[1] == '5';
    if (!color && !gray)
        throw IoError("unsupported image format in " + path + " (need binary PPM/PGM)");

    const int width = read_pnm_int(is, path);
    const int height = read_pnm_int(is, path);
    const int maxval = read_pnm_int(is, path);
    if (width < 1 || height < 1)
        throw IoError("empty raster in " + path);
    if (maxval != 255)
        throw IoError("only 8-bit samples supported, " + path + " has maxval " +
                      std::to_string(maxval));
    // The single whitespace byte after maxval was consumed by read_pnm_int,
    // so the stream now sits at the start of the raster data.
    const size_t samples = static_cast<size_t>(width) * height * (color ? 3 : 1);
    std::vector<uint8_t> raw(samples);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(samples));
    if (static_cast<size_t>(is.gcount()) != samples)
        throw IoError("truncated raster data in " + path);

    Image img;
    img.width = width;
    img.height = height;
    if (color) {
        img.pixels = std::move(raw);
    } else {
        img.pixels.resize(samples * 3);
        for (size_t i = 0; i < samples; ++i) {
            img.pixels[i * 3 + 0] = raw[i];
            img.pixels[i * 3 + 1] = raw[i];
            img.pixels[i * 3 + 2] = raw[i];
        }
    }
    return img;
}

void write_ppm(const Image& image, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot write image file: " + path);
    os << "P6\n" << image.width << " " << image.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.pixels.data()),
             static_cast<std::streamsize>(image.pixels.size()));
    if (!os)
        throw IoError("failed writing image file: " + path);
}

Rgb class_color(int class_id) {
    // Knuth multiplicative hash; bright-ish channels so boxes stay visible.
    uint32_t h = static_cast<uint32_t>(class_id) * 2654435761u;
    auto chan = [&](int shift) { return static_cast<uint8_t>(64 + ((h >> shift) & 0xBF)); };
    return {chan(0), chan(10), chan(20)};
}

namespace {

void put_pixel(Image& image, int x, int y, Rgb color) {
    if (x < 0 || y < 0 || x >= image.width || y >= image.height)
        return;
    uint8_t* p = image.at(x, y);
    p[0] = color[0];
    p[1] = color[1];
    p[2] = color[2];
}

void fill_rect(Image& image, int x0, int y0, int x1, int y1, Rgb color) {
    for (int y = std::max(0, y0); y < std::min(image.height, y1); ++y)
        for (int x = std::max(0, x0); x < std::min(image.width, x1); ++x)
            put_pixel(image, x, y, color);
}

// 5x7 glyphs, one byte per column, bit 0 = top row.
struct Glyph {
    char ch;
    uint8_t col[5];
};

constexpr Glyph kFont[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00}}, {'%', {0x23, 0x13, 0x08, 0x64, 0x62}},
    {'(', {0x00, 0x1C, 0x22, 0x41, 0x00}}, {')', {0x00, 0x41, 0x22, 0x1C, 0x00}},
    {'-', {0x08, 0x08, 0x08, 0x08, 0x08}}, {'.', {0x00, 0x60, 0x60, 0x00, 0x00}},
    {'/', {0x20, 0x10, 0x08, 0x04, 0x02}}, {'0', {0x3E, 0x51, 0x49, 0x45, 0x3E}},
    {'1', {0x00, 0x42, 0x7F, 0x40, 0x00}}, {'2', {0x42, 0x61, 0x51, 0x49, 0x46}},
    {'3', {0x21, 0x41, 0x45, 0x4B, 0x31}}, {'4', {0x18, 0x14, 0x12, 0x7F, 0x10}},
    {'5', {0x27, 0x45, 0x45, 0x45, 0x39}}, {'6', {0x3C, 0x4A, 0x49, 0x49, 0x30}},
    {'7', {0x01, 0x71, 0x09, 0x05, 0x03}}, {'8', {0x36, 0x49, 0x49, 0x49, 0x36}},
    {'9', {0x06, 0x49, 0x49, 0x29, 0x1E}}, {':', {0x00, 0x36, 0x36, 0x00, 0x00}},
    {'A', {0x7E, 0x11, 0x11, 0x11, 0x7E}}, {'B', {0x7F, 0x49, 0x49, 0x49, 0x36}},
    {'C', {0x3E, 0x41, 0x41, 0x41, 0x22}}, {'D', {0x7F, 0x41, 0x41, 0x22, 0x1C}},
    {'E', {0x7F, 0x49, 0x49, 0x49, 0x41}}, {'F', {0x7F, 0x09, 0x09, 0x09, 0x01}},
    {'G', {0x3E, 0x41, 0x49, 0x49, 0x3A}}, {'H', {0x7F, 0x08, 0x08, 0x08, 0x7F}},
    {'I', {0x00, 0x41, 0x7F, 0x41, 0x00}}, {'J', {0x20, 0x40, 0x41, 0x3F, 0x01}},
    {'K', {0x7F, 0x08, 0x14, 0x22, 0x41}}, {'L', {0x7F, 0x40, 0x40, 0x40, 0x40}},
    {'M', {0x7F, 0x02, 0x0C, 0x02, 0x7F}}, {'N', {0x7F, 0x04, 0x08, 0x10, 0x7F}},
    {'O', {0x3E, 0x41, 0x41, 0x41, 0x3E}}, {'P', {0x7F, 0x09, 0x09, 0x09, 0x06}},
    {'Q', {0x3E, 0x41, 0x51, 0x21, 0x5E}}, {'R', {0x7F, 0x09, 0x19, 0x29, 0x46}},
    {'S', {0x46, 0x49, 0x49, 0x49, 0x31}}, {'T', {0x01, 0x01, 0x7F, 0x01, 0x01}},
    {'U', {0x3F, 0x40, 0x40, 0x40, 0x3F}}, {'V', {0x1F, 0x20, 0x40, 0x20, 0x1F}},
    {'W', {0x7F, 0x20, 0x18, 0x20, 0x7F}}, {'X', {0x63, 0x14, 0x08, 0x14, 0x63}},
    {'Y', {0x07, 0x08, 0x70, 0x08, 0x07}}, {'Z', {0x61, 0x51, 0x49, 0x45, 0x43}},
    {'_', {0x40, 0x40, 0x40, 0x40, 0x40}},
};

const uint8_t* glyph_for(char ch) {
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (const Glyph& g : kFont) {
        if (g.ch == up)
            return g.col;
    }
    static const uint8_t box[5] = {0x7F, 0x41, 0x41, 0x41, 0x7F};
    return box;
}

} // namespace

void draw_rect(Image& image, int xmin, int ymin, int xmax, int ymax, Rgb color, int thickness) {
    for (int t = 0; t < thickness; ++t) {
        for (int x = xmin; x <= xmax; ++x) {
            put_pixel(image, x, ymin + t, color);
            put_pixel(image, x, ymax - t, color);
        }
        for (int y = ymin; y <= ymax; ++y) {
            put_pixel(image, xmin + t, y, color);
            put_pixel(image, xmax - t, y, color);
        }
    }
}

void draw_label(Image& image, int x, int y, const std::string& text, Rgb color) {
    const int w = static_cast<int>(text.size()) * 6 + 2;
    const int h = 9;
    fill_rect(image, x, y, x + w, y + h, color);
    const Rgb ink =
        (color[0] * 299 + color[1] * 587 + color[2] * 114) / 1000 > 127 ? Rgb{0, 0, 0}
                                                                        : Rgb{255, 255, 255};
    int cx = x + 1;
    for (char ch : text) {
        const uint8_t* cols = glyph_for(ch);
        for (int col = 0; col < 5; ++col)
            for (int row = 0; row < 7; ++row)
                if (cols[col] >> row & 1)
                    put_pixel(image, cx + col, y + 1 + row, ink);
        cx += 6;
    }
}

} // namespace yodet
