#include "mediaseal/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mediaseal/rng.hpp"

namespace mediaseal {

namespace {

constexpr uint32_t kGlyphSize = 8;
constexpr uint32_t kFrame = 2;
constexpr uint32_t kMinRun = 12; // shortest possible mark width (one glyph + frame)

// High-contrast checker by absolute pixel parity; the extreme values make the
// mark trivially machine-detectable, which is the point.
uint8_t checker(uint32_t x, uint32_t y) { return ((x + y) & 1) ? 0 : 255; }

// A small tolerance lets the mark survive gentle post-processing such as an
// imperceptible watermark embedded after stamping (bounded at +/-4 per sample).
constexpr int kCheckerTolerance = 6;

bool is_checker_pixel(const PixelImage& img, uint32_t x, uint32_t y) {
    const int want = checker(x, y);
    for (uint8_t c = 0; c < img.channels; ++c)
        if (std::abs(int(img.at(x, y, c)) - want) > kCheckerTolerance) return false;
    return true;
}

// Deterministic 8x8 bit pattern per character.
std::array<uint8_t, 8> glyph_rows(char ch) {
    const uint64_t bits = prf64(0x676c797068ull, 0x6d61726bull,
                                static_cast<uint64_t>(static_cast<unsigned char>(ch)));
    std::array<uint8_t, 8> rows{};
    for (int r = 0; r < 8; ++r) rows[r] = static_cast<uint8_t>(bits >> (8 * r));
    return rows;
}

void paint(PixelImage& img, uint32_t x, uint32_t y, uint8_t value) {
    for (uint8_t c = 0; c < img.channels; ++c) img.at(x, y, c) = value;
}

} // namespace

PixelImage apply_perceptible_mark(const PixelImage& image, const std::string& text) {
    image.check();
    if (text.empty()) throw BadTransformParams("perceptible mark text must be non-empty");
    const uint32_t mark_w = static_cast<uint32_t>(text.size()) * kGlyphSize + 2 * kFrame;
    const uint32_t mark_h = kGlyphSize + 2 * kFrame;
    if (image.width < mark_w || image.height < mark_h)
        throw ImageTooSmall("image cannot hold the perceptible mark");

    PixelImage out = image;
    const uint32_t x0 = image.width - mark_w;
    const uint32_t y0 = image.height - mark_h;

    for (uint32_t y = y0; y < image.height; ++y)
        for (uint32_t x = x0; x < image.width; ++x)
            paint(out, x, y, checker(x, y));

    for (size_t i = 0; i < text.size(); ++i) {
        const auto rows = glyph_rows(text[i]);
        const uint32_t gx = x0 + kFrame + static_cast<uint32_t>(i) * kGlyphSize;
        const uint32_t gy = y0 + kFrame;
        for (uint32_t r = 0; r < kGlyphSize; ++r)
            for (uint32_t b = 0; b < kGlyphSize; ++b)
                paint(out, gx + b, gy + r, (rows[r] >> b) & 1 ? 255 : 0);
    }
    return out;
}

bool has_perceptible_mark(const PixelImage& image) {
    image.check();
    const uint32_t y = image.height - 1;
    uint32_t run = 0;
    for (uint32_t x = image.width; x-- > 0 && run < kMinRun;) {
        if (!is_checker_pixel(image, x, y)) break;
        ++run;
    }
    return run >= kMinRun;
}

PixelImage remove_perceptible_mark(const PixelImage& image) {
    image.check();
    if (!has_perceptible_mark(image)) return image;

    // Measure the frame extent along the bottom and right edges.
    uint32_t mark_w = 0;
    for (uint32_t x = image.width; x-- > 0;) {
        if (!is_checker_pixel(image, x, image.height - 1)) break;
        ++mark_w;
    }
    uint32_t mark_h = 0;
    for (uint32_t y = image.height; y-- > 0;) {
        if (!is_checker_pixel(image, image.width - 1, y)) break;
        ++mark_h;
    }
    mark_w = std::min(mark_w, image.width);
    mark_h = std::min(mark_h, image.height);

    PixelImage out = image;
    const uint32_t x0 = image.width - mark_w;
    const uint32_t y0 = image.height - mark_h;

    // Onion-peel inpainting: repeatedly fill any still-marked pixel that has a
    // filled (or untouched) neighbor with the mean of those neighbors.
    std::vector<uint8_t> hole(static_cast<size_t>(mark_w) * mark_h, 1);
    auto hole_at = [&](uint32_t x, uint32_t y) -> uint8_t& {
        return hole[static_cast<size_t>(y - y0) * mark_w + (x - x0)];
    };
    auto is_hole = [&](uint32_t x, uint32_t y) {
        return x >= x0 && y >= y0 && hole_at(x, y) != 0;
    };

    bool progressed = true;
    while (progressed) {
        progressed = false;
        std::vector<std::pair<uint32_t, uint32_t>> filled_now;
        for (uint32_t y = y0; y < image.height; ++y) {
            for (uint32_t x = x0; x < image.width; ++x) {
                if (!is_hole(x, y)) continue;
                std::array<uint32_t, 3> sum{};
                uint32_t n = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int64_t nx = static_cast<int64_t>(x) + dx;
                        const int64_t ny = static_cast<int64_t>(y) + dy;
                        if (nx < 0 || ny < 0 || nx >= image.width || ny >= image.height)
                            continue;
                        const uint32_t ux = static_cast<uint32_t>(nx);
                        const uint32_t uy = static_cast<uint32_t>(ny);
                        if (is_hole(ux, uy)) continue;
                        for (uint8_t c = 0; c < image.channels; ++c)
                            sum[c] += out.at(ux, uy, c);
                        ++n;
                    }
                }
                if (n == 0) continue;
                for (uint8_t c = 0; c < image.channels; ++c)
                    out.at(x, y, c) = static_cast<uint8_t>((sum[c] + n / 2) / n);
                filled_now.emplace_back(x, y);
                progressed = true;
            }
        }
        for (const auto& [x, y] : filled_now) hole_at(x, y) = 0;
    }
    // Mark covering the whole image: no boundary to grow from.
    for (uint32_t y = y0; y < image.height; ++y)
        for (uint32_t x = x0; x < image.width; ++x)
            if (hole_at(x, y)) paint(out, x, y, 128);
    return out;
}

} // namespace mediaseal
