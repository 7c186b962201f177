#pragma once

#include <cstdint>
#include <vector>

#include "mediaseal/errors.hpp"

namespace mediaseal {

// Row-major, channel-interleaved, 8 bits per sample.
struct PixelImage {
    uint32_t width = 0;
    uint32_t height = 0;
    uint8_t channels = 1; // 1 or 3
    std::vector<uint8_t> samples;

    bool operator==(const PixelImage&) const = default;

    size_t sample_count() const {
        return static_cast<size_t>(width) * height * channels;
    }

    uint8_t at(uint32_t x, uint32_t y, uint8_t c = 0) const {
        return samples[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    uint8_t& at(uint32_t x, uint32_t y, uint8_t c = 0) {
        return samples[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    void check() const {
        if (width < 1 || height < 1 || width > 65535 || height > 65535)
            throw InvariantViolation("image dimensions out of range");
        if (channels != 1 && channels != 3)
            throw InvariantViolation("channels must be 1 or 3");
        if (samples.size() != sample_count())
            throw InvariantViolation("sample count mismatch");
    }

    static PixelImage make(uint32_t w, uint32_t h, uint8_t ch, uint8_t fill = 0) {
        PixelImage img;
        img.width = w;
        img.height = h;
        img.channels = ch;
        img.samples.assign(static_cast<size_t>(w) * h * ch, fill);
        img.check();
        return img;
    }
};

// BT.601 luma, as a float plane. For single-channel images this is the plane itself.
std::vector<float> luma_plane(const PixelImage& img);

// Adds the given per-pixel delta to every channel, clamped to [0,255].
void add_luma_delta(PixelImage& img, const std::vector<float>& delta);

} // namespace mediaseal
