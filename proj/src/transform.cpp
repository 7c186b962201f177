#include "mediaseal/transform.hpp"

#include <algorithm>
#include <cmath>

#include "mediaseal/dct.hpp"
#include "mediaseal/rng.hpp"

namespace mediaseal {

namespace {

uint8_t clamp_byte(double v) {
    return static_cast<uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : std::lround(v)));
}

} // namespace

PixelImage add_gaussian_noise(const PixelImage& img, double sigma, uint64_t seed) {
    PixelImage out = img;
    Rng rng(seed);
    for (auto& s : out.samples)
        s = clamp_byte(s + sigma * rng.next_gaussian());
    return out;
}

PixelImage rescale_image(const PixelImage& img, double factor) {
    if (!(factor > 0)) throw BadTransformParams("rescale factor must be positive");
    const uint32_t nw = static_cast<uint32_t>(std::lround(img.width * factor));
    const uint32_t nh = static_cast<uint32_t>(std::lround(img.height * factor));
    if (nw < 1 || nh < 1) throw BadTransformParams("rescale result smaller than 1x1");
    PixelImage out = PixelImage::make(nw, nh, img.channels);
    const double sx = static_cast<double>(img.width) / nw;
    const double sy = static_cast<double>(img.height) / nh;
    for (uint32_t y = 0; y < nh; ++y) {
        const double fy = std::min((y + 0.5) * sy - 0.5, img.height - 1.0);
        const double cy = std::max(fy, 0.0);
        const uint32_t y0 = static_cast<uint32_t>(cy);
        const uint32_t y1 = std::min(y0 + 1, img.height - 1);
        const double wy = cy - y0;
        for (uint32_t x = 0; x < nw; ++x) {
            const double fx = std::min((x + 0.5) * sx - 0.5, img.width - 1.0);
            const double cx = std::max(fx, 0.0);
            const uint32_t x0 = static_cast<uint32_t>(cx);
            const uint32_t x1 = std::min(x0 + 1, img.width - 1);
            const double wx = cx - x0;
            for (uint8_t c = 0; c < img.channels; ++c) {
                const double v = (1 - wy) * ((1 - wx) * img.at(x0, y0, c) + wx * img.at(x1, y0, c)) +
                                 wy * ((1 - wx) * img.at(x0, y1, c) + wx * img.at(x1, y1, c));
                out.at(x, y, c) = clamp_byte(v);
            }
        }
    }
    return out;
}

PixelImage quantize_image(const PixelImage& img, uint32_t step) {
    if (step < 1) throw BadTransformParams("quantize step must be >= 1");
    PixelImage out = img;
    // Pad to a multiple of 8 by edge replication, quantize DCT coefficients
    // blockwise, then crop back.
    const uint32_t pw = (img.width + 7) / 8 * 8;
    const uint32_t ph = (img.height + 7) / 8 * 8;
    for (uint8_t c = 0; c < img.channels; ++c) {
        std::vector<float> plane(static_cast<size_t>(pw) * ph);
        for (uint32_t y = 0; y < ph; ++y)
            for (uint32_t x = 0; x < pw; ++x)
                plane[static_cast<size_t>(y) * pw + x] =
                    img.at(std::min(x, img.width - 1), std::min(y, img.height - 1), c);
        float block[64], coeffs[64];
        for (uint32_t by = 0; by < ph; by += 8)
            for (uint32_t bx = 0; bx < pw; bx += 8) {
                for (int y = 0; y < 8; ++y)
                    for (int x = 0; x < 8; ++x)
                        block[y * 8 + x] = plane[static_cast<size_t>(by + y) * pw + bx + x];
                dct8x8_forward(block, coeffs);
                for (int i = 0; i < 64; ++i)
                    coeffs[i] = static_cast<float>(std::lround(coeffs[i] / step)) * step;
                dct8x8_inverse(coeffs, block);
                for (int y = 0; y < 8; ++y)
                    for (int x = 0; x < 8; ++x)
                        plane[static_cast<size_t>(by + y) * pw + bx + x] = block[y * 8 + x];
            }
        for (uint32_t y = 0; y < img.height; ++y)
            for (uint32_t x = 0; x < img.width; ++x)
                out.at(x, y, c) = clamp_byte(plane[static_cast<size_t>(y) * pw + x]);
    }
    return out;
}

MediaAsset apply_transformation(const MediaAsset& asset, const Transformation& t) {
    MediaAsset out = asset;
    switch (t.kind) {
    case TransformKind::Identity:
        return out;
    case TransformKind::StripMetadata: {
        out.set_manifest_segment(std::nullopt);
        out.set_insecure_meta({});
        return out;
    }
    case TransformKind::GaussianNoise:
        out.set_image(add_gaussian_noise(asset.image(), t.sigma, t.seed));
        return out;
    case TransformKind::Rescale:
        out.set_image(rescale_image(asset.image(), t.factor));
        return out;
    case TransformKind::Crop: {
        const PixelImage& img = asset.image();
        if (t.left + t.right >= img.width || t.top + t.bottom >= img.height)
            throw BadTransformParams("crop bounds exceed image");
        const uint32_t nw = img.width - t.left - t.right;
        const uint32_t nh = img.height - t.top - t.bottom;
        PixelImage cropped = PixelImage::make(nw, nh, img.channels);
        for (uint32_t y = 0; y < nh; ++y)
            for (uint32_t x = 0; x < nw; ++x)
                for (uint8_t c = 0; c < img.channels; ++c)
                    cropped.at(x, y, c) = img.at(x + t.left, y + t.top, c);
        out.set_image(std::move(cropped));
        return out;
    }
    case TransformKind::Quantize:
        out.set_image(quantize_image(asset.image(), t.step));
        return out;
    case TransformKind::PixelFlip: {
        if (t.count < 1) throw BadTransformParams("pixel_flip count must be >= 1");
        PixelImage img = asset.image();
        Rng rng(t.seed);
        for (uint32_t i = 0; i < t.count; ++i) {
            const size_t idx = rng.next_below(img.samples.size());
            img.samples[idx] = static_cast<uint8_t>(~img.samples[idx]);
        }
        out.set_image(std::move(img));
        return out;
    }
    }
    throw BadTransformParams("unknown transformation kind");
}

} // namespace mediaseal
