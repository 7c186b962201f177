#pragma once

#include <cstdint>
#include <string>

#include "mediaseal/container.hpp"

namespace mediaseal {

enum class TransformKind {
    GaussianNoise, // sigma
    Rescale,       // factor
    Crop,          // pixels removed per side
    Quantize,      // blockwise DCT coefficient quantization step
    PixelFlip,     // count of samples complemented
    StripMetadata,
    Identity,
};

struct Transformation {
    TransformKind kind = TransformKind::Identity;
    double sigma = 0.0;
    double factor = 1.0;
    uint32_t left = 0, top = 0, right = 0, bottom = 0;
    uint32_t step = 1;
    uint32_t count = 1;
    uint64_t seed = 0;

    static Transformation gaussian_noise(double sigma, uint64_t seed) {
        Transformation t;
        t.kind = TransformKind::GaussianNoise;
        t.sigma = sigma;
        t.seed = seed;
        return t;
    }
    static Transformation rescale(double factor) {
        Transformation t;
        t.kind = TransformKind::Rescale;
        t.factor = factor;
        return t;
    }
    static Transformation crop(uint32_t l, uint32_t tp, uint32_t r, uint32_t b) {
        Transformation t;
        t.kind = TransformKind::Crop;
        t.left = l;
        t.top = tp;
        t.right = r;
        t.bottom = b;
        return t;
    }
    static Transformation quantize(uint32_t step) {
        Transformation t;
        t.kind = TransformKind::Quantize;
        t.step = step;
        return t;
    }
    static Transformation pixel_flip(uint32_t count, uint64_t seed) {
        Transformation t;
        t.kind = TransformKind::PixelFlip;
        t.count = count;
        t.seed = seed;
        return t;
    }
    static Transformation strip_metadata() {
        Transformation t;
        t.kind = TransformKind::StripMetadata;
        return t;
    }
    static Transformation identity() { return {}; }
};

// Pure: never mutates the input. Pixel transforms keep the manifest and META
// segments attached so downstream hash mismatches are observable.
MediaAsset apply_transformation(const MediaAsset& asset, const Transformation& t);

// Pixel-level helpers shared with the watermark decoder and attack harness.
PixelImage rescale_image(const PixelImage& img, double factor);
PixelImage add_gaussian_noise(const PixelImage& img, double sigma, uint64_t seed);
PixelImage quantize_image(const PixelImage& img, uint32_t step);

} // namespace mediaseal
