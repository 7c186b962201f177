#pragma once

#include <cstdint>
#include <string>

#include "mediaseal/image.hpp"

namespace mediaseal {

enum class FingerprintAlgorithm { BlockMean, DctWave };

std::string to_string(FingerprintAlgorithm a);
FingerprintAlgorithm fingerprint_algorithm_from_string(const std::string& s);

// 64 threshold bits in raster order, first cell at the most significant bit so
// the hex form reads left-to-right. Algorithms never compare across families.
struct Fingerprint {
    FingerprintAlgorithm algorithm = FingerprintAlgorithm::BlockMean;
    uint64_t bits = 0;

    bool operator==(const Fingerprint&) const = default;

    std::string to_text() const; // "<algorithm>:<16 lowercase hex digits>"
    static Fingerprint from_text(const std::string& text);
};

// block_mean: luma box-averaged to 8x8, each cell thresholded at the median of
// the 64 means (>= median -> 1). dct_wave: luma box-averaged to 32x32, 2-D
// DCT-II, coefficients (1,1)..(8,8) with (1,1) replaced by (0,1), thresholded
// at their median. Deterministic; throws ImageTooSmall below 8x8.
Fingerprint compute_fingerprint(const PixelImage& image, FingerprintAlgorithm algorithm);

// Popcount of XOR; throws AlgorithmMismatch across families.
int hamming_distance(const Fingerprint& a, const Fingerprint& b);

struct CollisionResult {
    PixelImage image;
    int distance = 0;       // achieved Hamming distance to the target
    uint64_t iterations = 0; // perturbation steps spent
};

// Greedy per-cell luma perturbation flipping disagreeing bits until the
// fingerprint equals target or the budget runs out; best effort either way.
CollisionResult craft_collision(const Fingerprint& target, const PixelImage& base,
                                uint64_t budget);

} // namespace mediaseal
