#include "mediaseal/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mediaseal/dct.hpp"
#include "mediaseal/hex.hpp"

namespace mediaseal {

namespace {

// Box-average the luma plane onto an n x n grid. Every cell covers at least
// one source pixel, so images down to 8x8 (and odd sizes) stay well defined.
std::vector<float> grid_means(const PixelImage& image, size_t n) {
    const auto luma = luma_plane(image);
    const size_t w = image.width, h = image.height;
    std::vector<float> means(n * n, 0.0f);
    for (size_t by = 0; by < n; ++by) {
        const size_t y0 = by * h / n;
        const size_t y1 = std::max(y0 + 1, (by + 1) * h / n);
        for (size_t bx = 0; bx < n; ++bx) {
            const size_t x0 = bx * w / n;
            const size_t x1 = std::max(x0 + 1, (bx + 1) * w / n);
            double sum = 0.0;
            for (size_t y = y0; y < y1; ++y)
                for (size_t x = x0; x < x1; ++x) sum += luma[y * w + x];
            means[by * n + bx] =
                static_cast<float>(sum / (static_cast<double>(y1 - y0) * (x1 - x0)));
        }
    }
    return means;
}

float median64(std::array<float, 64> values) {
    std::sort(values.begin(), values.end());
    return (values[31] + values[32]) / 2.0f;
}

uint64_t threshold_bits(const std::array<float, 64>& values) {
    const float med = median64(values);
    uint64_t bits = 0;
    for (size_t i = 0; i < 64; ++i)
        if (values[i] >= med) bits |= 1ull << (63 - i);
    return bits;
}

// The 64 measurements behind each algorithm's bits, raster order.
std::array<float, 64> measurements(const PixelImage& image, FingerprintAlgorithm algorithm) {
    std::array<float, 64> vals{};
    if (algorithm == FingerprintAlgorithm::BlockMean) {
        const auto means = grid_means(image, 8);
        std::copy(means.begin(), means.end(), vals.begin());
        return vals;
    }
    const auto coeffs = dct2d_forward(grid_means(image, 32), 32);
    for (size_t u = 1; u <= 8; ++u)
        for (size_t v = 1; v <= 8; ++v) {
            const size_t src = (u == 1 && v == 1) ? (0 * 32 + 1) : (u * 32 + v);
            vals[(u - 1) * 8 + (v - 1)] = coeffs[src];
        }
    return vals;
}

} // namespace

std::string to_string(FingerprintAlgorithm a) {
    return a == FingerprintAlgorithm::BlockMean ? "block_mean" : "dct_wave";
}

FingerprintAlgorithm fingerprint_algorithm_from_string(const std::string& s) {
    if (s == "block_mean") return FingerprintAlgorithm::BlockMean;
    if (s == "dct_wave") return FingerprintAlgorithm::DctWave;
    throw Error("unknown fingerprint algorithm: " + s);
}

std::string Fingerprint::to_text() const {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(bits));
    return to_string(algorithm) + ":" + hex;
}

Fingerprint Fingerprint::from_text(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("fingerprint text missing ':'");
    Fingerprint fp;
    fp.algorithm = fingerprint_algorithm_from_string(text.substr(0, colon));
    const std::string hex = text.substr(colon + 1);
    const auto bytes = from_hex(hex);
    if (hex.size() != 16 || !bytes) throw Error("fingerprint needs 16 lowercase hex digits");
    fp.bits = 0;
    for (uint8_t b : *bytes) fp.bits = (fp.bits << 8) | b;
    return fp;
}

Fingerprint compute_fingerprint(const PixelImage& image, FingerprintAlgorithm algorithm) {
    image.check();
    if (image.width < 8 || image.height < 8)
        throw ImageTooSmall("fingerprints need at least 8x8 pixels");
    return {algorithm, threshold_bits(measurements(image, algorithm))};
}

int hamming_distance(const Fingerprint& a, const Fingerprint& b) {
    if (a.algorithm != b.algorithm)
        throw AlgorithmMismatch("cannot compare fingerprints across algorithms");
    return std::popcount(a.bits ^ b.bits);
}

namespace {

// Nudge the luma behind measurement `bit` by +-1 per sample. For block_mean
// that is the grid cell itself; for dct_wave, the sign pattern of the target
// basis function, which moves the coefficient monotonically.
void perturb(PixelImage& img, FingerprintAlgorithm algorithm, size_t bit, int direction) {
    const size_t w = img.width, h = img.height;
    auto bump = [&](size_t x, size_t y, int d) {
        for (uint8_t c = 0; c < img.channels; ++c) {
            const int v = std::clamp(img.at(static_cast<uint32_t>(x),
                                            static_cast<uint32_t>(y), c) + d, 0, 255);
            img.at(static_cast<uint32_t>(x), static_cast<uint32_t>(y), c) =
                static_cast<uint8_t>(v);
        }
    };
    if (algorithm == FingerprintAlgorithm::BlockMean) {
        const size_t by = bit / 8, bx = bit % 8;
        const size_t y0 = by * h / 8, y1 = std::max(y0 + 1, (by + 1) * h / 8);
        const size_t x0 = bx * w / 8, x1 = std::max(x0 + 1, (bx + 1) * w / 8);
        for (size_t y = y0; y < y1; ++y)
            for (size_t x = x0; x < x1; ++x) bump(x, y, direction);
        return;
    }
    size_t u = bit / 8 + 1, v = bit % 8 + 1;
    if (u == 1 && v == 1) u = 0; // the substituted (0,1) coefficient
    constexpr double pi = std::numbers::pi;
    for (size_t y = 0; y < h; ++y) {
        const size_t gy = std::min<size_t>(y * 32 / h, 31);
        const double cy = std::cos((2.0 * gy + 1.0) * u * pi / 64.0);
        for (size_t x = 0; x < w; ++x) {
            const size_t gx = std::min<size_t>(x * 32 / w, 31);
            const double basis = cy * std::cos((2.0 * gx + 1.0) * v * pi / 64.0);
            if (basis > 1e-9) bump(x, y, direction);
            else if (basis < -1e-9) bump(x, y, -direction);
        }
    }
}

} // namespace

CollisionResult craft_collision(const Fingerprint& target, const PixelImage& base,
                                uint64_t budget) {
    CollisionResult best{base, hamming_distance(compute_fingerprint(base, target.algorithm),
                                                target),
                         0};
    if (best.distance == 0) return best;

    PixelImage current = base;
    uint64_t spent = 0;
    while (spent < budget) {
        const auto vals = measurements(current, target.algorithm);
        const uint64_t bits = threshold_bits(vals);
        const uint64_t diff = bits ^ target.bits;
        const int distance = std::popcount(diff);
        if (distance < best.distance) {
            best.image = current;
            best.distance = distance;
            best.iterations = spent;
        }
        if (distance == 0) break;
        // Work on the disagreeing measurement farthest from flipping cheaply:
        // the one closest to the median crosses with the fewest nudges.
        const float med = median64(vals);
        size_t pick = 64;
        float pick_gap = 0.0f;
        for (size_t i = 0; i < 64; ++i) {
            if (!((diff >> (63 - i)) & 1)) continue;
            const float gap = std::fabs(vals[i] - med);
            if (pick == 64 || gap < pick_gap) {
                pick = i;
                pick_gap = gap;
            }
        }
        const bool want_one = (target.bits >> (63 - pick)) & 1;
        perturb(current, target.algorithm, pick, want_one ? 1 : -1);
        ++spent;
    }
    const int final_distance =
        hamming_distance(compute_fingerprint(current, target.algorithm), target);
    if (final_distance <= best.distance) {
        best.image = current;
        best.distance = final_distance;
        best.iterations = spent;
    }
    return best;
}

} // namespace mediaseal
