#include "mediaseal/oracle_attack.hpp"

#include <algorithm>
#include <cmath>

#include "mediaseal/rate_limiter.hpp"
#include "mediaseal/rng.hpp"
#include "mediaseal/transform.hpp"

namespace mediaseal {

namespace {

PixelImage attack_scene(uint64_t seed) {
    Rng rng(seed);
    const double fx = 1.0 + rng.next_double() * 3.0;
    const double fy = 1.0 + rng.next_double() * 3.0;
    PixelImage img = PixelImage::make(64, 64, 1);
    for (uint32_t y = 0; y < 64; ++y)
        for (uint32_t x = 0; x < 64; ++x) {
            const double v = 120.0 + 55.0 * std::sin(fx * x / 10.0) +
                             45.0 * std::cos(fy * y / 9.0) + rng.next_double() * 6.0;
            img.at(x, y) = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    return img;
}

double mean_abs_diff(const PixelImage& a, const PixelImage& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.samples.size(); ++i)
        sum += std::abs(int(a.samples[i]) - int(b.samples[i]));
    return sum / double(a.samples.size());
}

PixelImage noise_block(const PixelImage& img, uint32_t bx, uint32_t by, double sigma,
                       Rng& rng) {
    PixelImage out = img;
    for (uint32_t y = by * 8; y < std::min(img.height, (by + 1) * 8); ++y)
        for (uint32_t x = bx * 8; x < std::min(img.width, (bx + 1) * 8); ++x) {
            const double v = out.at(x, y) + rng.next_gaussian() * sigma;
            out.at(x, y) = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    return out;
}

} // namespace

OracleAttackResult oracle_attack_simulation(OracleEndpoint endpoint,
                                            const OracleAttackConfig& config) {
    OracleAttackResult result;
    result.endpoint = endpoint;

    const WatermarkKey key = WatermarkKey::generate(WatermarkMode::Robust, config.seed);
    const PixelImage clean = attack_scene(config.seed ^ 0x9a11);
    const PixelImage marked =
        embed_watermark(clean, WatermarkPayload::from_id(config.seed * 2654435761ull | 1),
                        key);
    Rng rng(config.seed ^ 0xa77acc);

    if (endpoint == OracleEndpoint::InternalConfidence) {
        // Full DetectionResult leaks raw_bit_agreement: hill-climb block by
        // block, keeping only perturbations that push the agreement down.
        PixelImage current = marked;
        if (config.query_budget == 0) return result;
        DetectionResult probe = decode_watermark(current, key);
        result.queries = 1;
        result.elapsed = 1.0;
        double agreement = probe.raw_bit_agreement;
        while (probe.status == DetectionStatus::Detected &&
               result.queries < config.query_budget) {
            const uint32_t bx = uint32_t(rng.next_below(current.width / 8));
            const uint32_t by = uint32_t(rng.next_below(current.height / 8));
            PixelImage candidate = noise_block(current, bx, by, 7.0, rng);
            probe = decode_watermark(candidate, key);
            ++result.queries;
            result.elapsed += 1.0;
            if (probe.status != DetectionStatus::Detected ||
                probe.raw_bit_agreement < agreement) {
                current = std::move(candidate);
                agreement = probe.raw_bit_agreement;
            } else {
                probe.status = DetectionStatus::Detected; // rejected step, keep looping
            }
        }
        result.succeeded = probe.status != DetectionStatus::Detected;
        result.effective_cost = result.elapsed;
        result.final_distortion = mean_abs_diff(marked, current);
        return result;
    }

    // Public endpoint: one bit per query, rate limited. No gradient, so the
    // attacker escalates global noise and pays for confirmation batches and
    // for waiting out the limiter windows.
    RateLimiter limiter(config.rate_limit, config.rate_window);
    double now = 0.0;
    PixelImage best;
    bool removed = false;
    auto query = [&](const PixelImage& img) -> bool {
        if (!limiter.allow("attacker", now)) {
            ++result.denied;
            now = limiter.next_allowed("attacker", now);
            limiter.allow("attacker", now);
        }
        ++result.queries;
        now += 1.0;
        return decode_watermark(img, key).status == DetectionStatus::Detected;
    };

    constexpr int kConfirmations = 5;
    for (double sigma = 1.0; sigma <= 24.0 && !removed; sigma += 0.5) {
        int undetectable = 0;
        PixelImage candidate;
        for (int trial = 0; trial < kConfirmations; ++trial) {
            if (result.queries >= config.query_budget) break;
            PixelImage attempt =
                add_gaussian_noise(marked, sigma, rng.next_u64());
            if (!query(attempt)) {
                ++undetectable;
                candidate = std::move(attempt);
            }
        }
        if (undetectable >= kConfirmations - 1) {
            removed = true;
            best = std::move(candidate);
        }
        if (result.queries >= config.query_budget) break;
    }
    result.succeeded = removed;
    result.elapsed = now;
    result.effective_cost = result.elapsed;
    result.final_distortion = removed ? mean_abs_diff(marked, best) : 0.0;
    return result;
}

} // namespace mediaseal
