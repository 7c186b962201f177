#include "mediaseal/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <limits>
#include <numeric>

#include <sodium.h>

#include "mediaseal/container.hpp"
#include "mediaseal/crc16.hpp"
#include "mediaseal/dct.hpp"
#include "mediaseal/rng.hpp"
#include "mediaseal/transform.hpp"

namespace mediaseal {

namespace {

constexpr int kDelta = 16;           // QIM step
constexpr int kCodewordBits = 80;    // 64-bit id + 16-bit CRC
constexpr int kTileBlocks = 8;       // lane pattern repeats every 8x8 blocks
constexpr int kLanes = kTileBlocks * kTileBlocks * 2;
constexpr double kAgreementGate = 0.90;
constexpr int kMinMultiSlot = 32;
constexpr int kFragileTagBits = 64;

struct KeySchedule {
    int coeff[2];        // flat 8x8 indices of the two carrier coefficients
    int bit_of_lane[kLanes];
    int dither[kLanes];  // 0 or 8: every lattice point stays on the step-8 grid
};

uint64_t key_word(const WatermarkKey& key, int half) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(key.secret[half * 8 + i]) << (8 * i);
    return v;
}

KeySchedule make_schedule(const WatermarkKey& key) {
    static const int kCandidates[8] = {
        0 * 8 + 2, 2 * 8 + 0, 1 * 8 + 1, 1 * 8 + 2, 2 * 8 + 1, 0 * 8 + 3, 3 * 8 + 0, 2 * 8 + 2,
    };
    const uint64_t k0 = key_word(key, 0);
    const uint64_t k1 = key_word(key, 1);

    KeySchedule ks;
    const int a = static_cast<int>(prf64(k0, k1, 1001) % 8);
    int b = static_cast<int>(prf64(k0, k1, 1002) % 7);
    if (b >= a) ++b;
    ks.coeff[0] = kCandidates[a];
    ks.coeff[1] = kCandidates[b];

    int perm[kLanes];
    std::iota(perm, perm + kLanes, 0);
    Rng shuffler(prf64(k0, k1, 2001));
    for (int i = kLanes - 1; i > 0; --i)
        std::swap(perm[i], perm[shuffler.next_below(i + 1)]);
    for (int lane = 0; lane < kLanes; ++lane) ks.bit_of_lane[lane] = perm[lane] % kCodewordBits;

    // Dither restricted to multiples of 8 keeps every lattice point on the
    // step-8 coefficient grid, so blockwise quantization at steps dividing 8
    // re-centers carriers on their lattice points instead of pushing them
    // across the decision boundary.
    for (int lane = 0; lane < kLanes; ++lane)
        ks.dither[lane] = static_cast<int>(prf64(k0, k1, 3000 + lane) % 2) * 8;
    return ks;
}

std::array<bool, kCodewordBits> codeword_bits(const WatermarkPayload& payload) {
    std::array<bool, kCodewordBits> bits{};
    for (int i = 0; i < 64; ++i) bits[i] = (payload.id >> (63 - i)) & 1;
    for (int i = 0; i < 16; ++i) bits[64 + i] = (payload.crc >> (15 - i)) & 1;
    return bits;
}

WatermarkPayload payload_from_bits(const std::array<bool, kCodewordBits>& bits) {
    WatermarkPayload p;
    for (int i = 0; i < 64; ++i) p.id = (p.id << 1) | (bits[i] ? 1 : 0);
    for (int i = 0; i < 16; ++i) p.crc = static_cast<uint16_t>((p.crc << 1) | (bits[64 + i] ? 1 : 0));
    return p;
}

double nearest_lattice(double c, double base) {
    return base + kDelta * std::round((c - base) / kDelta);
}

struct PassResult {
    bool usable = false;
    bool crc_ok = false;
    double agreement = 0.0; // over slots of bits carried by >= 2 lanes
    WatermarkPayload payload;
};

// Resampling attenuates the two carrier coefficients by different factors, so
// each carrier gets its own gain, recovered from the data: with dithers of 0
// or 8 every lattice point is a multiple of 8 regardless of the embedded bit,
// and the right gain is the one that pulls the observed coefficients back onto
// that grid. Scanned from high to low so the coarser sub-lattice aliases
// (g, g/2, ...) resolve to the true gain.
double estimate_gain(const std::vector<double>& values) {
    double best_gain = 1.0, best_cost = std::numeric_limits<double>::infinity();
    for (double g = 1.10; g >= 0.145; g -= 0.005) {
        double cost = 0.0;
        for (const double c : values) {
            const double scaled = c / g;
            cost += std::abs(scaled - 8.0 * std::round(scaled / 8.0));
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_gain = g;
        }
    }
    return best_gain;
}

// One decoding attempt over the plane starting at pixel offset (dx, dy) with
// tile lane shift (sx, sy); per-carrier gain is estimated from the data.
PassResult decode_pass(const std::vector<float>& plane, uint32_t w, uint32_t h,
                       const KeySchedule& ks, int dx, int dy, int sx, int sy) {
    PassResult out;
    const uint32_t aw = w - dx, ah = h - dy;
    const uint32_t nbx = aw / 8, nby = ah / 8;
    if (nbx < 1 || nby < 1) return out;

    struct Slot {
        int lane;
        int carrier;
        double coeff;
    };
    std::vector<Slot> raw;
    raw.reserve(static_cast<size_t>(nbx) * nby * 2);
    std::vector<double> carrier_values[2];

    float block[64], coeffs[64];
    for (uint32_t by = 0; by < nby; ++by)
        for (uint32_t bx = 0; bx < nbx; ++bx) {
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    block[y * 8 + x] =
                        plane[static_cast<size_t>(dy + by * 8 + y) * w + dx + bx * 8 + x];
            dct8x8_forward(block, coeffs);
            for (int j = 0; j < 2; ++j) {
                const int lane = (static_cast<int>((by + sy) % kTileBlocks) * kTileBlocks +
                                  static_cast<int>((bx + sx) % kTileBlocks)) * 2 + j;
                raw.push_back({lane, j, coeffs[ks.coeff[j]]});
                carrier_values[j].push_back(coeffs[ks.coeff[j]]);
            }
        }

    const double gain[2] = {estimate_gain(carrier_values[0]), estimate_gain(carrier_values[1])};

    double soft[kCodewordBits] = {};
    int lane_count[kLanes] = {};
    std::vector<std::pair<int, bool>> slots; // (lane, hard bit)
    slots.reserve(raw.size());
    for (const Slot& s : raw) {
        const double c = s.coeff / gain[s.carrier];
        const double d0 = std::abs(c - nearest_lattice(c, ks.dither[s.lane]));
        const double d1 = std::abs(c - nearest_lattice(c, ks.dither[s.lane] + kDelta / 2.0));
        soft[ks.bit_of_lane[s.lane]] += d0 - d1; // positive favors bit 1
        slots.emplace_back(s.lane, d1 < d0);
        ++lane_count[s.lane];
    }

    int bit_slots[kCodewordBits] = {};
    for (int lane = 0; lane < kLanes; ++lane) bit_slots[ks.bit_of_lane[lane]] += lane_count[lane];
    std::array<bool, kCodewordBits> bits{};
    for (int i = 0; i < kCodewordBits; ++i) {
        if (bit_slots[i] == 0) return out; // incomplete codeword coverage
        bits[i] = soft[i] > 0;
    }

    const auto agreement_of = [&](const std::array<bool, kCodewordBits>& decoded,
                                  int& multi_out) {
        int multi = 0, agree = 0;
        for (const auto& [lane, hard] : slots) {
            if (bit_slots[ks.bit_of_lane[lane]] < 2) continue;
            ++multi;
            if (hard == decoded[ks.bit_of_lane[lane]]) ++agree;
        }
        multi_out = multi;
        return multi > 0 ? static_cast<double>(agree) / multi : 0.0;
    };

    int multi = 0;
    const double agreement = agreement_of(bits, multi);
    if (multi < kMinMultiSlot) return out;

    out.usable = true;
    out.agreement = agreement;
    out.payload = payload_from_bits(bits);
    out.crc_ok = out.payload.crc_ok();
    if (out.crc_ok || out.agreement < kAgreementGate) return out;

    // Benign distortion can still flip a sparsely voted codeword bit. Chase
    // the weakest soft decisions (singles, pairs, triples) and let the CRC
    // arbitrate — but only on passes that already look like a real mark:
    // high slot agreement and carriers with lattice-scale energy, so an
    // unwatermarked image cannot be talked into a payload.
    double energy = 0.0;
    for (const Slot& s : raw) energy += std::abs(s.coeff / gain[s.carrier]);
    if (energy / static_cast<double>(raw.size()) < 3.0) return out;

    std::array<int, kCodewordBits> order;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return std::abs(soft[x]) < std::abs(soft[y]); });
    std::vector<std::vector<int>> flips;
    for (int x = 0; x < 12; ++x) flips.push_back({order[x]});
    for (int x = 0; x < 8; ++x)
        for (int y = x + 1; y < 8; ++y) flips.push_back({order[x], order[y]});
    for (int x = 0; x < 6; ++x)
        for (int y = x + 1; y < 6; ++y)
            for (int z = y + 1; z < 6; ++z) flips.push_back({order[x], order[y], order[z]});

    for (const auto& flip : flips) {
        auto trial = bits;
        for (const int idx : flip) trial[idx] = !trial[idx];
        const WatermarkPayload payload = payload_from_bits(trial);
        if (!payload.crc_ok()) continue;
        int trial_multi = 0;
        const double trial_agreement = agreement_of(trial, trial_multi);
        if (trial_agreement < kAgreementGate) continue;
        out.agreement = trial_agreement;
        out.payload = payload;
        out.crc_ok = true;
        return out;
    }
    return out;
}

// Candidate (dx, lane shift) pairs for a left/top crop of up to 8 pixels.
std::vector<std::pair<int, int>> crop_offsets() {
    std::vector<std::pair<int, int>> out;
    out.emplace_back(0, 0);
    for (int removed = 1; removed <= 8; ++removed) out.emplace_back((8 - removed % 8) % 8, 1);
    return out;
}

std::array<uint8_t, 32> fragile_tag_input_hash(const PixelImage& image,
                                               const std::vector<size_t>& slot_samples,
                                               const WatermarkKey& key) {
    std::vector<uint8_t> buf = image.samples;
    for (size_t idx : slot_samples) buf[idx] &= 0xFE;
    std::array<uint8_t, 32> mac;
    crypto_auth_hmacsha256_state st;
    std::array<uint8_t, 32> mac_key{};
    std::copy(key.secret.begin(), key.secret.end(), mac_key.begin());
    crypto_auth_hmacsha256_init(&st, mac_key.data(), mac_key.size());
    uint8_t dims[9] = {
        static_cast<uint8_t>(image.width >> 24), static_cast<uint8_t>(image.width >> 16),
        static_cast<uint8_t>(image.width >> 8),  static_cast<uint8_t>(image.width),
        static_cast<uint8_t>(image.height >> 24), static_cast<uint8_t>(image.height >> 16),
        static_cast<uint8_t>(image.height >> 8), static_cast<uint8_t>(image.height),
        image.channels,
    };
    crypto_auth_hmacsha256_update(&st, dims, sizeof(dims));
    crypto_auth_hmacsha256_update(&st, buf.data(), buf.size());
    crypto_auth_hmacsha256_final(&st, mac.data());
    return mac;
}

std::vector<size_t> fragile_slots(const PixelImage& image, const WatermarkKey& key) {
    const size_t n = image.samples.size();
    std::vector<size_t> indices(n);
    std::iota(indices.begin(), indices.end(), size_t{0});
    Rng shuffler(prf64(key_word(key, 0), key_word(key, 1), 4001));
    const size_t need = kCodewordBits + kFragileTagBits;
    for (size_t i = 0; i < need; ++i)
        std::swap(indices[i], indices[i + shuffler.next_below(n - i)]);
    indices.resize(need);
    return indices;
}

PixelImage embed_fragile(const PixelImage& image, const WatermarkPayload& payload,
                         const WatermarkKey& key) {
    if (image.samples.size() < kCodewordBits + kFragileTagBits)
        throw ImageTooSmall("fragile watermark needs at least 144 samples");
    PixelImage out = image;
    const auto slots = fragile_slots(image, key);
    const auto tag = fragile_tag_input_hash(image, slots, key);
    const auto bits = codeword_bits(payload);
    for (int i = 0; i < kCodewordBits; ++i)
        out.samples[slots[i]] = (out.samples[slots[i]] & 0xFE) | (bits[i] ? 1 : 0);
    for (int i = 0; i < kFragileTagBits; ++i) {
        const bool bit = (tag[i / 8] >> (7 - i % 8)) & 1;
        out.samples[slots[kCodewordBits + i]] =
            (out.samples[slots[kCodewordBits + i]] & 0xFE) | (bit ? 1 : 0);
    }
    return out;
}

DetectionResult decode_fragile(const PixelImage& image, const WatermarkKey& key) {
    if (image.samples.size() < kCodewordBits + kFragileTagBits)
        return {DetectionStatus::Undetectable, std::nullopt, 0.0};
    const auto slots = fragile_slots(image, key);
    const auto expected = fragile_tag_input_hash(image, slots, key);
    std::array<bool, kCodewordBits> bits{};
    for (int i = 0; i < kCodewordBits; ++i) bits[i] = image.samples[slots[i]] & 1;
    bool tag_ok = true;
    for (int i = 0; i < kFragileTagBits; ++i) {
        const bool want = (expected[i / 8] >> (7 - i % 8)) & 1;
        if ((image.samples[slots[kCodewordBits + i]] & 1) != want) tag_ok = false;
    }
    const auto payload = payload_from_bits(bits);
    if (tag_ok && payload.crc_ok())
        return {DetectionStatus::Detected, payload, 1.0};
    return {DetectionStatus::Undetectable, std::nullopt, 0.0};
}

} // namespace

WatermarkPayload WatermarkPayload::from_id(uint64_t id) {
    return {id, crc16_of_id(id)};
}

bool WatermarkPayload::crc_ok() const { return crc == crc16_of_id(id); }

WatermarkKey WatermarkKey::generate(WatermarkMode mode, uint64_t seed) {
    WatermarkKey key;
    key.mode = mode;
    Rng rng(seed ^ 0x57a7e57a7e57a7e5ull);
    for (int i = 0; i < 16; i += 8) {
        const uint64_t v = rng.next_u64();
        for (int j = 0; j < 8; ++j) key.secret[i + j] = static_cast<uint8_t>(v >> (8 * j));
    }
    return key;
}

std::vector<uint8_t> WatermarkKey::to_bytes() const {
    std::vector<uint8_t> out(secret.begin(), secret.end());
    out.push_back(mode == WatermarkMode::Robust ? 0 : 1);
    return out;
}

WatermarkKey WatermarkKey::from_bytes(const std::vector<uint8_t>& bytes) {
    if (bytes.size() != 17) throw BadKey("watermark key file must be 17 bytes");
    if (bytes[16] > 1) throw BadKey("unknown watermark mode byte");
    WatermarkKey key;
    std::copy(bytes.begin(), bytes.begin() + 16, key.secret.begin());
    key.mode = bytes[16] == 0 ? WatermarkMode::Robust : WatermarkMode::Fragile;
    return key;
}

PixelImage embed_watermark(const PixelImage& image, const WatermarkPayload& payload,
                           const WatermarkKey& key) {
    image.check();
    if (!payload.crc_ok()) throw BadKey("payload CRC does not match id");
    if (key.mode == WatermarkMode::Fragile) return embed_fragile(image, payload, key);

    if (image.width < 64 || image.height < 64)
        throw ImageTooSmall("robust watermark needs at least 64x64 pixels");

    const KeySchedule ks = make_schedule(key);
    const auto bits = codeword_bits(payload);
    const uint32_t w = image.width, h = image.height;
    std::vector<float> plane = luma_plane(image);
    std::vector<float> delta(plane.size(), 0.0f);

    float block[64], coeffs[64];
    for (uint32_t by = 0; by < h / 8; ++by)
        for (uint32_t bx = 0; bx < w / 8; ++bx) {
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    block[y * 8 + x] = plane[static_cast<size_t>(by * 8 + y) * w + bx * 8 + x];
            dct8x8_forward(block, coeffs);
            float before[64];
            std::memcpy(before, coeffs, sizeof(before));
            for (int j = 0; j < 2; ++j) {
                const int lane = (static_cast<int>(by % kTileBlocks) * kTileBlocks +
                                  static_cast<int>(bx % kTileBlocks)) * 2 + j;
                const double base = ks.dither[lane] + (bits[ks.bit_of_lane[lane]] ? kDelta / 2.0 : 0.0);
                coeffs[ks.coeff[j]] = static_cast<float>(nearest_lattice(coeffs[ks.coeff[j]], base));
            }
            float rebuilt[64], original[64];
            dct8x8_inverse(coeffs, rebuilt);
            dct8x8_inverse(before, original);
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    float d = rebuilt[y * 8 + x] - original[y * 8 + x];
                    d = std::clamp(d, -4.0f, 4.0f); // imperceptibility bound
                    delta[static_cast<size_t>(by * 8 + y) * w + bx * 8 + x] = d;
                }
        }

    PixelImage out = image;
    add_luma_delta(out, delta);
    return out;
}

DetectionResult decode_watermark(const PixelImage& image, const WatermarkKey& key) {
    image.check();
    if (key.mode == WatermarkMode::Fragile) return decode_fragile(image, key);
    // A downscaled copy can be smaller than the embedding minimum; the scale
    // ladder below restores it, so only reject degenerate inputs here.
    if (image.width < 8 || image.height < 8)
        return {DetectionStatus::Undetectable, std::nullopt, 0.0};

    const KeySchedule ks = make_schedule(key);
    static const double kScales[] = {1.0, 0.75, 0.8, 2.0 / 3.0, 0.5, 1.25, 1.5, 2.0};
    const auto offsets = crop_offsets();

    double best_agreement = 0.0;
    for (const double scale : kScales) {
        PixelImage rescaled;
        const PixelImage* view = &image;
        if (scale != 1.0) {
            rescaled = rescale_image(image, 1.0 / scale);
            if (rescaled.width < 64 || rescaled.height < 64) continue;
            view = &rescaled;
        }
        const std::vector<float> plane = luma_plane(*view);
        const auto& offs_x = scale == 1.0 ? offsets : std::vector<std::pair<int, int>>{{0, 0}};
        for (const auto& [dx, sx] : offs_x)
            for (const auto& [dy, sy] : offs_x) {
                const PassResult r =
                    decode_pass(plane, view->width, view->height, ks, dx, dy, sx, sy);
                if (!r.usable) continue;
                best_agreement = std::max(best_agreement, r.agreement);
                if (r.crc_ok && r.agreement >= kAgreementGate)
                    return {DetectionStatus::Detected, r.payload, r.agreement};
            }
    }
    return {DetectionStatus::Undetectable, std::nullopt, best_agreement};
}

PixelImage forge_watermark(const PixelImage& source, const PixelImage& target,
                           const WatermarkKey& key) {
    source.check();
    target.check();
    if (key.mode != WatermarkMode::Robust)
        throw BadKey("forgery transplant applies to robust watermarks");
    if (source.width < 64 || source.height < 64 || target.width < 64 || target.height < 64)
        throw ImageTooSmall("forgery needs 64x64 source and target");

    const KeySchedule ks = make_schedule(key);
    const std::vector<float> src_plane = luma_plane(source);
    const std::vector<float> tgt_plane = luma_plane(target);
    const uint32_t sw = source.width, tw = target.width, th = target.height;

    // The top-left 8x8 block tile of the source carries every lane once.
    float sblock[64], scoeffs[64], tblock[64], tcoeffs[64];
    std::vector<float> delta(tgt_plane.size(), 0.0f);
    for (uint32_t by = 0; by < th / 8; ++by)
        for (uint32_t bx = 0; bx < tw / 8; ++bx) {
            const uint32_t sby = by % kTileBlocks, sbx = bx % kTileBlocks;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    sblock[y * 8 + x] =
                        src_plane[static_cast<size_t>(sby * 8 + y) * sw + sbx * 8 + x];
                    tblock[y * 8 + x] =
                        tgt_plane[static_cast<size_t>(by * 8 + y) * tw + bx * 8 + x];
                }
            dct8x8_forward(sblock, scoeffs);
            dct8x8_forward(tblock, tcoeffs);
            float before[64];
            std::memcpy(before, tcoeffs, sizeof(before));
            for (int j = 0; j < 2; ++j) tcoeffs[ks.coeff[j]] = scoeffs[ks.coeff[j]];
            float rebuilt[64], original[64];
            dct8x8_inverse(tcoeffs, rebuilt);
            dct8x8_inverse(before, original);
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    delta[static_cast<size_t>(by * 8 + y) * tw + bx * 8 + x] =
                        rebuilt[y * 8 + x] - original[y * 8 + x];
        }

    PixelImage out = target;
    add_luma_delta(out, delta);
    return out;
}

} // namespace mediaseal
