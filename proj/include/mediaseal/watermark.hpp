#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "mediaseal/image.hpp"

namespace mediaseal {

struct WatermarkPayload {
    uint64_t id = 0;
    uint16_t crc = 0; // CRC-16/CCITT-FALSE over the big-endian id bytes

    static WatermarkPayload from_id(uint64_t id);
    bool crc_ok() const;

    bool operator==(const WatermarkPayload&) const = default;
};

enum class WatermarkMode { Robust, Fragile };

struct WatermarkKey {
    std::array<uint8_t, 16> secret{};
    WatermarkMode mode = WatermarkMode::Robust;

    static WatermarkKey generate(WatermarkMode mode, uint64_t seed);
    std::vector<uint8_t> to_bytes() const; // 16 secret bytes + 1 mode byte
    static WatermarkKey from_bytes(const std::vector<uint8_t>& bytes);

    bool operator==(const WatermarkKey&) const = default;
};

enum class DetectionStatus { Detected, Undetectable, NoAccess };

struct DetectionResult {
    DetectionStatus status = DetectionStatus::Undetectable;
    std::optional<WatermarkPayload> payload; // present iff Detected
    double raw_bit_agreement = 0.0; // internal confidence; never exposed publicly
};

// Robust: 80-bit codeword (id + CRC) tiled cyclically over key-permuted QIM
// slots, two key-selected mid-frequency coefficients per 8x8 luma DCT block.
// Fragile: codeword in key-permuted LSBs plus a keyed tag covering every
// other bit of the image.
PixelImage embed_watermark(const PixelImage& image, const WatermarkPayload& payload,
                           const WatermarkKey& key);

// Deterministic. Robust decoding searches a small ladder of rescale factors
// and crop offsets (up to 8 px off the left/top edges) before giving up.
DetectionResult decode_watermark(const PixelImage& image, const WatermarkKey& key);

// Transplants the key-selected carrier coefficients from source into target.
// With the same key the target then decodes to source's payload; with any
// other key the transplant lands off-lattice and stays undetectable.
PixelImage forge_watermark(const PixelImage& source, const PixelImage& target,
                           const WatermarkKey& key);

// Perceptible overlay mark: one high-contrast 8x8 glyph per character in the
// bottom-right corner, framed by an alternating border.
PixelImage apply_perceptible_mark(const PixelImage& image, const std::string& text);
PixelImage remove_perceptible_mark(const PixelImage& image);
bool has_perceptible_mark(const PixelImage& image);

} // namespace mediaseal
