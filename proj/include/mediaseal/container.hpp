#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mediaseal/image.hpp"

namespace mediaseal {

// Non-signed key/value metadata. Carried in a META segment as canonical JSON.
using InsecureMetadata = std::map<std::string, std::string>;

// One container segment after PIXL. META and C2PM live in this list too so a
// parsed asset re-serializes byte for byte, with unknown tags kept in place.
struct RawSegment {
    std::string tag; // 4 ASCII bytes
    std::vector<uint8_t> payload;

    bool operator==(const RawSegment&) const = default;
};

class MediaAsset {
public:
    MediaAsset() = default;
    explicit MediaAsset(PixelImage img) : image_(std::move(img)) { image_.check(); }

    const PixelImage& image() const { return image_; }
    void set_image(PixelImage img) {
        img.check();
        image_ = std::move(img);
    }

    InsecureMetadata insecure_meta() const;
    void set_insecure_meta(const InsecureMetadata& meta); // empty map removes META
    std::optional<std::vector<uint8_t>> manifest_segment() const;
    void set_manifest_segment(std::optional<std::vector<uint8_t>> bytes);

    const std::vector<RawSegment>& segments() const { return segments_; }
    void append_segment(RawSegment seg) { segments_.push_back(std::move(seg)); }

    bool operator==(const MediaAsset&) const = default;

private:
    friend MediaAsset parse_asset(const std::vector<uint8_t>& bytes);

    PixelImage image_;
    std::vector<RawSegment> segments_; // everything after PIXL, in order
};

// MIAC container, big-endian: magic "MIA1", then tag(4) + length(u32) + payload
// segments until EOF. PIXL exactly once and first.
std::vector<uint8_t> serialize_asset(const MediaAsset& asset);
MediaAsset parse_asset(const std::vector<uint8_t>& bytes);

// The PIXL segment payload (width, height, channels, samples); also the input
// to the C2PA hard hash.
std::vector<uint8_t> pixl_payload(const PixelImage& img);

} // namespace mediaseal
