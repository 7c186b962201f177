#include "mediaseal/container.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

namespace mediaseal {

namespace {

constexpr char kMagic[4] = {'M', 'I', 'A', '1'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

void append_segment_bytes(std::vector<uint8_t>& out, const std::string& tag,
                          const std::vector<uint8_t>& payload) {
    out.insert(out.end(), tag.begin(), tag.end());
    put_u32(out, static_cast<uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
}

} // namespace

std::vector<float> luma_plane(const PixelImage& img) {
    std::vector<float> plane(static_cast<size_t>(img.width) * img.height);
    if (img.channels == 1) {
        for (size_t i = 0; i < plane.size(); ++i) plane[i] = img.samples[i];
    } else {
        for (size_t i = 0; i < plane.size(); ++i) {
            const uint8_t* p = &img.samples[i * 3];
            plane[i] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
        }
    }
    return plane;
}

void add_luma_delta(PixelImage& img, const std::vector<float>& delta) {
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i) {
        const int d = static_cast<int>(std::lround(delta[i]));
        for (uint8_t c = 0; c < img.channels; ++c) {
            int v = img.samples[i * img.channels + c] + d;
            img.samples[i * img.channels + c] =
                static_cast<uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
        }
    }
}

InsecureMetadata MediaAsset::insecure_meta() const {
    for (const auto& seg : segments_) {
        if (seg.tag == "META") {
            InsecureMetadata meta;
            auto j = nlohmann::json::parse(seg.payload.begin(), seg.payload.end(),
                                           nullptr, false);
            if (j.is_object()) {
                for (auto& [k, v] : j.items())
                    if (v.is_string()) meta[k] = v.get<std::string>();
            }
            return meta;
        }
    }
    return {};
}

void MediaAsset::set_insecure_meta(const InsecureMetadata& meta) {
    std::erase_if(segments_, [](const RawSegment& s) { return s.tag == "META"; });
    if (meta.empty()) return;
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : meta) j[k] = v;
    const std::string text = j.dump();
    RawSegment seg{"META", std::vector<uint8_t>(text.begin(), text.end())};
    // Keep META ahead of C2PM when both present; otherwise append.
    auto it = segments_.begin();
    while (it != segments_.end() && it->tag != "C2PM") ++it;
    segments_.insert(it, std::move(seg));
}

std::optional<std::vector<uint8_t>> MediaAsset::manifest_segment() const {
    for (const auto& seg : segments_)
        if (seg.tag == "C2PM") return seg.payload;
    return std::nullopt;
}

void MediaAsset::set_manifest_segment(std::optional<std::vector<uint8_t>> bytes) {
    std::erase_if(segments_, [](const RawSegment& s) { return s.tag == "C2PM"; });
    if (bytes) segments_.push_back(RawSegment{"C2PM", std::move(*bytes)});
}

std::vector<uint8_t> pixl_payload(const PixelImage& img) {
    std::vector<uint8_t> out;
    out.reserve(9 + img.samples.size());
    put_u32(out, img.width);
    put_u32(out, img.height);
    out.push_back(img.channels);
    out.insert(out.end(), img.samples.begin(), img.samples.end());
    return out;
}

std::vector<uint8_t> serialize_asset(const MediaAsset& asset) {
    asset.image().check();
    std::vector<uint8_t> out(kMagic, kMagic + 4);
    append_segment_bytes(out, "PIXL", pixl_payload(asset.image()));
    for (const auto& seg : asset.segments())
        append_segment_bytes(out, seg.tag, seg.payload);
    return out;
}

MediaAsset parse_asset(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw MalformedContainer("bad magic");

    MediaAsset asset;
    bool seen_pixl = false;
    size_t pos = 4;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 8) throw MalformedContainer("truncated segment header");
        std::string tag(bytes.begin() + pos, bytes.begin() + pos + 4);
        const uint32_t len = get_u32(&bytes[pos + 4]);
        pos += 8;
        if (bytes.size() - pos < len) throw MalformedContainer("truncated segment payload");
        const uint8_t* payload = &bytes[pos];
        pos += len;

        if (tag == "PIXL") {
            if (seen_pixl) throw MalformedContainer("duplicate PIXL segment");
            if (!asset.segments_.empty())
                throw MalformedContainer("PIXL must be the first segment");
            if (len < 9) throw MalformedContainer("PIXL payload too short");
            PixelImage img;
            img.width = get_u32(payload);
            img.height = get_u32(payload + 4);
            img.channels = payload[8];
            img.samples.assign(payload + 9, payload + len);
            if (img.width < 1 || img.height < 1 || (img.channels != 1 && img.channels != 3) ||
                img.samples.size() != img.sample_count())
                throw InvariantViolation("PIXL sample count mismatch");
            asset.image_ = std::move(img);
            seen_pixl = true;
        } else {
            if (!seen_pixl) throw MalformedContainer("segment before PIXL");
            if ((tag == "META" || tag == "C2PM") &&
                std::any_of(asset.segments_.begin(), asset.segments_.end(),
                            [&](const RawSegment& s) { return s.tag == tag; }))
                throw MalformedContainer("duplicate " + tag + " segment");
            asset.segments_.push_back(
                RawSegment{std::move(tag), std::vector<uint8_t>(payload, payload + len)});
        }
    }
    if (!seen_pixl) throw MalformedContainer("missing PIXL segment");
    return asset;
}

} // namespace mediaseal
