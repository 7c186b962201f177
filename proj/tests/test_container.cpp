#include <doctest.h>

#include "fixtures.hpp"
#include "mediaseal/hex.hpp"

using namespace mediaseal;

TEST_CASE("container round trip is byte identical") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const uint32_t w = 1 + uint32_t(rng.next_below(40));
        const uint32_t h = 1 + uint32_t(rng.next_below(40));
        const uint8_t ch = rng.next_below(2) ? 3 : 1;
        MediaAsset asset{fixtures::random_image(rng.next_u64(), w, h, ch)};
        if (rng.next_below(2)) {
            InsecureMetadata meta;
            meta["capture_time"] = "2026-01-0" + std::to_string(1 + rng.next_below(9));
            meta["device"] = "cam-" + std::to_string(rng.next_below(100));
            asset.set_insecure_meta(meta);
        }
        if (rng.next_below(2)) {
            std::vector<uint8_t> blob(rng.next_below(50));
            for (auto& b : blob) b = uint8_t(rng.next_below(256));
            asset.append_segment({"XMP0", blob});
        }
        if (rng.next_below(3) == 0)
            asset.set_manifest_segment(std::vector<uint8_t>{'{', '}'});

        const auto bytes = serialize_asset(asset);
        const MediaAsset parsed = parse_asset(bytes);
        CHECK(parsed == asset);
        CHECK(serialize_asset(parsed) == bytes); // byte identical re-serialization
    }
}

TEST_CASE("unknown segments keep their order") {
    MediaAsset asset{fixtures::random_image(7, 4, 4, 1)};
    asset.append_segment({"AAAA", {1}});
    asset.set_insecure_meta({{"k", "v"}});
    asset.append_segment({"BBBB", {2}});
    const MediaAsset parsed = parse_asset(serialize_asset(asset));
    REQUIRE(parsed.segments().size() == 3);
    CHECK(parsed.segments()[0].tag == "AAAA");
    CHECK(parsed.segments()[1].tag == "META");
    CHECK(parsed.segments()[2].tag == "BBBB");
}

TEST_CASE("metadata accessors edit in place") {
    MediaAsset asset{fixtures::random_image(8, 4, 4, 1)};
    asset.set_insecure_meta({{"a", "1"}});
    CHECK(asset.insecure_meta().at("a") == "1");
    asset.set_insecure_meta({});
    CHECK(asset.insecure_meta().empty());
    CHECK(asset.segments().empty()); // empty map removes the segment

    asset.set_manifest_segment(std::vector<uint8_t>{1, 2, 3});
    REQUIRE(asset.manifest_segment().has_value());
    asset.set_manifest_segment(std::nullopt);
    CHECK(!asset.manifest_segment().has_value());
}

TEST_CASE("parser rejects malformed containers") {
    const MediaAsset asset{fixtures::random_image(9, 4, 4, 1)};
    auto bytes = serialize_asset(asset);

    SUBCASE("bad magic") {
        bytes[0] = 'X';
        CHECK_THROWS_AS(parse_asset(bytes), MalformedContainer);
    }
    SUBCASE("truncated header") {
        bytes.resize(3);
        CHECK_THROWS_AS(parse_asset(bytes), MalformedContainer);
    }
    SUBCASE("truncated segment payload") {
        bytes.pop_back();
        CHECK_THROWS_AS(parse_asset(bytes), MalformedContainer);
    }
    SUBCASE("duplicate pixel segment") {
        std::vector<uint8_t> doubled = bytes;
        doubled.insert(doubled.end(), bytes.begin() + 4, bytes.end());
        CHECK_THROWS_AS(parse_asset(doubled), MalformedContainer);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(parse_asset({}), MalformedContainer);
    }
}

TEST_CASE("hard hash matches an external digest oracle") {
    // sha256 of 00000002 00000002 01 0a141e28, computed with an
    // independent implementation.
    PixelImage img = PixelImage::make(2, 2, 1);
    img.samples = {10, 20, 30, 40};
    const Digest digest = hard_hash(img);
    CHECK(to_hex(digest.data(), digest.size()) ==
          "e28a30c99bd69b697439c9cb4c25c853115c47fdee38f34841313927677fa8d3");
}

TEST_CASE("luma plane and delta helpers") {
    PixelImage gray = PixelImage::make(2, 1, 1);
    gray.samples = {100, 200};
    const auto plane = luma_plane(gray);
    CHECK(plane[0] == doctest::Approx(100.0));
    CHECK(plane[1] == doctest::Approx(200.0));

    PixelImage rgb = PixelImage::make(1, 1, 3);
    rgb.samples = {255, 0, 0};
    CHECK(luma_plane(rgb)[0] == doctest::Approx(0.299 * 255).epsilon(0.01));

    add_luma_delta(gray, {10.4f, 200.0f});
    CHECK(gray.samples[0] == 110);
    CHECK(gray.samples[1] == 255); // clamped
}
