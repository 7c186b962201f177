#include <doctest.h>

#include <fstream>
#include <set>

#include "fixtures.hpp"
#include "mediaseal/registry.hpp"
#include "mediaseal/validation.hpp"

using namespace mediaseal;
using fixtures::make_scene;
using fixtures::make_signer;

TEST_CASE("outcome table shape") {
    const auto& table = outcome_table();
    REQUIRE(table.size() == 60);

    std::set<std::tuple<C2paStatus, WatermarkState, FingerprintState>> triples;
    for (size_t i = 0; i < table.size(); ++i) {
        CHECK(table[i].row == int(i) + 1);
        CHECK(triples.insert({table[i].c2pa, table[i].watermark, table[i].fingerprint}).second);
    }

    // Exactly 20 high-confidence rows, at the expected row numbers.
    std::set<int> high;
    for (const auto& r : table)
        if (r.confidence == Confidence::High) high.insert(r.row);
    std::set<int> expected{6, 7, 28, 29};
    for (int r = 45; r <= 60; ++r) expected.insert(r);
    CHECK(high == expected);

    // A verified embedded manifest always dominates.
    for (const auto& r : table)
        if (r.c2pa == C2paStatus::PresentHashMatch) {
            CHECK(r.result == ValidationResult::MediaValidates);
            CHECK(r.confidence == Confidence::High);
        }
    // A registry-matched watermark is the other High path.
    for (const auto& r : table)
        if (r.confidence == Confidence::High && r.c2pa != C2paStatus::PresentHashMatch)
            CHECK(r.watermark == WatermarkState::DetectableMatch);
}

TEST_CASE("outcome table spot checks") {
    const auto& t = outcome_table();
    auto at = [&](int n) -> const OutcomeRow& { return t[size_t(n) - 1]; };

    CHECK(at(1).c2pa == C2paStatus::NotPresent);
    CHECK(at(1).watermark == WatermarkState::DetectableNoMatch);
    CHECK(at(1).fingerprint == FingerprintState::Invalid);
    CHECK(at(1).result == ValidationResult::Indeterminate);
    CHECK(at(1).confidence == Confidence::Low);

    CHECK(at(6).result == ValidationResult::Match);
    CHECK(at(6).confidence == Confidence::High);
    CHECK(at(6).concern.empty());

    CHECK(at(17).watermark == WatermarkState::NoAccess);
    CHECK(at(17).fingerprint == FingerprintState::NoAccess);
    CHECK(at(17).confidence == Confidence::CannotBeAsserted);

    CHECK(at(28).c2pa == C2paStatus::PresentHashNoMatch);
    CHECK(at(28).concern == "C2PA replacement attack");

    CHECK(at(41).result == ValidationResult::MediaModified);
    CHECK(at(41).confidence == Confidence::Lowest);
    CHECK(at(41).concern.find("Watermark removal attack") == 0);

    CHECK(at(45).c2pa == C2paStatus::PresentHashMatch);
    CHECK(at(45).result == ValidationResult::MediaValidates);
    CHECK(at(60).watermark == WatermarkState::Undetectable);
    CHECK(at(60).fingerprint == FingerprintState::NoAccess);
}

TEST_CASE("shipped outcome table data matches the code") {
    std::ifstream in(std::string(MEDIASEAL_DATA_DIR) + "/outcome_table.json",
                     std::ios::binary);
    REQUIRE(in);
    const std::string shipped((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    CHECK(shipped == outcome_table_json());
}

TEST_CASE("decide resolves every table row exactly") {
    for (const auto& row : outcome_table()) {
        const Decision d = decide(row.c2pa, row.watermark, row.fingerprint);
        CHECK(d.result == row.result);
        CHECK(d.confidence == row.confidence);
        CHECK(d.table_row == row.row);
        CHECK(!d.extra_tabular);
        if (!row.concern.empty()) {
            REQUIRE(!d.concerns.empty());
            CHECK(d.concerns.front() == row.concern);
        }
    }
}

TEST_CASE("decide covers combinations outside the table") {
    SUBCASE("registry-matched watermark dominates a bad fingerprint") {
        const Decision d = decide(C2paStatus::NotPresent, WatermarkState::DetectableMatch,
                                  FingerprintState::Invalid);
        CHECK(d.result == ValidationResult::Match);
        CHECK(d.confidence == Confidence::High);
        CHECK(d.extra_tabular);
        CHECK(d.table_row == 0);
    }
    SUBCASE("verified manifest dominates everything") {
        const Decision d = decide(C2paStatus::PresentHashMatch,
                                  WatermarkState::DetectableNoMatch,
                                  FingerprintState::ValidMatch);
        CHECK(d.result == ValidationResult::MediaValidates);
        CHECK(d.confidence == Confidence::High);
        CHECK(d.extra_tabular);
    }
    SUBCASE("short-circuited stages are not extra-tabular") {
        const Decision c2pa_only = decide(C2paStatus::PresentHashMatch, std::nullopt,
                                          std::nullopt);
        CHECK(c2pa_only.result == ValidationResult::MediaValidates);
        CHECK(c2pa_only.confidence == Confidence::High);
        CHECK(!c2pa_only.extra_tabular);

        const Decision wm_only =
            decide(C2paStatus::NotPresent, WatermarkState::DetectableMatch, std::nullopt);
        CHECK(wm_only.result == ValidationResult::Match);
        CHECK(wm_only.confidence == Confidence::High);
        CHECK(!wm_only.extra_tabular);
    }
    SUBCASE("prefix fallback picks the most pessimistic row") {
        const Decision d =
            decide(C2paStatus::NotPresent, WatermarkState::Undetectable, std::nullopt);
        CHECK(d.result == ValidationResult::Indeterminate);
        CHECK(d.confidence == Confidence::CannotBeAsserted);
        CHECK(d.extra_tabular);
        // flagged so callers can tell it was resolved by precedence
        CHECK(std::count(d.concerns.begin(), d.concerns.end(),
                         "extra-tabular combination") == 1);
    }
    SUBCASE("missing manifest-present triple falls back pessimistically") {
        const Decision d = decide(C2paStatus::PresentHashNoMatch,
                                  WatermarkState::DetectableMissing,
                                  FingerprintState::Invalid);
        CHECK(!d.extra_tabular); // row 30 exists
        CHECK(d.table_row == 30);
        const Decision gap = decide(C2paStatus::NotPresent, WatermarkState::DetectableMatch,
                                    FingerprintState::ValidNoMatch);
        CHECK(gap.extra_tabular);
        CHECK(gap.result == ValidationResult::Match); // watermark precedence
    }
}

namespace {

struct ValidationScene {
    fixtures::SignerWorld world = make_signer("cert-a", 80);
    WatermarkKey key = WatermarkKey::generate(WatermarkMode::Robust, 81);
    fixtures::TempDir dir{"validation"};
    Registry registry{dir.path};

    // A watermarked, signed, registered asset plus its registry entry.
    MediaAsset registered_asset;

    ValidationScene() {
        const PixelImage marked =
            embed_watermark(make_scene(850), WatermarkPayload::from_id(777), key);
        Manifest m = fixtures::basic_manifest(marked, "cert-a");
        m.watermark_id = 777;
        const SignedManifest sm = sign_manifest(m, world.key, &world.trust);
        registered_asset = embed_manifest(MediaAsset{marked}, sm);

        RegistryEntry entry;
        entry.content_hash = m.content_hash;
        entry.signed_manifest = sm;
        entry.watermark_id = 777;
        entry.fingerprints = {compute_fingerprint(marked, FingerprintAlgorithm::BlockMean),
                              compute_fingerprint(marked, FingerprintAlgorithm::DctWave)};
        entry.stored_at = 1000;
        registry.store_entry(entry);
    }
};

} // namespace

TEST_CASE("validate short-circuits on a verified manifest") {
    ValidationScene s;
    const ValidationReport report =
        validate(s.registered_asset, s.world.trust, &s.key, &s.registry);
    CHECK(report.result == ValidationResult::MediaValidates);
    CHECK(report.confidence == Confidence::High);
    CHECK(!report.watermark.has_value());
    CHECK(!report.fingerprint.has_value());
    REQUIRE(report.display.has_value());
    CHECK(report.display->signer == "cert-a");
    CHECK(!report.needs_human_review);
}

TEST_CASE("full mode lands on the all-green table row") {
    ValidationScene s;
    ValidationConfig config;
    config.mode = ValidationMode::Full;
    const ValidationReport report =
        validate(s.registered_asset, s.world.trust, &s.key, &s.registry, config);
    CHECK(report.table_row == 45);
    CHECK(report.result == ValidationResult::MediaValidates);
    CHECK(report.confidence == Confidence::High);
    REQUIRE(report.watermark.has_value());
    CHECK(report.watermark->state == WatermarkState::DetectableMatch);
    REQUIRE(report.fingerprint.has_value());
    CHECK(report.fingerprint->state == FingerprintState::ValidMatch);
    // Short-circuit and full mode agree on the verdict.
    const ValidationReport quick =
        validate(s.registered_asset, s.world.trust, &s.key, &s.registry);
    CHECK(quick.result == report.result);
    CHECK(quick.confidence == report.confidence);
}

TEST_CASE("watermark alone can carry a high-confidence match") {
    ValidationScene s;
    MediaAsset stripped = s.registered_asset;
    stripped.set_manifest_segment(std::nullopt);
    const ValidationReport report = validate(stripped, s.world.trust, &s.key, &s.registry);
    CHECK(report.c2pa.status == C2paStatus::NotPresent);
    REQUIRE(report.watermark.has_value());
    CHECK(report.watermark->state == WatermarkState::DetectableMatch);
    CHECK(report.result == ValidationResult::Match);
    CHECK(report.confidence == Confidence::High);
    REQUIRE(report.display.has_value()); // recovered from the registry entry
    CHECK(report.display->signer == "cert-a");
}

TEST_CASE("display only appears at high confidence") {
    ValidationScene s;
    const MediaAsset anonymous{make_scene(851)};
    const ValidationReport report = validate(anonymous, s.world.trust, &s.key, &s.registry);
    CHECK(report.confidence != Confidence::High);
    CHECK(!report.display.has_value());
}

TEST_CASE("missing key and registry read as no access") {
    ValidationScene s;
    MediaAsset stripped = s.registered_asset;
    stripped.set_manifest_segment(std::nullopt);
    const ValidationReport report = validate(stripped, s.world.trust, nullptr, nullptr);
    REQUIRE(report.watermark.has_value());
    CHECK(report.watermark->state == WatermarkState::NoAccess);
    REQUIRE(report.fingerprint.has_value());
    CHECK(report.fingerprint->state == FingerprintState::NoAccess);
    CHECK(report.table_row == 17);
    CHECK(report.confidence == Confidence::CannotBeAsserted);
}

TEST_CASE("a low-security signer carries a caveat into the display") {
    const auto world = make_signer("device-cam", 82, SecurityLevel::DeviceLow);
    const PixelImage img = make_scene(852);
    Manifest m = fixtures::basic_manifest(img, "device-cam");
    m.security_level = SecurityLevel::DeviceLow;
    const MediaAsset asset =
        embed_manifest(MediaAsset{img}, sign_manifest(m, world.key, &world.trust));
    const ValidationReport report = validate(asset, world.trust, nullptr, nullptr);
    CHECK(report.confidence == Confidence::High);
    REQUIRE(report.display.has_value());
    CHECK(report.display->low_security_caveat);
    const std::string serialized = serialize_report(report);
    CHECK(serialized.find("low_security_caveat") != std::string::npos);
}

TEST_CASE("insecure metadata never influences the verdict") {
    ValidationScene s;
    MediaAsset noisy = s.registered_asset;
    noisy.set_insecure_meta({{"author", "Definitely A Real Person"},
                             {"capture_time", "1999-12-31"}});
    const ValidationReport a =
        validate(s.registered_asset, s.world.trust, &s.key, &s.registry);
    const ValidationReport b = validate(noisy, s.world.trust, &s.key, &s.registry);
    CHECK(serialize_report(a) == serialize_report(b));
    CHECK(serialize_report(b).find("Definitely A Real Person") == std::string::npos);
}

TEST_CASE("fingerprint matches demand human review") {
    ValidationScene s;
    // Modify pixels slightly: manifest breaks, watermark survives but we drop
    // the key, so the fingerprint is the only signal left.
    MediaAsset edited = s.registered_asset;
    PixelImage img = edited.image();
    img.samples[0] = uint8_t(img.samples[0] ^ 2);
    MediaAsset moved{img};
    const ValidationReport report = validate(moved, s.world.trust, nullptr, &s.registry);
    REQUIRE(report.fingerprint.has_value());
    CHECK(report.fingerprint->state == FingerprintState::ValidNoMatch);
    CHECK(report.needs_human_review);
}

TEST_CASE("report serialization is canonical and complete") {
    ValidationScene s;
    const ValidationReport report =
        validate(s.registered_asset, s.world.trust, &s.key, &s.registry);
    const std::string text = serialize_report(report);
    CHECK(text == serialize_report(report));
    CHECK(text.find("\"result\":\"Media Validates\"") != std::string::npos);
    CHECK(text.find("\"confidence\":\"High\"") != std::string::npos);
    CHECK(text.find("\"display\"") != std::string::npos);
}
