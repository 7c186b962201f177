#include <doctest.h>

#include <fstream>

#include "fixtures.hpp"
#include "mediaseal/hex.hpp"
#include "mediaseal/registry.hpp"

using namespace mediaseal;
using fixtures::make_scene;
using fixtures::make_signer;

namespace {

RegistryEntry entry_for(uint64_t seed, const fixtures::SignerWorld& world,
                        std::optional<uint64_t> watermark_id = std::nullopt,
                        int64_t stored_at = 1000) {
    const PixelImage img = make_scene(seed, 32, 32, 1);
    Manifest m = fixtures::basic_manifest(img, world.certificate_id, stored_at);
    m.watermark_id = watermark_id;
    RegistryEntry entry;
    entry.content_hash = m.content_hash;
    entry.signed_manifest = sign_manifest(m, world.key, &world.trust);
    entry.watermark_id = watermark_id;
    entry.fingerprints = {compute_fingerprint(img, FingerprintAlgorithm::BlockMean),
                          compute_fingerprint(img, FingerprintAlgorithm::DctWave)};
    entry.stored_at = stored_at;
    return entry;
}

std::string log_file(const fixtures::TempDir& dir) {
    return (dir.path / "entries.log").string();
}

} // namespace

TEST_CASE("entry serialization round trip") {
    const auto world = make_signer("cert-a", 60);
    const RegistryEntry entry = entry_for(800, world, 12345);
    const std::string line = serialize_entry(entry);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(parse_entry(line) == entry);
    CHECK(serialize_entry(parse_entry(line)) == line);
    CHECK_THROWS_AS(parse_entry("not json"), StoreError);
    CHECK_THROWS_AS(parse_entry("{}"), StoreError);
}

TEST_CASE("store and look up entries") {
    const auto world = make_signer("cert-a", 61);
    fixtures::TempDir dir("registry");
    Registry reg(dir.path);

    const RegistryEntry e1 = entry_for(801, world, 111, 1000);
    const RegistryEntry e2 = entry_for(802, world, std::nullopt, 2000);
    reg.store_entry(e1);
    reg.store_entry(e2);
    CHECK(reg.entry_count() == 2);

    const auto by_hash = reg.lookup_by_hash(e1.content_hash);
    REQUIRE(by_hash.kind == LookupKind::Found);
    CHECK(*by_hash.entry == e1);

    const auto by_wm = reg.lookup_by_watermark(111);
    REQUIRE(by_wm.kind == LookupKind::Found);
    CHECK(*by_wm.entry == e1);
    CHECK(reg.lookup_by_watermark(999).kind == LookupKind::NotFound);

    Digest missing{};
    CHECK(reg.lookup_by_hash(missing).kind == LookupKind::NotFound);
}

TEST_CASE("upsert by hash, watermark ids stay exclusive") {
    const auto world = make_signer("cert-a", 62);
    fixtures::TempDir dir("registry");
    Registry reg(dir.path);

    RegistryEntry e1 = entry_for(803, world, 500, 1000);
    reg.store_entry(e1);

    // Same hash again with new details is an upsert, not a duplicate.
    RegistryEntry updated = e1;
    updated.stored_at = 3000;
    reg.store_entry(updated);
    CHECK(reg.entry_count() == 1);
    CHECK(reg.lookup_by_hash(e1.content_hash).entry->stored_at == 3000);

    // The same watermark id bound to different pixels is rejected.
    const RegistryEntry clash = entry_for(804, world, 500, 4000);
    CHECK_THROWS_AS(reg.store_entry(clash), DuplicateWatermarkId);
    CHECK(reg.entry_count() == 1);

    // An invalid entry never reaches the log.
    RegistryEntry broken = entry_for(805, world);
    broken.content_hash[0] ^= 0xff;
    CHECK_THROWS_AS(reg.store_entry(broken), InvariantViolation);
}

TEST_CASE("fault injection relabels lookups") {
    const auto world = make_signer("cert-a", 63);
    fixtures::TempDir dir("registry");
    Registry reg(dir.path);
    const RegistryEntry e = entry_for(806, world, 700);
    reg.store_entry(e);

    reg.set_faults({FaultMode::NoAccess, FaultMode::Normal, FaultMode::Normal});
    CHECK(reg.lookup_by_hash(e.content_hash).kind == LookupKind::NoAccess);
    CHECK(!reg.lookup_by_hash(e.content_hash).entry.has_value());
    CHECK(reg.lookup_by_watermark(700).kind == LookupKind::Found);

    // MissingManifest reports Missing only when the entry would have resolved.
    reg.set_faults({FaultMode::MissingManifest, FaultMode::MissingManifest, FaultMode::Normal});
    CHECK(reg.lookup_by_hash(e.content_hash).kind == LookupKind::Missing);
    CHECK(reg.lookup_by_watermark(700).kind == LookupKind::Missing);
    Digest other{};
    CHECK(reg.lookup_by_hash(other).kind == LookupKind::NotFound);
    CHECK(reg.lookup_by_watermark(999).kind == LookupKind::NotFound);

    // Faults do not change stored data.
    reg.set_faults({});
    CHECK(*reg.lookup_by_hash(e.content_hash).entry == e);
}

TEST_CASE("fingerprint lookup ranks candidates") {
    const auto world = make_signer("cert-a", 64);
    fixtures::TempDir dir("registry");
    Registry reg(dir.path);

    const RegistryEntry near = entry_for(807, world, std::nullopt, 1000);
    const RegistryEntry far = entry_for(808, world, std::nullopt, 2000);
    reg.store_entry(near);
    reg.store_entry(far);

    const Fingerprint probe = near.fingerprints[0];
    const auto out = reg.lookup_by_fingerprint(probe, 64); // tau wide open
    REQUIRE(out.kind == LookupKind::Found);
    REQUIRE(!out.candidates.empty());
    CHECK(out.candidates.front().distance == 0);
    CHECK(out.candidates.front().entry == near);
    CHECK(out.candidates.front().needs_human_review);
    for (size_t i = 1; i < out.candidates.size(); ++i)
        CHECK(out.candidates[i - 1].distance <= out.candidates[i].distance);

    // A tight threshold filters the distant entry.
    const auto tight = reg.lookup_by_fingerprint(probe, 0);
    REQUIRE(tight.kind == LookupKind::Found);
    for (const auto& c : tight.candidates) CHECK(c.distance == 0);

    // No candidate within threshold.
    const Fingerprint nowhere{FingerprintAlgorithm::BlockMean, ~probe.bits};
    CHECK(reg.lookup_by_fingerprint(nowhere, 0).kind == LookupKind::NotFound);

    // Faulted subsystem.
    reg.set_faults({FaultMode::Normal, FaultMode::Normal, FaultMode::NoAccess});
    CHECK(reg.lookup_by_fingerprint(probe, 64).kind == LookupKind::NoAccess);
    reg.set_faults({FaultMode::Normal, FaultMode::Normal, FaultMode::MissingManifest});
    const auto missing = reg.lookup_by_fingerprint(probe, 64);
    CHECK(missing.kind == LookupKind::Missing);
    CHECK(!missing.candidates.empty()); // candidates survive the missing label
}

TEST_CASE("registry reopens from its log") {
    const auto world = make_signer("cert-a", 65);
    fixtures::TempDir dir("registry");
    const RegistryEntry e1 = entry_for(809, world, 42, 1000);
    const RegistryEntry e2 = entry_for(810, world, 43, 2000);
    {
        Registry reg(dir.path);
        reg.store_entry(e1);
        reg.store_entry(e2);
    }
    Registry reopened(dir.path);
    CHECK(reopened.entry_count() == 2);
    CHECK(*reopened.lookup_by_watermark(42).entry == e1);
    CHECK(*reopened.lookup_by_hash(e2.content_hash).entry == e2);
}

TEST_CASE("recovery truncates a torn tail") {
    const auto world = make_signer("cert-a", 66);
    fixtures::TempDir dir("registry");
    const RegistryEntry e1 = entry_for(811, world, 42, 1000);
    const RegistryEntry e2 = entry_for(812, world, 43, 2000);
    {
        Registry reg(dir.path);
        reg.store_entry(e1);
        reg.store_entry(e2);
    }

    SUBCASE("partial final line") {
        const auto size = std::filesystem::file_size(log_file(dir));
        std::filesystem::resize_file(log_file(dir), size - 10);
        Registry recovered(dir.path);
        CHECK(recovered.entry_count() == 1);
        CHECK(*recovered.lookup_by_watermark(42).entry == e1);
        CHECK(recovered.lookup_by_watermark(43).kind == LookupKind::NotFound);
        // The torn bytes are gone; a fresh store appends cleanly.
        recovered.store_entry(e2);
        Registry again(dir.path);
        CHECK(again.entry_count() == 2);
    }
    SUBCASE("appended garbage") {
        {
            std::ofstream out(log_file(dir), std::ios::app | std::ios::binary);
            out << "{\"torn\": tr";
        }
        Registry recovered(dir.path);
        CHECK(recovered.entry_count() == 2);
    }
    SUBCASE("fresh directory starts empty") {
        fixtures::TempDir other("registry-empty");
        Registry empty(other.path);
        CHECK(empty.entry_count() == 0);
    }
}
