#include <doctest.h>

#include "fixtures.hpp"
#include "mediaseal/oracle_attack.hpp"
#include "mediaseal/scenarios.hpp"

using namespace mediaseal;
using fixtures::make_scene;
using fixtures::make_signer;

TEST_CASE("attack names round trip") {
    for (const auto name :
         {AttackName::StripManifest, AttackName::ResignWithCert,
          AttackName::ForgePerceptibleMark, AttackName::CopyPasteRegion,
          AttackName::RetroactiveFalseAssertion, AttackName::TamperInsecureMetadata,
          AttackName::RemoveWatermark, AttackName::ForgeWatermark,
          AttackName::PerturbFingerprint, AttackName::CraftHashCollision,
          AttackName::RegistryDos})
        CHECK(attack_name_from_string(to_string(name)) == name);
    CHECK_THROWS(attack_name_from_string("stare_menacingly"));
}

TEST_CASE("individual attacks behave as labelled") {
    const auto world = make_signer("cert-a", 90);
    const PixelImage img = make_scene(900);
    const MediaAsset signed_asset = fixtures::signed_asset(img, world);

    SUBCASE("strip_manifest leaves an unsigned asset") {
        const MediaAsset out = run_attack(signed_asset, {AttackName::StripManifest}, {});
        CHECK(!out.manifest_segment().has_value());
        CHECK(check_c2pa(out, world.trust).status == C2paStatus::NotPresent);
        CHECK(out.image() == signed_asset.image());
    }
    SUBCASE("resign_with_cert forges a fresh trusted signature") {
        PixelImage edited = img;
        edited.samples[0] ^= 4; // break the original hash first
        MediaAsset moved{edited};
        moved.set_manifest_segment(signed_asset.manifest_segment());
        CHECK(check_c2pa(moved, world.trust).status == C2paStatus::PresentHashNoMatch);

        AttackSpec spec{AttackName::ResignWithCert};
        spec.assertions = {"totally-authentic"};
        AttackContext ctx;
        ctx.signing_key = &world.key;
        const MediaAsset out = run_attack(moved, spec, ctx);
        const auto c2pa = check_c2pa(out, world.trust);
        CHECK(c2pa.status == C2paStatus::PresentHashMatch); // the attack succeeds
        REQUIRE(c2pa.manifest.has_value());
        CHECK(std::count(c2pa.manifest->assertions.begin(),
                         c2pa.manifest->assertions.end(), "totally-authentic") == 1);

        CHECK_THROWS_AS(run_attack(moved, spec, {}), MissingContext);
    }
    SUBCASE("retroactive_false_assertion needs a manifest to rewrite") {
        AttackSpec spec{AttackName::RetroactiveFalseAssertion};
        spec.assertions = {"always-was-a-camera-photo"};
        AttackContext ctx;
        ctx.signing_key = &world.key;
        const MediaAsset out = run_attack(signed_asset, spec, ctx);
        const auto c2pa = check_c2pa(out, world.trust);
        CHECK(c2pa.status == C2paStatus::PresentHashMatch);
        // History kept, lie appended.
        CHECK(c2pa.manifest->assertions.front() == "camera-captured");
        CHECK(c2pa.manifest->assertions.back() == "always-was-a-camera-photo");

        CHECK_THROWS_AS(run_attack(MediaAsset{img}, spec, ctx), MissingContext);
    }
    SUBCASE("forge_perceptible_mark stamps the overlay") {
        const MediaAsset out =
            run_attack(MediaAsset{img}, {AttackName::ForgePerceptibleMark}, {});
        CHECK(has_perceptible_mark(out.image()));
    }
    SUBCASE("copy_paste_region transplants donor pixels") {
        const MediaAsset donor{make_scene(901)};
        AttackSpec spec{AttackName::CopyPasteRegion};
        spec.region = EditRegion{8, 8, 24, 24};
        AttackContext ctx;
        ctx.donor = &donor;
        const MediaAsset out = run_attack(MediaAsset{img}, spec, ctx);
        CHECK(out.image().at(10, 10) == donor.image().at(10, 10));
        CHECK(out.image().at(0, 0) == img.at(0, 0));
        CHECK_THROWS_AS(run_attack(MediaAsset{img}, spec, {}), MissingContext);
        AttackSpec no_region{AttackName::CopyPasteRegion};
        CHECK_THROWS_AS(run_attack(MediaAsset{img}, no_region, ctx), MissingContext);
    }
    SUBCASE("tamper_insecure_metadata only rewrites existing keys") {
        MediaAsset asset{img};
        asset.set_insecure_meta({{"capture_time", "2026-01-05"}});
        AttackSpec spec{AttackName::TamperInsecureMetadata};
        spec.meta_key = "capture_time";
        spec.meta_value = "1999-01-01";
        const MediaAsset out = run_attack(asset, spec, {});
        CHECK(out.insecure_meta().at("capture_time") == "1999-01-01");

        spec.meta_key = "nonexistent";
        const MediaAsset untouched = run_attack(asset, spec, {});
        CHECK(untouched == asset);
    }
    SUBCASE("remove_watermark defeats detection") {
        const WatermarkKey key = WatermarkKey::generate(WatermarkMode::Robust, 91);
        const PixelImage marked = embed_watermark(img, WatermarkPayload::from_id(5), key);
        AttackSpec spec{AttackName::RemoveWatermark};
        spec.seed = 92;
        const MediaAsset out = run_attack(MediaAsset{marked}, spec, {});
        CHECK(decode_watermark(out.image(), key).status == DetectionStatus::Undetectable);
    }
    SUBCASE("forge_watermark steals a payload for new pixels") {
        const WatermarkKey key = WatermarkKey::generate(WatermarkMode::Robust, 93);
        const MediaAsset donor{embed_watermark(img, WatermarkPayload::from_id(5150), key)};
        AttackSpec spec{AttackName::ForgeWatermark};
        AttackContext ctx;
        ctx.watermark_key = &key;
        ctx.donor = &donor;
        const MediaAsset out = run_attack(MediaAsset{make_scene(902)}, spec, ctx);
        const auto detected = decode_watermark(out.image(), key);
        REQUIRE(detected.status == DetectionStatus::Detected);
        CHECK(detected.payload->id == 5150);
        CHECK_THROWS_AS(run_attack(MediaAsset{make_scene(902)}, spec, {}), MissingContext);
    }
    SUBCASE("perturb_fingerprint pushes past the match threshold") {
        AttackSpec spec{AttackName::PerturbFingerprint};
        spec.tau = 10;
        const Fingerprint before =
            compute_fingerprint(img, FingerprintAlgorithm::BlockMean);
        const MediaAsset out = run_attack(MediaAsset{img}, spec, {});
        const Fingerprint after =
            compute_fingerprint(out.image(), FingerprintAlgorithm::BlockMean);
        CHECK(hamming_distance(before, after) > 10);
    }
    SUBCASE("craft_hash_collision reuses the crafting engine") {
        const Fingerprint target =
            compute_fingerprint(make_scene(903, 16, 16, 1), FingerprintAlgorithm::BlockMean);
        AttackSpec spec{AttackName::CraftHashCollision};
        spec.target = target;
        const MediaAsset out = run_attack(MediaAsset{make_scene(904, 16, 16, 1)}, spec, {});
        CHECK(hamming_distance(compute_fingerprint(out.image(),
                                                   FingerprintAlgorithm::BlockMean),
                               target) <= 2);
        AttackSpec no_target{AttackName::CraftHashCollision};
        CHECK_THROWS_AS(run_attack(MediaAsset{img}, no_target, {}), MissingContext);
    }
    SUBCASE("registry_dos flips every fault switch") {
        fixtures::TempDir dir("dos");
        Registry registry(dir.path);
        AttackContext ctx;
        ctx.registry = &registry;
        run_attack(MediaAsset{img}, {AttackName::RegistryDos}, ctx);
        const FaultInjection faults = registry.faults();
        CHECK(faults.manifest_lookup == FaultMode::NoAccess);
        CHECK(faults.watermark_lookup == FaultMode::NoAccess);
        CHECK(faults.fingerprint_lookup == FaultMode::NoAccess);
        CHECK_THROWS_AS(run_attack(MediaAsset{img}, {AttackName::RegistryDos}, {}),
                        MissingContext);
    }
}

TEST_CASE("scenario: authentic content passed off as edited") {
    const ScenarioResult r = scenario_authentic_faked_as_ai(1234);
    CHECK(r.name == "authentic_faked_as_ai");
    CHECK(r.mitigated); // provenance shows the edit region and ingredient
    CHECK(r.report_after.confidence == Confidence::High);
    REQUIRE(r.report_after.display.has_value());

    // A validator with no trust anchors cannot show the provenance.
    const ScenarioResult stub = scenario_authentic_faked_as_ai(1234, true);
    CHECK(!stub.mitigated);
    CHECK(stub.report_after.confidence != Confidence::High);
}

TEST_CASE("scenario: ai content laundered as authentic") {
    const ScenarioResult r = scenario_ai_faked_as_authentic(1234);
    CHECK(r.name == "ai_faked_as_authentic");
    // The pre-revocation gap: the stolen certificate validates cleanly.
    CHECK(r.report_before.result == ValidationResult::MediaValidates);
    CHECK(r.report_before.confidence == Confidence::High);
    // After revocation the lie is refused.
    CHECK(r.mitigated);
    CHECK(r.report_after.c2pa.has_concern(C2paConcern::Revoked));
    CHECK(!r.report_after.display.has_value());
}

TEST_CASE("scenario: insecure metadata manipulation") {
    const ScenarioResult r = scenario_manipulated_metadata(1234);
    CHECK(r.name == "manipulated_metadata");
    CHECK(r.mitigated); // outcomes unchanged, tampered value never echoed
    CHECK(r.report_before.result == r.report_after.result);

    const ScenarioResult echo = scenario_manipulated_metadata(1234, true);
    CHECK(!echo.mitigated); // a leaking validator defeats the protection
}

TEST_CASE("scenarios are deterministic per seed") {
    CHECK(serialize_scenario(scenario_authentic_faked_as_ai(7)) ==
          serialize_scenario(scenario_authentic_faked_as_ai(7)));
    CHECK(serialize_scenario(scenario_ai_faked_as_authentic(7)) ==
          serialize_scenario(scenario_ai_faked_as_authentic(7)));
    CHECK(serialize_scenario(scenario_manipulated_metadata(7)) ==
          serialize_scenario(scenario_manipulated_metadata(7)));
    // Different seeds change the underlying media.
    CHECK(serialize_scenario(scenario_ai_faked_as_authentic(7)) !=
          serialize_scenario(scenario_ai_faked_as_authentic(8)));
}

TEST_CASE("oracle access asymmetry") {
    OracleAttackConfig config;
    config.seed = 5;
    config.query_budget = 20000;
    const OracleAttackResult internal =
        oracle_attack_simulation(OracleEndpoint::InternalConfidence, config);
    const OracleAttackResult pub =
        oracle_attack_simulation(OracleEndpoint::PublicRateLimited, config);

    CHECK(internal.succeeded);
    CHECK(internal.denied == 0);
    CHECK(internal.queries > 0);
    // The leaking endpoint is strictly cheaper than the hardened one.
    CHECK(internal.effective_cost < pub.effective_cost);
    if (pub.succeeded) CHECK(internal.queries < pub.queries + pub.denied);
    CHECK(pub.elapsed >= pub.queries * 1.0); // waits are part of the bill

    // Deterministic per seed.
    const OracleAttackResult again =
        oracle_attack_simulation(OracleEndpoint::InternalConfidence, config);
    CHECK(again.queries == internal.queries);
    CHECK(again.final_distortion == internal.final_distortion);

    // A zero budget exhausts immediately.
    OracleAttackConfig broke = config;
    broke.query_budget = 0;
    const OracleAttackResult starved =
        oracle_attack_simulation(OracleEndpoint::PublicRateLimited, broke);
    CHECK(!starved.succeeded);
    CHECK(starved.queries == 0);
}
