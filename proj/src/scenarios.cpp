#include "mediaseal/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "mediaseal/rng.hpp"
#include "mediaseal/transform.hpp"

namespace mediaseal {

namespace {

// Smooth, structured test scene: gradients plus low-frequency waves and a
// little keyed noise, so watermarks and fingerprints behave like on a photo.
PixelImage make_scene(uint64_t seed, uint32_t w, uint32_t h, uint8_t channels) {
    Rng rng(seed);
    const double fx = 1.0 + rng.next_double() * 3.0;
    const double fy = 1.0 + rng.next_double() * 3.0;
    const double phase = rng.next_double() * 6.28318;
    PixelImage img = PixelImage::make(w, h, channels);
    for (uint32_t y = 0; y < h; ++y) {
        for (uint32_t x = 0; x < w; ++x) {
            const double base =
                110.0 + 60.0 * std::sin(fx * x / w * 6.28318 + phase) +
                50.0 * std::cos(fy * y / h * 6.28318) + 20.0 * (double(x) + y) / (w + h);
            for (uint8_t c = 0; c < channels; ++c) {
                const double v = base + 12.0 * c + rng.next_double() * 8.0;
                img.at(x, y, c) = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
    }
    return img;
}

nlohmann::json report_json(const ValidationReport& report) {
    return nlohmann::json::parse(serialize_report(report));
}

bool high_display_present(const ValidationReport& r) {
    return r.confidence == Confidence::High && r.display.has_value();
}

} // namespace

std::string serialize_scenario(const ScenarioResult& result) {
    return nlohmann::json{
        {"attack", to_string(result.attack_applied.name)},
        {"mitigated", result.mitigated},
        {"name", result.name},
        {"report_after", report_json(result.report_after)},
        {"report_before", report_json(result.report_before)},
        {"seed", result.attack_applied.seed},
    }.dump();
}

ScenarioResult scenario_authentic_faked_as_ai(uint64_t seed, bool low_confidence_stub) {
    const SigningKey key = generate_signing_key("studio-camera-01", seed ^ 0x51);
    CertificateRecord cert;
    cert.certificate_id = "studio-camera-01";
    cert.public_key = public_key_of(key);
    cert.owner_name = "Studio Photography";
    cert.security_level = SecurityLevel::CloudHigh;
    const TrustList trust = TrustList{}.with_record(cert);

    const PixelImage original = make_scene(seed, 64, 64, 3);
    Manifest captured;
    captured.signer_name = "Studio Photography";
    captured.assertions = {"camera-captured"};
    captured.actions.push_back({ActionKind::Created, std::nullopt, "studio-cam", 1000});
    captured.content_hash = hard_hash(original);
    captured.issued_at = 1000;
    const MediaAsset signed_original =
        embed_manifest(MediaAsset(original), sign_manifest(captured, key, &trust));

    // Subtle generative fill in a small region, recorded honestly on re-sign.
    const EditRegion region{24, 24, 40, 40};
    PixelImage edited = original;
    for (uint32_t y = region.top; y < region.bottom; ++y)
        for (uint32_t x = region.left; x < region.right; ++x)
            for (uint8_t c = 0; c < 3; ++c)
                edited.at(x, y, c) =
                    static_cast<uint8_t>(std::min(255, edited.at(x, y, c) + 3));

    Manifest revised = captured;
    revised.actions.push_back({ActionKind::AiInpainted, region, "gen-fill", 1001});
    revised.assertions.push_back("ai-inpainted-content");
    revised.ingredients.push_back({"original capture", hard_hash(original)});
    revised.content_hash = hard_hash(edited);
    revised.issued_at = 1001;
    const MediaAsset edited_asset =
        embed_manifest(MediaAsset(edited), sign_manifest(revised, key, &trust));

    ScenarioResult result;
    result.name = "authentic_faked_as_ai";
    result.attack_applied.name = AttackName::ResignWithCert;
    result.attack_applied.seed = seed;
    result.attack_applied.assertions = {"ai-inpainted-content"};
    result.report_before = validate(signed_original, trust, nullptr, nullptr);
    if (low_confidence_stub) {
        // A validator with no trust anchors: the limited-context experience.
        result.report_after = validate(edited_asset, TrustList{}, nullptr, nullptr);
    } else {
        result.report_after = validate(edited_asset, trust, nullptr, nullptr);
    }

    const ValidationReport& after = result.report_after;
    bool region_shown = false, thumbnail_shown = false;
    if (high_display_present(after)) {
        for (const auto& a : after.display->actions)
            if (a.region == region) region_shown = true;
        for (const auto& i : after.display->ingredients)
            if (i.thumbnail_hash) thumbnail_shown = true;
    }
    result.mitigated = region_shown && thumbnail_shown;
    return result;
}

ScenarioResult scenario_ai_faked_as_authentic(uint64_t seed) {
    const SigningKey gen_key = generate_signing_key("genai-cloud-01", seed ^ 0x52);
    const SigningKey stolen_key = generate_signing_key("news-photog-77", seed ^ 0x53);
    CertificateRecord gen_cert;
    gen_cert.certificate_id = "genai-cloud-01";
    gen_cert.public_key = public_key_of(gen_key);
    gen_cert.owner_name = "Image Generator Service";
    gen_cert.security_level = SecurityLevel::CloudHigh;
    CertificateRecord stolen_cert;
    stolen_cert.certificate_id = "news-photog-77";
    stolen_cert.public_key = public_key_of(stolen_key);
    stolen_cert.owner_name = "Trusted Photojournalist";
    stolen_cert.security_level = SecurityLevel::DeviceSecure;
    const TrustList trust = TrustList{}.with_record(gen_cert).with_record(stolen_cert);

    const PixelImage generated = make_scene(seed ^ 0x54, 64, 64, 3);
    const WatermarkKey wm_key = WatermarkKey::generate(WatermarkMode::Robust, seed ^ 0x55);
    const PixelImage watermarked =
        embed_watermark(generated, WatermarkPayload::from_id(seed | 1), wm_key);

    Manifest ai_manifest;
    ai_manifest.signer_name = "Image Generator Service";
    ai_manifest.assertions = {"ai-generated"};
    ai_manifest.actions.push_back({ActionKind::AiGenerated, std::nullopt, "gen", 2000});
    ai_manifest.content_hash = hard_hash(watermarked);
    ai_manifest.watermark_id = seed | 1;
    ai_manifest.issued_at = 2000;
    const MediaAsset ai_asset =
        embed_manifest(MediaAsset(watermarked), sign_manifest(ai_manifest, gen_key, &trust));

    // Strip both signals, then claim camera capture under the stolen identity.
    AttackSpec wash;
    wash.name = AttackName::RemoveWatermark;
    wash.seed = seed ^ 0x56;
    MediaAsset washed = run_attack(ai_asset, wash, {});
    washed.set_manifest_segment(std::nullopt);

    AttackSpec resign;
    resign.name = AttackName::ResignWithCert;
    resign.seed = seed;
    resign.assertions = {"camera-captured"};
    AttackContext ctx;
    ctx.signing_key = &stolen_key;
    const MediaAsset forged = run_attack(washed, resign, ctx);

    ScenarioResult result;
    result.name = "ai_faked_as_authentic";
    result.attack_applied = resign;
    result.report_before = validate(forged, trust, &wm_key, nullptr);

    const TrustList revoked = trust.revoke("news-photog-77", 3000);
    result.report_after = validate(forged, revoked, &wm_key, nullptr);

    const ValidationReport& after = result.report_after;
    result.mitigated = after.c2pa.has_concern(C2paConcern::Revoked) &&
                       after.confidence != Confidence::High && !after.display.has_value();
    return result;
}

ScenarioResult scenario_manipulated_metadata(uint64_t seed, bool echoing_validator) {
    const PixelImage image = make_scene(seed ^ 0x57, 48, 48, 1);
    MediaAsset asset{image};
    asset.set_insecure_meta({{"capture_time", "2026-01-05T10:00:00Z"}});

    AttackSpec tamper;
    tamper.name = AttackName::TamperInsecureMetadata;
    tamper.seed = seed;
    tamper.meta_key = "capture_time";
    tamper.meta_value = "1999-01-01T00:00:00Z";
    const MediaAsset tampered = run_attack(asset, tamper, {});

    ScenarioResult result;
    result.name = "manipulated_metadata";
    result.attack_applied = tamper;
    result.report_before = validate(asset, TrustList{}, nullptr, nullptr);
    result.report_after = validate(tampered, TrustList{}, nullptr, nullptr);
    if (echoing_validator)
        // Simulates a validator that repeats unsigned metadata in its output.
        result.report_after.concerns.push_back("capture_time: " + tamper.meta_value);

    const bool outcomes_unchanged =
        result.report_before.result == result.report_after.result &&
        result.report_before.confidence == result.report_after.confidence;
    const std::string after_text = serialize_report(result.report_after);
    const bool value_leaked = after_text.find(tamper.meta_value) != std::string::npos;
    result.mitigated = outcomes_unchanged && !value_leaked &&
                       !high_display_present(result.report_after);
    return result;
}

} // namespace mediaseal
