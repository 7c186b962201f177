#include "mediaseal/attacks.hpp"

#include <algorithm>

#include "mediaseal/transform.hpp"

namespace mediaseal {

std::string to_string(AttackName name) {
    switch (name) {
    case AttackName::StripManifest: return "strip_manifest";
    case AttackName::ResignWithCert: return "resign_with_cert";
    case AttackName::ForgePerceptibleMark: return "forge_perceptible_mark";
    case AttackName::CopyPasteRegion: return "copy_paste_region";
    case AttackName::RetroactiveFalseAssertion: return "retroactive_false_assertion";
    case AttackName::TamperInsecureMetadata: return "tamper_insecure_metadata";
    case AttackName::RemoveWatermark: return "remove_watermark";
    case AttackName::ForgeWatermark: return "forge_watermark";
    case AttackName::PerturbFingerprint: return "perturb_fingerprint";
    case AttackName::CraftHashCollision: return "craft_hash_collision";
    case AttackName::RegistryDos: return "registry_dos";
    }
    return "strip_manifest";
}

AttackName attack_name_from_string(const std::string& s) {
    static const std::pair<const char*, AttackName> names[] = {
        {"strip_manifest", AttackName::StripManifest},
        {"resign_with_cert", AttackName::ResignWithCert},
        {"forge_perceptible_mark", AttackName::ForgePerceptibleMark},
        {"copy_paste_region", AttackName::CopyPasteRegion},
        {"retroactive_false_assertion", AttackName::RetroactiveFalseAssertion},
        {"tamper_insecure_metadata", AttackName::TamperInsecureMetadata},
        {"remove_watermark", AttackName::RemoveWatermark},
        {"forge_watermark", AttackName::ForgeWatermark},
        {"perturb_fingerprint", AttackName::PerturbFingerprint},
        {"craft_hash_collision", AttackName::CraftHashCollision},
        {"registry_dos", AttackName::RegistryDos},
    };
    for (const auto& [text, name] : names)
        if (s == text) return name;
    throw Error("unknown attack: " + s);
}

namespace {

MediaAsset with_image(const MediaAsset& asset, PixelImage image) {
    MediaAsset out = asset;
    out.set_image(std::move(image));
    return out;
}

MediaAsset resign(const MediaAsset& asset, const AttackSpec& spec,
                  const AttackContext& ctx, bool keep_existing_history) {
    if (!ctx.signing_key) throw MissingContext("resigning needs a certificate key");

    Manifest manifest;
    const auto segment = asset.manifest_segment();
    if (keep_existing_history) {
        if (!segment)
            throw MissingContext("retroactive assertion needs an existing manifest");
        manifest = parse_signed_manifest(*segment).manifest;
    } else if (segment) {
        manifest = parse_signed_manifest(*segment).manifest;
    } else {
        manifest.signer_name = ctx.signing_key->certificate_id;
        manifest.issued_at = 1;
        manifest.actions.push_back({ActionKind::Created, std::nullopt, "unknown", 1});
    }
    manifest.content_hash = hard_hash(asset.image());
    for (const auto& a : spec.assertions) manifest.assertions.push_back(a);

    // Signed without a trust-list check: the attacker holds the raw key.
    MediaAsset out = asset;
    out.set_manifest_segment(
        serialize_signed_manifest(sign_manifest(manifest, *ctx.signing_key)));
    return out;
}

MediaAsset copy_paste(const MediaAsset& asset, const AttackSpec& spec,
                      const AttackContext& ctx) {
    if (!ctx.donor) throw MissingContext("copy_paste_region needs a donor asset");
    if (!spec.region) throw MissingContext("copy_paste_region needs a region");
    spec.region->check();
    const PixelImage& src = ctx.donor->image();
    PixelImage dst = asset.image();
    if (src.channels != dst.channels)
        throw BadTransformParams("donor channel count differs");
    const uint32_t right = std::min({spec.region->right, src.width, dst.width});
    const uint32_t bottom = std::min({spec.region->bottom, src.height, dst.height});
    for (uint32_t y = spec.region->top; y < bottom; ++y)
        for (uint32_t x = spec.region->left; x < right; ++x)
            for (uint8_t c = 0; c < dst.channels; ++c) dst.at(x, y, c) = src.at(x, y, c);
    return with_image(asset, std::move(dst));
}

} // namespace

MediaAsset run_attack(const MediaAsset& asset, const AttackSpec& spec,
                      const AttackContext& ctx) {
    switch (spec.name) {
    case AttackName::StripManifest: {
        MediaAsset out = asset;
        out.set_manifest_segment(std::nullopt);
        return out;
    }
    case AttackName::ResignWithCert: return resign(asset, spec, ctx, false);
    case AttackName::RetroactiveFalseAssertion: return resign(asset, spec, ctx, true);
    case AttackName::ForgePerceptibleMark:
        return with_image(asset, apply_perceptible_mark(asset.image(), spec.mark_text));
    case AttackName::CopyPasteRegion: return copy_paste(asset, spec, ctx);
    case AttackName::TamperInsecureMetadata: {
        MediaAsset out = asset;
        auto meta = out.insecure_meta();
        auto it = meta.find(spec.meta_key);
        if (it == meta.end()) return out; // nonexistent key: no-op
        it->second = spec.meta_value;
        out.set_insecure_meta(meta);
        return out;
    }
    case AttackName::RemoveWatermark: {
        // Off-ladder rescale plus noise well past the quantization margin.
        PixelImage img = add_gaussian_noise(asset.image(), 12.0, spec.seed);
        img = rescale_image(img, 0.9);
        return with_image(asset, std::move(img));
    }
    case AttackName::ForgeWatermark: {
        if (!ctx.watermark_key) throw MissingContext("forge_watermark needs the key");
        if (!ctx.donor) throw MissingContext("forge_watermark needs a watermarked donor");
        return with_image(asset,
                          forge_watermark(ctx.donor->image(), asset.image(),
                                          *ctx.watermark_key));
    }
    case AttackName::PerturbFingerprint: {
        // Push past tau from the original by steering toward its complement.
        const Fingerprint original = compute_fingerprint(asset.image(), spec.algorithm);
        const Fingerprint far_target{spec.algorithm, ~original.bits};
        PixelImage img = asset.image();
        uint64_t spent = 0;
        while (spent < spec.budget) {
            const auto result = craft_collision(far_target, img, 64);
            img = result.image;
            spent += std::max<uint64_t>(result.iterations, 1);
            if (hamming_distance(compute_fingerprint(img, spec.algorithm), original) >
                spec.tau)
                break;
        }
        return with_image(asset, std::move(img));
    }
    case AttackName::CraftHashCollision: {
        if (!spec.target) throw MissingContext("craft_hash_collision needs a target");
        return with_image(asset, craft_collision(*spec.target, asset.image(),
                                                 spec.budget).image);
    }
    case AttackName::RegistryDos: {
        if (!ctx.registry) throw MissingContext("registry_dos needs a registry handle");
        ctx.registry->set_faults(
            {FaultMode::NoAccess, FaultMode::NoAccess, FaultMode::NoAccess});
        return asset;
    }
    }
    throw Error("unhandled attack");
}

} // namespace mediaseal
