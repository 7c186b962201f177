#include "mediaseal/manifest.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>
#include <sodium.h>

#include "mediaseal/hex.hpp"
#include "mediaseal/rng.hpp"

namespace mediaseal {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw Error("libsodium initialization failed");
}

nlohmann::json region_to_json(const EditRegion& r) {
    return nlohmann::json{
        {"bottom", r.bottom}, {"left", r.left}, {"right", r.right}, {"top", r.top}};
}

EditRegion region_from_json(const nlohmann::json& j) {
    EditRegion r;
    r.left = j.at("left").get<uint32_t>();
    r.top = j.at("top").get<uint32_t>();
    r.right = j.at("right").get<uint32_t>();
    r.bottom = j.at("bottom").get<uint32_t>();
    r.check();
    return r;
}

nlohmann::json manifest_to_json(const Manifest& m) {
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : m.actions) {
        nlohmann::json aj{
            {"kind", to_string(a.kind)}, {"timestamp", a.timestamp}, {"tool", a.tool}};
        if (a.region) aj["region"] = region_to_json(*a.region);
        actions.push_back(std::move(aj));
    }
    nlohmann::json ingredients = nlohmann::json::array();
    for (const auto& i : m.ingredients) {
        nlohmann::json ij{{"description", i.description}};
        if (i.thumbnail_hash)
            ij["thumbnail_hash"] = to_hex(i.thumbnail_hash->data(), i.thumbnail_hash->size());
        ingredients.push_back(std::move(ij));
    }
    nlohmann::json j{
        {"actions", std::move(actions)},
        {"assertions", m.assertions},
        {"content_hash", to_hex(m.content_hash.data(), m.content_hash.size())},
        {"ingredients", std::move(ingredients)},
        {"issued_at", m.issued_at},
        {"security_level", to_string(m.security_level)},
        {"signer_name", m.signer_name},
    };
    if (m.watermark_id) j["watermark_id"] = *m.watermark_id;
    return j;
}

Manifest manifest_from_json(const nlohmann::json& j) {
    Manifest m;
    m.signer_name = j.at("signer_name").get<std::string>();
    m.assertions = j.at("assertions").get<std::vector<std::string>>();
    for (const auto& aj : j.at("actions")) {
        Action a;
        a.kind = action_kind_from_string(aj.at("kind").get<std::string>());
        a.tool = aj.at("tool").get<std::string>();
        a.timestamp = aj.at("timestamp").get<int64_t>();
        if (aj.contains("region")) a.region = region_from_json(aj["region"]);
        m.actions.push_back(std::move(a));
    }
    for (const auto& ij : j.at("ingredients")) {
        Ingredient i;
        i.description = ij.at("description").get<std::string>();
        if (ij.contains("thumbnail_hash")) {
            auto bytes = from_hex(ij["thumbnail_hash"].get<std::string>());
            if (!bytes || bytes->size() != 32) throw Error("bad thumbnail hash");
            Digest d;
            std::copy(bytes->begin(), bytes->end(), d.begin());
            i.thumbnail_hash = d;
        }
        m.ingredients.push_back(std::move(i));
    }
    auto hash = from_hex(j.at("content_hash").get<std::string>());
    if (!hash || hash->size() != 32) throw Error("bad content hash");
    std::copy(hash->begin(), hash->end(), m.content_hash.begin());
    if (j.contains("watermark_id")) m.watermark_id = j["watermark_id"].get<uint64_t>();
    m.security_level = security_level_from_string(j.at("security_level").get<std::string>());
    m.issued_at = j.at("issued_at").get<int64_t>();
    m.check();
    return m;
}

} // namespace

std::string to_string(ActionKind kind) {
    switch (kind) {
    case ActionKind::Created: return "created";
    case ActionKind::Opened: return "opened";
    case ActionKind::AiGenerated: return "ai_generated";
    case ActionKind::AiInpainted: return "ai_inpainted";
    case ActionKind::ColorEdit: return "color_edit";
    case ActionKind::DeletedContent: return "deleted_content";
    case ActionKind::Imported: return "imported";
    }
    return "created";
}

ActionKind action_kind_from_string(const std::string& s) {
    if (s == "created") return ActionKind::Created;
    if (s == "opened") return ActionKind::Opened;
    if (s == "ai_generated") return ActionKind::AiGenerated;
    if (s == "ai_inpainted") return ActionKind::AiInpainted;
    if (s == "color_edit") return ActionKind::ColorEdit;
    if (s == "deleted_content") return ActionKind::DeletedContent;
    if (s == "imported") return ActionKind::Imported;
    throw Error("unknown action kind: " + s);
}

void Manifest::check() const {
    if (issued_at <= 0) throw InvariantViolation("issued_at must be positive");
    for (const auto& a : actions) {
        if ((a.kind == ActionKind::AiInpainted || a.kind == ActionKind::DeletedContent) &&
            !a.region)
            throw InvariantViolation(to_string(a.kind) + " action requires a region");
        if (a.region) a.region->check();
    }
}

std::vector<uint8_t> canonical_bytes(const Manifest& manifest) {
    manifest.check();
    const std::string text = manifest_to_json(manifest).dump();
    return std::vector<uint8_t>(text.begin(), text.end());
}

std::vector<uint8_t> serialize_signed_manifest(const SignedManifest& sm) {
    nlohmann::json j{
        {"certificate_id", sm.certificate_id},
        {"manifest", manifest_to_json(sm.manifest)},
        {"signature", to_hex(sm.signature.data(), sm.signature.size())},
    };
    const std::string text = j.dump();
    return std::vector<uint8_t>(text.begin(), text.end());
}

SignedManifest parse_signed_manifest(const std::vector<uint8_t>& bytes) {
    nlohmann::json j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (!j.is_object()) throw MalformedManifestSegment("C2PM payload is not a JSON object");
    try {
        SignedManifest sm;
        sm.certificate_id = j.at("certificate_id").get<std::string>();
        sm.manifest = manifest_from_json(j.at("manifest"));
        auto sig = from_hex(j.at("signature").get<std::string>());
        if (!sig || sig->size() != 64) throw MalformedManifestSegment("bad signature encoding");
        std::copy(sig->begin(), sig->end(), sm.signature.begin());
        return sm;
    } catch (const MalformedManifestSegment&) {
        throw;
    } catch (const std::exception& e) {
        throw MalformedManifestSegment(std::string("undecodable manifest: ") + e.what());
    }
}

Digest sha256(const uint8_t* data, size_t len) {
    ensure_sodium();
    Digest out;
    crypto_hash_sha256(out.data(), data, len);
    return out;
}

Digest hard_hash(const PixelImage& image) {
    image.check();
    const auto payload = pixl_payload(image);
    return sha256(payload.data(), payload.size());
}

SigningKey generate_signing_key(const std::string& certificate_id, uint64_t seed) {
    ensure_sodium();
    Rng rng(seed);
    std::array<uint8_t, crypto_sign_SEEDBYTES> sk_seed;
    for (size_t i = 0; i < sk_seed.size(); i += 8) {
        const uint64_t v = rng.next_u64();
        for (size_t j = 0; j < 8; ++j) sk_seed[i + j] = static_cast<uint8_t>(v >> (8 * j));
    }
    SigningKey key;
    key.certificate_id = certificate_id;
    Ed25519PublicKey pk;
    crypto_sign_seed_keypair(pk.data(), key.secret.data(), sk_seed.data());
    return key;
}

Ed25519PublicKey public_key_of(const SigningKey& key) {
    ensure_sodium();
    Ed25519PublicKey pk;
    crypto_sign_ed25519_sk_to_pk(pk.data(), key.secret.data());
    return pk;
}

SignedManifest sign_manifest(const Manifest& manifest, const SigningKey& key,
                             const TrustList* trust) {
    ensure_sodium();
    if (trust) {
        auto res = trust->lookup(key.certificate_id);
        if (res.status == LookupStatus::Unknown)
            throw UnknownCertificate("certificate not on trust list: " + key.certificate_id);
        if (res.record->public_key != public_key_of(key))
            throw KeyMismatch("signing key does not match certificate " + key.certificate_id);
    }
    const auto bytes = canonical_bytes(manifest);
    SignedManifest sm;
    sm.manifest = manifest;
    sm.certificate_id = key.certificate_id;
    crypto_sign_detached(sm.signature.data(), nullptr, bytes.data(), bytes.size(),
                         key.secret.data());
    return sm;
}

MediaAsset embed_manifest(const MediaAsset& asset, const SignedManifest& signed_manifest) {
    if (signed_manifest.manifest.content_hash != hard_hash(asset.image()))
        throw HashMismatch("manifest content hash does not match asset pixels");
    MediaAsset out = asset;
    out.set_manifest_segment(serialize_signed_manifest(signed_manifest));
    return out;
}

std::string to_string(C2paConcern c) {
    switch (c) {
    case C2paConcern::BadSignature: return "bad_signature";
    case C2paConcern::UntrustedSigner: return "untrusted_signer";
    case C2paConcern::Revoked: return "revoked";
    case C2paConcern::Malformed: return "malformed";
    }
    return "bad_signature";
}

bool C2paOutcome::has_concern(C2paConcern c) const {
    return std::find(concerns.begin(), concerns.end(), c) != concerns.end();
}

C2paOutcome validate_manifest(const MediaAsset& asset, const TrustList& trust) {
    ensure_sodium();
    const auto segment = asset.manifest_segment();
    if (!segment) return {C2paStatus::NotPresent, std::nullopt, {}};

    SignedManifest sm;
    try {
        sm = parse_signed_manifest(*segment);
    } catch (const MalformedManifestSegment&) {
        return {C2paStatus::NotPresent, std::nullopt,
                {C2paConcern::Malformed, C2paConcern::BadSignature}};
    }

    const auto res = trust.lookup(sm.certificate_id);
    if (res.status == LookupStatus::Unknown)
        return {C2paStatus::NotPresent, std::nullopt,
                {C2paConcern::UntrustedSigner, C2paConcern::BadSignature}};

    const auto bytes = canonical_bytes(sm.manifest);
    const bool sig_ok = crypto_sign_verify_detached(sm.signature.data(), bytes.data(),
                                                    bytes.size(),
                                                    res.record->public_key.data()) == 0;
    if (res.status == LookupStatus::Revoked) {
        std::vector<C2paConcern> concerns{C2paConcern::Revoked};
        if (!sig_ok) concerns.push_back(C2paConcern::BadSignature);
        return {C2paStatus::NotPresent, std::nullopt, std::move(concerns)};
    }
    if (!sig_ok)
        return {C2paStatus::NotPresent, std::nullopt, {C2paConcern::BadSignature}};

    if (sm.manifest.content_hash == hard_hash(asset.image()))
        return {C2paStatus::PresentHashMatch, sm.manifest, {}};
    return {C2paStatus::PresentHashNoMatch, sm.manifest, {}};
}

} // namespace mediaseal
