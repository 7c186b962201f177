#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mediaseal/container.hpp"
#include "mediaseal/trust.hpp"

namespace mediaseal {

using Digest = std::array<uint8_t, 32>;
using Signature = std::array<uint8_t, 64>;
using Ed25519SecretKey = std::array<uint8_t, 64>;
using Ed25519PublicKey = std::array<uint8_t, 32>;

// Inclusive-exclusive pixel box.
struct EditRegion {
    uint32_t left = 0, top = 0, right = 0, bottom = 0;

    bool operator==(const EditRegion&) const = default;

    void check() const {
        if (left >= right || top >= bottom)
            throw InvariantViolation("edit region must have positive area");
    }
};

enum class ActionKind {
    Created,
    Opened,
    AiGenerated,
    AiInpainted,
    ColorEdit,
    DeletedContent,
    Imported,
};

std::string to_string(ActionKind kind);
ActionKind action_kind_from_string(const std::string& s);

struct Action {
    ActionKind kind = ActionKind::Created;
    std::optional<EditRegion> region;
    std::string tool;
    int64_t timestamp = 0;

    bool operator==(const Action&) const = default;
};

struct Ingredient {
    std::string description;
    std::optional<Digest> thumbnail_hash; // digest of the input asset's PIXL segment

    bool operator==(const Ingredient&) const = default;
};

struct Manifest {
    std::string signer_name;
    std::vector<std::string> assertions;
    std::vector<Action> actions;
    std::vector<Ingredient> ingredients;
    Digest content_hash{};
    std::optional<uint64_t> watermark_id;
    SecurityLevel security_level = SecurityLevel::CloudHigh;
    int64_t issued_at = 0;

    bool operator==(const Manifest&) const = default;

    void check() const;
};

struct SignedManifest {
    Manifest manifest;
    std::string certificate_id;
    Signature signature{};

    bool operator==(const SignedManifest&) const = default;
};

// Canonical JSON: keys sorted by UTF-8 bytes, no insignificant whitespace,
// digests as lowercase hex. Equal manifests yield equal bytes.
std::vector<uint8_t> canonical_bytes(const Manifest& manifest);

std::vector<uint8_t> serialize_signed_manifest(const SignedManifest& signed_manifest);
SignedManifest parse_signed_manifest(const std::vector<uint8_t>& bytes); // throws MalformedManifestSegment

// SHA-256 over the PIXL segment payload.
Digest hard_hash(const PixelImage& image);
Digest sha256(const uint8_t* data, size_t len);

struct SigningKey {
    std::string certificate_id;
    Ed25519SecretKey secret{};
};

SigningKey generate_signing_key(const std::string& certificate_id, uint64_t seed);
Ed25519PublicKey public_key_of(const SigningKey& key);

// Deterministic Ed25519 over canonical_bytes(manifest). When a trust list is
// given, the key must match the certificate's registered public key.
SignedManifest sign_manifest(const Manifest& manifest, const SigningKey& key,
                             const TrustList* trust = nullptr);

// Binds the manifest into the asset's C2PM segment. Refuses a manifest whose
// content hash disagrees with the pixels.
MediaAsset embed_manifest(const MediaAsset& asset, const SignedManifest& signed_manifest);

enum class C2paStatus { NotPresent, PresentHashNoMatch, PresentHashMatch };

enum class C2paConcern { BadSignature, UntrustedSigner, Revoked, Malformed };

std::string to_string(C2paConcern c);

struct C2paOutcome {
    C2paStatus status = C2paStatus::NotPresent;
    std::optional<Manifest> manifest; // present for the two Present states
    std::vector<C2paConcern> concerns;

    bool has_concern(C2paConcern c) const;
};

// Footnote-21 style validation: presence, signature + trust, hash comparison.
// Invalid, untrusted, revoked, or undecodable manifests map to NotPresent with
// concern annotations; any failure to authenticate the segment also carries
// BadSignature so tampering is always surfaced as a broken signature.
C2paOutcome validate_manifest(const MediaAsset& asset, const TrustList& trust);

} // namespace mediaseal
