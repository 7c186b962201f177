#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mediaseal/registry.hpp"
#include "mediaseal/validation.hpp"
#include "mediaseal/watermark.hpp"

namespace mediaseal {

enum class AttackName {
    StripManifest,
    ResignWithCert,
    ForgePerceptibleMark,
    CopyPasteRegion,
    RetroactiveFalseAssertion,
    TamperInsecureMetadata,
    RemoveWatermark,
    ForgeWatermark,
    PerturbFingerprint,
    CraftHashCollision,
    RegistryDos,
};

std::string to_string(AttackName name);
AttackName attack_name_from_string(const std::string& s);

struct AttackSpec {
    AttackName name = AttackName::StripManifest;
    uint64_t seed = 0;
    std::vector<std::string> assertions;  // resign / retroactive variants
    std::string meta_key, meta_value;     // tamper_insecure_metadata
    std::optional<EditRegion> region;     // copy_paste_region
    std::string mark_text = "AI";         // forge_perceptible_mark
    FingerprintAlgorithm algorithm = FingerprintAlgorithm::BlockMean;
    int tau = 10;                         // perturb_fingerprint margin
    uint64_t budget = 10000;              // perturbation budgets
    std::optional<Fingerprint> target;    // craft_hash_collision
};

// Capabilities an attack assumes; a variant that needs one that is absent
// throws MissingContext.
struct AttackContext {
    const SigningKey* signing_key = nullptr;   // stolen or attacker-owned cert key
    const WatermarkKey* watermark_key = nullptr;
    const MediaAsset* donor = nullptr;         // source asset for transplants
    Registry* registry = nullptr;              // for denial-of-service fault injection
};

// Deterministic given (spec, seed); pure except registry_dos, which flips the
// registry's fault-injection switches.
MediaAsset run_attack(const MediaAsset& asset, const AttackSpec& spec,
                      const AttackContext& context);

} // namespace mediaseal
