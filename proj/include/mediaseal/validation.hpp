#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mediaseal/manifest.hpp"
#include "mediaseal/registry.hpp"
#include "mediaseal/watermark.hpp"

namespace mediaseal {

// The five watermark validation states.
enum class WatermarkState {
    DetectableMatch,
    DetectableNoMatch,
    DetectableMissing,
    NoAccess,
    Undetectable,
};

// The five fingerprint validation states.
enum class FingerprintState {
    ValidMatch,
    ValidNoMatch,
    ValidMissing,
    NoAccess,
    Invalid,
};

enum class ValidationResult { Indeterminate, MediaModified, PossibleMatch, Match, MediaValidates };
enum class Confidence { High, Low, Lowest, CannotBeAsserted };

std::string to_string(WatermarkState s);
std::string to_string(FingerprintState s);
std::string to_string(ValidationResult r); // exact display strings ("Media Modified", ...)
std::string to_string(Confidence c);
std::string c2pa_status_string(C2paStatus s);

struct WatermarkCheck {
    WatermarkState state = WatermarkState::NoAccess;
    std::optional<WatermarkPayload> payload; // present for the Detectable states
    std::optional<RegistryEntry> entry;      // present for DetectableMatch/NoMatch
};

struct FingerprintCheck {
    FingerprintState state = FingerprintState::NoAccess;
    std::optional<Fingerprint> fingerprint;
    std::optional<RegistryEntry> entry; // present for ValidMatch/ValidNoMatch
    int distance = 0;
    bool needs_human_review = false;
};

// One row of the 60-row outcome table.
struct OutcomeRow {
    int row = 0;
    C2paStatus c2pa = C2paStatus::NotPresent;
    WatermarkState watermark = WatermarkState::Undetectable;
    FingerprintState fingerprint = FingerprintState::Invalid;
    ValidationResult result = ValidationResult::Indeterminate;
    Confidence confidence = Confidence::CannotBeAsserted;
    std::string concern; // verbatim annotation, may be empty
};

const std::vector<OutcomeRow>& outcome_table();
std::string outcome_table_json(); // canonical JSON; shipped verbatim as the data fixture

struct Decision {
    ValidationResult result = ValidationResult::Indeterminate;
    Confidence confidence = Confidence::CannotBeAsserted;
    std::vector<std::string> concerns;
    int table_row = 0; // 0 when resolved outside the table
    bool extra_tabular = false;
};

// Pure table lookup. Triples the table omits resolve by precedence — C2PA
// hash match wins, then watermark Detectable/Match, then the most pessimistic
// row sharing the (c2pa, watermark) prefix — and are flagged extra-tabular.
Decision decide(C2paStatus c2pa, std::optional<WatermarkState> watermark,
                std::optional<FingerprintState> fingerprint);

struct DisplayPayload {
    std::string signer;
    std::vector<std::string> assertions;
    std::vector<Action> actions; // with edit regions where recorded
    std::vector<Ingredient> ingredients;
    SecurityLevel security_level = SecurityLevel::CloudHigh;
    bool low_security_caveat = false; // set for device_low signers
};

struct ValidationReport {
    C2paOutcome c2pa;
    std::optional<WatermarkCheck> watermark;     // absent when short-circuited past
    std::optional<FingerprintCheck> fingerprint; // absent when short-circuited past
    ValidationResult result = ValidationResult::Indeterminate;
    Confidence confidence = Confidence::CannotBeAsserted;
    std::vector<std::string> concerns;
    std::optional<DisplayPayload> display; // populated only at High confidence
    bool needs_human_review = false;
    int table_row = 0;
    bool extra_tabular = false;
};

enum class ValidationMode { ShortCircuit, Full };

struct ValidationConfig {
    ValidationMode mode = ValidationMode::ShortCircuit;
    FingerprintAlgorithm algorithm = FingerprintAlgorithm::BlockMean;
    int tau = 10;
};

C2paOutcome check_c2pa(const MediaAsset& asset, const TrustList& trust);

// Decode, then resolve the id against the registry and compare hard hashes.
// A null key or registry reads as NoAccess.
WatermarkCheck check_watermark(const MediaAsset& asset, const WatermarkKey* key,
                               RegistryHandle* registry);

FingerprintCheck check_fingerprint(const MediaAsset& asset, RegistryHandle* registry,
                                   FingerprintAlgorithm algorithm, int tau);

ValidationReport validate(const MediaAsset& asset, const TrustList& trust,
                          const WatermarkKey* key, RegistryHandle* registry,
                          const ValidationConfig& config = {});

std::string serialize_report(const ValidationReport& report); // canonical JSON

} // namespace mediaseal
