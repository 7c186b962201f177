#include "mediaseal/validation.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "mediaseal/hex.hpp"

namespace mediaseal {

std::string to_string(WatermarkState s) {
    switch (s) {
    case WatermarkState::DetectableMatch: return "detectable_match";
    case WatermarkState::DetectableNoMatch: return "detectable_no_match";
    case WatermarkState::DetectableMissing: return "detectable_missing";
    case WatermarkState::NoAccess: return "no_access";
    case WatermarkState::Undetectable: return "undetectable";
    }
    return "undetectable";
}

std::string to_string(FingerprintState s) {
    switch (s) {
    case FingerprintState::ValidMatch: return "valid_match";
    case FingerprintState::ValidNoMatch: return "valid_no_match";
    case FingerprintState::ValidMissing: return "valid_missing";
    case FingerprintState::NoAccess: return "no_access";
    case FingerprintState::Invalid: return "invalid";
    }
    return "invalid";
}

std::string to_string(ValidationResult r) {
    switch (r) {
    case ValidationResult::Indeterminate: return "Indeterminate";
    case ValidationResult::MediaModified: return "Media Modified";
    case ValidationResult::PossibleMatch: return "Possible Match";
    case ValidationResult::Match: return "Match";
    case ValidationResult::MediaValidates: return "Media Validates";
    }
    return "Indeterminate";
}

std::string to_string(Confidence c) {
    switch (c) {
    case Confidence::High: return "High";
    case Confidence::Low: return "Low";
    case Confidence::Lowest: return "Lowest";
    case Confidence::CannotBeAsserted: return "Cannot Be Asserted";
    }
    return "Cannot Be Asserted";
}

std::string c2pa_status_string(C2paStatus s) {
    switch (s) {
    case C2paStatus::NotPresent: return "not_present";
    case C2paStatus::PresentHashNoMatch: return "present_no_match";
    case C2paStatus::PresentHashMatch: return "present_match";
    }
    return "not_present";
}

namespace {

// Lower rank = more pessimistic, for the extra-tabular fallback.
int pessimism_rank(ValidationResult r) { return static_cast<int>(r); }

int pessimism_rank(Confidence c) {
    switch (c) {
    case Confidence::CannotBeAsserted: return 0;
    case Confidence::Lowest: return 1;
    case Confidence::Low: return 2;
    case Confidence::High: return 3;
    }
    return 0;
}

Decision from_row(const OutcomeRow& row, bool extra_tabular) {
    Decision d;
    d.result = row.result;
    d.confidence = row.confidence;
    if (!row.concern.empty()) d.concerns.push_back(row.concern);
    d.table_row = extra_tabular ? 0 : row.row;
    d.extra_tabular = extra_tabular;
    if (extra_tabular) d.concerns.push_back("extra-tabular combination");
    return d;
}

} // namespace

Decision decide(C2paStatus c2pa, std::optional<WatermarkState> watermark,
                std::optional<FingerprintState> fingerprint) {
    // High-confidence precedence first; it also covers short-circuited triples.
    if (c2pa == C2paStatus::PresentHashMatch) {
        if (watermark && fingerprint) {
            for (const auto& row : outcome_table())
                if (row.c2pa == c2pa && row.watermark == *watermark &&
                    row.fingerprint == *fingerprint)
                    return from_row(row, false);
        }
        Decision d;
        d.result = ValidationResult::MediaValidates;
        d.confidence = Confidence::High;
        d.extra_tabular = watermark.has_value() && fingerprint.has_value();
        if (d.extra_tabular) d.concerns.push_back("extra-tabular combination");
        return d;
    }
    if (watermark && fingerprint) {
        for (const auto& row : outcome_table())
            if (row.c2pa == c2pa && row.watermark == *watermark &&
                row.fingerprint == *fingerprint)
                return from_row(row, false);
    }
    if (watermark == WatermarkState::DetectableMatch) {
        Decision d;
        d.result = ValidationResult::Match;
        d.confidence = Confidence::High;
        d.extra_tabular = fingerprint.has_value();
        if (d.extra_tabular) d.concerns.push_back("extra-tabular combination");
        return d;
    }

    // Most pessimistic row sharing the (c2pa, watermark) prefix.
    const OutcomeRow* best = nullptr;
    for (const auto& row : outcome_table()) {
        if (row.c2pa != c2pa) continue;
        if (watermark && row.watermark != *watermark) continue;
        if (!best ||
            std::pair(pessimism_rank(row.result), pessimism_rank(row.confidence)) <
                std::pair(pessimism_rank(best->result), pessimism_rank(best->confidence)))
            best = &row;
    }
    if (best) return from_row(*best, true);
    Decision d; // unreachable with a populated table; stay conservative
    d.extra_tabular = true;
    d.concerns.push_back("extra-tabular combination");
    return d;
}

C2paOutcome check_c2pa(const MediaAsset& asset, const TrustList& trust) {
    return validate_manifest(asset, trust);
}

WatermarkCheck check_watermark(const MediaAsset& asset, const WatermarkKey* key,
                               RegistryHandle* registry) {
    if (!key) return {WatermarkState::NoAccess, std::nullopt, std::nullopt};
    const DetectionResult decoded = decode_watermark(asset.image(), *key);
    if (decoded.status == DetectionStatus::NoAccess)
        return {WatermarkState::NoAccess, std::nullopt, std::nullopt};
    if (decoded.status == DetectionStatus::Undetectable)
        return {WatermarkState::Undetectable, std::nullopt, std::nullopt};

    WatermarkCheck check;
    check.payload = decoded.payload;
    if (!registry) {
        check.state = WatermarkState::NoAccess;
        return check;
    }
    const LookupOutcome looked = registry->lookup_by_watermark(decoded.payload->id);
    switch (looked.kind) {
    case LookupKind::NoAccess: check.state = WatermarkState::NoAccess; return check;
    case LookupKind::NotFound:
    case LookupKind::Missing: check.state = WatermarkState::DetectableMissing; return check;
    case LookupKind::Found: break;
    }
    check.entry = looked.entry;
    check.state =
        looked.entry->signed_manifest.manifest.content_hash == hard_hash(asset.image())
            ? WatermarkState::DetectableMatch
            : WatermarkState::DetectableNoMatch;
    return check;
}

FingerprintCheck check_fingerprint(const MediaAsset& asset, RegistryHandle* registry,
                                   FingerprintAlgorithm algorithm, int tau) {
    FingerprintCheck check;
    check.fingerprint = compute_fingerprint(asset.image(), algorithm);
    if (!registry) {
        check.state = FingerprintState::NoAccess;
        return check;
    }
    const FingerprintLookupOutcome looked =
        registry->lookup_by_fingerprint(*check.fingerprint, tau);
    switch (looked.kind) {
    case LookupKind::NoAccess: check.state = FingerprintState::NoAccess; return check;
    case LookupKind::NotFound: check.state = FingerprintState::Invalid; return check;
    case LookupKind::Missing: check.state = FingerprintState::ValidMissing; return check;
    case LookupKind::Found: break;
    }
    const FingerprintCandidate& best = looked.candidates.front();
    check.entry = best.entry;
    check.distance = best.distance;
    check.needs_human_review = true; // every automated fingerprint match gets review
    check.state =
        best.entry.signed_manifest.manifest.content_hash == hard_hash(asset.image())
            ? FingerprintState::ValidMatch
            : FingerprintState::ValidNoMatch;
    return check;
}

namespace {

DisplayPayload display_from(const Manifest& manifest) {
    DisplayPayload d;
    d.signer = manifest.signer_name;
    d.assertions = manifest.assertions;
    d.actions = manifest.actions;
    d.ingredients = manifest.ingredients;
    d.security_level = manifest.security_level;
    d.low_security_caveat = manifest.security_level == SecurityLevel::DeviceLow;
    return d;
}

} // namespace

ValidationReport validate(const MediaAsset& asset, const TrustList& trust,
                          const WatermarkKey* key, RegistryHandle* registry,
                          const ValidationConfig& config) {
    ValidationReport report;
    report.c2pa = check_c2pa(asset, trust);

    const bool short_circuit = config.mode == ValidationMode::ShortCircuit;
    const bool c2pa_high = report.c2pa.status == C2paStatus::PresentHashMatch;
    if (!short_circuit || !c2pa_high)
        report.watermark = check_watermark(asset, key, registry);
    const bool wm_high =
        report.watermark && report.watermark->state == WatermarkState::DetectableMatch;
    if (!short_circuit || (!c2pa_high && !wm_high))
        report.fingerprint = check_fingerprint(asset, registry, config.algorithm, config.tau);

    const Decision decision = decide(
        report.c2pa.status,
        report.watermark ? std::optional(report.watermark->state) : std::nullopt,
        report.fingerprint ? std::optional(report.fingerprint->state) : std::nullopt);
    report.result = decision.result;
    report.confidence = decision.confidence;
    report.concerns = decision.concerns;
    report.table_row = decision.table_row;
    report.extra_tabular = decision.extra_tabular;
    report.needs_human_review =
        decision.result == ValidationResult::PossibleMatch ||
        (report.fingerprint && report.fingerprint->needs_human_review);

    if (report.confidence == Confidence::High) {
        if (c2pa_high)
            report.display = display_from(*report.c2pa.manifest);
        else if (wm_high && report.watermark->entry)
            report.display = display_from(report.watermark->entry->signed_manifest.manifest);
    }
    return report;
}

std::string serialize_report(const ValidationReport& report) {
    nlohmann::json j;

    nlohmann::json c2pa{{"status", c2pa_status_string(report.c2pa.status)}};
    nlohmann::json concerns = nlohmann::json::array();
    for (auto c : report.c2pa.concerns) concerns.push_back(to_string(c));
    c2pa["concerns"] = std::move(concerns);
    j["c2pa"] = std::move(c2pa);

    if (report.watermark) {
        nlohmann::json wm{{"state", to_string(report.watermark->state)}};
        if (report.watermark->payload) wm["watermark_id"] = report.watermark->payload->id;
        j["watermark"] = std::move(wm);
    }
    if (report.fingerprint) {
        nlohmann::json fp{{"state", to_string(report.fingerprint->state)}};
        if (report.fingerprint->fingerprint)
            fp["fingerprint"] = report.fingerprint->fingerprint->to_text();
        if (report.fingerprint->entry) fp["distance"] = report.fingerprint->distance;
        j["fingerprint"] = std::move(fp);
    }

    j["result"] = to_string(report.result);
    j["confidence"] = to_string(report.confidence);
    j["concerns"] = report.concerns;
    j["needs_human_review"] = report.needs_human_review;
    if (report.table_row > 0) j["table_row"] = report.table_row;
    if (report.extra_tabular) j["extra_tabular"] = true;

    if (report.display) {
        const DisplayPayload& d = *report.display;
        nlohmann::json actions = nlohmann::json::array();
        for (const auto& a : d.actions) {
            nlohmann::json aj{
                {"kind", to_string(a.kind)}, {"timestamp", a.timestamp}, {"tool", a.tool}};
            if (a.region)
                aj["region"] = nlohmann::json{{"bottom", a.region->bottom},
                                              {"left", a.region->left},
                                              {"right", a.region->right},
                                              {"top", a.region->top}};
            actions.push_back(std::move(aj));
        }
        nlohmann::json ingredients = nlohmann::json::array();
        for (const auto& i : d.ingredients) {
            nlohmann::json ij{{"description", i.description}};
            if (i.thumbnail_hash)
                ij["thumbnail_hash"] =
                    to_hex(i.thumbnail_hash->data(), i.thumbnail_hash->size());
            ingredients.push_back(std::move(ij));
        }
        nlohmann::json dj{
            {"actions", std::move(actions)},
            {"assertions", d.assertions},
            {"ingredients", std::move(ingredients)},
            {"security_level", to_string(d.security_level)},
            {"signer", d.signer},
        };
        if (d.low_security_caveat) dj["low_security_caveat"] = true;
        j["display"] = std::move(dj);
    }
    return j.dump();
}

} // namespace mediaseal
