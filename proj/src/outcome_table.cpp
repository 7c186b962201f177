#include "mediaseal/validation.hpp"

#include <nlohmann/json.hpp>

namespace mediaseal {

namespace {

using C = C2paStatus;
using W = WatermarkState;
using F = FingerprintState;
using R = ValidationResult;
using L = Confidence;

std::vector<OutcomeRow> build_table() {
    std::vector<OutcomeRow> t;
    auto row = [&](int n, C c, W w, F f, R r, L l, std::string concern = "") {
        t.push_back({n, c, w, f, r, l, std::move(concern)});
    };

    row(1, C::NotPresent, W::DetectableNoMatch, F::Invalid, R::Indeterminate, L::Low);
    row(2, C::NotPresent, W::DetectableNoMatch, F::ValidNoMatch, R::MediaModified, L::Low,
        "Valid fingerprint but still low confidence it is the version the signing entity "
        "generated. Minor modifications may not alter the fingerprint while altering the "
        "semantic meaning.");
    row(3, C::NotPresent, W::DetectableNoMatch, F::ValidMatch, R::PossibleMatch, L::Low);
    row(4, C::NotPresent, W::DetectableNoMatch, F::ValidMissing, R::Indeterminate, L::Low,
        "Watermark forgery or potential timeout error");
    row(5, C::NotPresent, W::DetectableNoMatch, F::NoAccess, R::MediaModified, L::Low);
    row(6, C::NotPresent, W::DetectableMatch, F::ValidMatch, R::Match, L::High);
    row(7, C::NotPresent, W::DetectableMatch, F::NoAccess, R::Match, L::High);
    row(8, C::NotPresent, W::DetectableMissing, F::Invalid, R::Indeterminate,
        L::CannotBeAsserted);
    row(9, C::NotPresent, W::DetectableMissing, F::ValidNoMatch, R::Indeterminate,
        L::Lowest);
    row(10, C::NotPresent, W::DetectableMissing, F::ValidMatch, R::PossibleMatch, L::Lowest,
        "Depends on granularity of fingerprints; human-in-the loop (HITL) review required");
    row(11, C::NotPresent, W::DetectableMissing, F::ValidMissing, R::Indeterminate,
        L::Lowest, "Potential registry timeout (error)");
    row(12, C::NotPresent, W::DetectableMissing, F::NoAccess, R::Indeterminate,
        L::CannotBeAsserted, "Probable registry timeout");
    row(13, C::NotPresent, W::NoAccess, F::Invalid, R::Indeterminate, L::CannotBeAsserted);
    row(14, C::NotPresent, W::NoAccess, F::ValidNoMatch, R::MediaModified, L::Lowest);
    row(15, C::NotPresent, W::NoAccess, F::ValidMatch, R::PossibleMatch, L::Lowest,
        "Depends on granularity of fingerprints; human-in-the loop (HITL) review required");
    row(16, C::NotPresent, W::NoAccess, F::ValidMissing, R::Indeterminate, L::Lowest,
        "Probable registry timeout, watermark removal, fingerprint hash collision");
    row(17, C::NotPresent, W::NoAccess, F::NoAccess, R::Indeterminate, L::CannotBeAsserted);
    row(18, C::NotPresent, W::Undetectable, F::Invalid, R::Indeterminate,
        L::CannotBeAsserted, "Probable watermark removal; HITL review required");
    row(19, C::NotPresent, W::Undetectable, F::ValidNoMatch, R::MediaModified, L::Lowest);
    row(20, C::NotPresent, W::Undetectable, F::ValidMatch, R::PossibleMatch, L::Lowest,
        "Depends on granularity of fingerprints; HITL review required");
    row(21, C::NotPresent, W::Undetectable, F::ValidMissing, R::Indeterminate, L::Lowest,
        "Probable registry timeout and watermark removal");
    row(22, C::NotPresent, W::Undetectable, F::NoAccess, R::Indeterminate,
        L::CannotBeAsserted);

    row(23, C::PresentHashNoMatch, W::DetectableNoMatch, F::Invalid, R::MediaModified,
        L::Low);
    row(24, C::PresentHashNoMatch, W::DetectableNoMatch, F::ValidNoMatch, R::MediaModified,
        L::Low);
    row(25, C::PresentHashNoMatch, W::DetectableNoMatch, F::ValidMatch, R::PossibleMatch,
        L::Low,
        "Likely C2PA replacement attack, and/or possible watermark attack or fingerprint "
        "collision.");
    row(26, C::PresentHashNoMatch, W::DetectableNoMatch, F::ValidMissing, R::Indeterminate,
        L::Low, "Watermark forgery, potential C2PA replacement, probable timeout");
    row(27, C::PresentHashNoMatch, W::DetectableNoMatch, F::NoAccess, R::MediaModified,
        L::Low);
    row(28, C::PresentHashNoMatch, W::DetectableMatch, F::ValidMatch, R::Match, L::High,
        "C2PA replacement attack");
    row(29, C::PresentHashNoMatch, W::DetectableMatch, F::NoAccess, R::Match, L::High);
    row(30, C::PresentHashNoMatch, W::DetectableMissing, F::Invalid, R::Indeterminate,
        L::CannotBeAsserted);
    row(31, C::PresentHashNoMatch, W::DetectableMissing, F::ValidNoMatch, R::MediaModified,
        L::Lowest);
    row(32, C::PresentHashNoMatch, W::DetectableMissing, F::ValidMatch, R::PossibleMatch,
        L::Lowest,
        "Manifest cannot be both in and not in the registry. Potential metadata manifest "
        "and watermark replacement.");
    row(33, C::PresentHashNoMatch, W::DetectableMissing, F::ValidMissing, R::Indeterminate,
        L::Lowest, "Probable registry timeout");
    row(34, C::PresentHashNoMatch, W::DetectableMissing, F::NoAccess, R::Indeterminate,
        L::CannotBeAsserted, "Probable timeout");
    row(35, C::PresentHashNoMatch, W::NoAccess, F::Invalid, R::Indeterminate,
        L::CannotBeAsserted);
    row(36, C::PresentHashNoMatch, W::NoAccess, F::ValidNoMatch, R::MediaModified,
        L::Lowest);
    row(37, C::PresentHashNoMatch, W::NoAccess, F::ValidMatch, R::PossibleMatch, L::Lowest,
        "Processing error/ error entering info in database");
    row(38, C::PresentHashNoMatch, W::NoAccess, F::ValidMissing, R::Indeterminate,
        L::Lowest, "Probable registry timeout");
    row(39, C::PresentHashNoMatch, W::NoAccess, F::NoAccess, R::Indeterminate,
        L::CannotBeAsserted);
    row(40, C::PresentHashNoMatch, W::Undetectable, F::Invalid, R::Indeterminate,
        L::CannotBeAsserted);
    row(41, C::PresentHashNoMatch, W::Undetectable, F::ValidNoMatch, R::MediaModified,
        L::Lowest,
        "Watermark removal attack or benign modification that changed the media enough for "
        "the watermark to become undetectable.");
    row(42, C::PresentHashNoMatch, W::Undetectable, F::ValidMatch, R::PossibleMatch,
        L::Lowest);
    row(43, C::PresentHashNoMatch, W::Undetectable, F::ValidMissing, R::Indeterminate,
        L::Lowest, "Potential registry timeout");
    row(44, C::PresentHashNoMatch, W::Undetectable, F::NoAccess, R::Indeterminate,
        L::CannotBeAsserted);

    row(45, C::PresentHashMatch, W::DetectableMatch, F::ValidMatch, R::MediaValidates,
        L::High);
    row(46, C::PresentHashMatch, W::DetectableMatch, F::NoAccess, R::MediaValidates,
        L::High);
    row(47, C::PresentHashMatch, W::DetectableMissing, F::Invalid, R::MediaValidates,
        L::High);
    row(48, C::PresentHashMatch, W::DetectableMissing, F::ValidMatch, R::MediaValidates,
        L::High);
    row(49, C::PresentHashMatch, W::DetectableMissing, F::ValidMissing, R::MediaValidates,
        L::High);
    row(50, C::PresentHashMatch, W::DetectableMissing, F::NoAccess, R::MediaValidates,
        L::High);
    row(51, C::PresentHashMatch, W::NoAccess, F::Invalid, R::MediaValidates, L::High);
    row(52, C::PresentHashMatch, W::NoAccess, F::ValidNoMatch, R::MediaValidates, L::High);
    row(53, C::PresentHashMatch, W::NoAccess, F::ValidMatch, R::MediaValidates, L::High);
    row(54, C::PresentHashMatch, W::NoAccess, F::ValidMissing, R::MediaValidates, L::High);
    row(55, C::PresentHashMatch, W::NoAccess, F::NoAccess, R::MediaValidates, L::High);
    row(56, C::PresentHashMatch, W::Undetectable, F::Invalid, R::MediaValidates, L::High);
    row(57, C::PresentHashMatch, W::Undetectable, F::ValidNoMatch, R::MediaValidates,
        L::High);
    row(58, C::PresentHashMatch, W::Undetectable, F::ValidMatch, R::MediaValidates, L::High);
    row(59, C::PresentHashMatch, W::Undetectable, F::ValidMissing, R::MediaValidates,
        L::High);
    row(60, C::PresentHashMatch, W::Undetectable, F::NoAccess, R::MediaValidates, L::High);

    return t;
}

} // namespace

const std::vector<OutcomeRow>& outcome_table() {
    static const std::vector<OutcomeRow> table = build_table();
    return table;
}

std::string outcome_table_json() {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : outcome_table()) {
        rows.push_back(nlohmann::json{
            {"c2pa", c2pa_status_string(r.c2pa)},
            {"concern", r.concern},
            {"confidence", to_string(r.confidence)},
            {"fingerprint", to_string(r.fingerprint)},
            {"result", to_string(r.result)},
            {"row", r.row},
            {"watermark", to_string(r.watermark)},
        });
    }
    return nlohmann::json{{"rows", std::move(rows)}}.dump();
}

} // namespace mediaseal
