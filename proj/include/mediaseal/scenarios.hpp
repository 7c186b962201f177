#pragma once

#include "mediaseal/attacks.hpp"

namespace mediaseal {

struct ScenarioResult {
    std::string name;
    AttackSpec attack_applied;
    ValidationReport report_before;
    ValidationReport report_after;
    bool mitigated = false; // computed from the reports, never asserted by hand
};

std::string serialize_scenario(const ScenarioResult& result); // canonical JSON

// Authentic photo given a subtle AI inpaint, then re-signed with the edit
// recorded. Mitigated when the high-confidence display carries the edit region
// and the ingredient thumbnail. `low_confidence_stub` runs the same asset
// through a validator with no trust list — the confusing low-context path.
ScenarioResult scenario_authentic_faked_as_ai(uint64_t seed,
                                              bool low_confidence_stub = false);

// AI image stripped of both signals and re-signed with a stolen certificate
// claiming camera capture. report_before is the pre-revocation gap (validates
// cleanly); report_after follows revocation. Mitigated when the post-revocation
// report refuses the manifest with a revoked concern and shows no display.
ScenarioResult scenario_ai_faked_as_authentic(uint64_t seed);

// Capture-time metadata tampering on an asset carrying only insecure metadata.
// Mitigated when outcomes are unchanged and the tampered value appears nowhere
// in the report. `echoing_validator` simulates a validator that repeats
// insecure metadata in its output, defeating the mitigation.
ScenarioResult scenario_manipulated_metadata(uint64_t seed,
                                             bool echoing_validator = false);

} // namespace mediaseal
