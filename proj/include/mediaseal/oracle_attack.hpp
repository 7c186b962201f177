#pragma once

#include <cstdint>

#include "mediaseal/watermark.hpp"

namespace mediaseal {

enum class OracleEndpoint { PublicRateLimited, InternalConfidence };

struct OracleAttackConfig {
    uint64_t seed = 1;
    uint64_t query_budget = 20000;
    size_t rate_limit = 10;      // grants per window on the public endpoint
    double rate_window = 60.0;   // seconds, virtual clock
};

struct OracleAttackResult {
    OracleEndpoint endpoint = OracleEndpoint::InternalConfidence;
    bool succeeded = false;      // watermark driven to undetectable
    uint64_t queries = 0;        // detector queries actually answered
    uint64_t denied = 0;         // requests refused by the limiter
    double elapsed = 0.0;        // virtual seconds spent, including waiting
    double effective_cost = 0.0; // queries plus window-wait cost
    double final_distortion = 0.0; // mean absolute sample change
};

// Attacker probing a watermark detector to remove the mark with minimal
// distortion. The confidence-leaking endpoint admits hill climbing on
// raw_bit_agreement; the public endpoint answers one bit per query and is
// rate limited, so the attacker pays in blind escalation and wall-clock
// windows. Deterministic per seed.
OracleAttackResult oracle_attack_simulation(OracleEndpoint endpoint,
                                            const OracleAttackConfig& config);

} // namespace mediaseal
