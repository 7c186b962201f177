#pragma once

#include <cmath>
#include <cstdint>

namespace mediaseal {

// splitmix64; results are identical across platforms, unlike the distributions
// in <random>.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // [0, bound)
    uint64_t next_below(uint64_t bound) { return next_u64() % bound; }

    // [0, 1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller, one value per call (the pair's second half is discarded to
    // keep the stream position independent of usage pattern).
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

private:
    uint64_t state_;
};

// Stateless keyed PRF used for key-derived permutations and dithers.
inline uint64_t prf64(uint64_t k0, uint64_t k1, uint64_t input) {
    Rng r(k0 ^ (k1 * 0x9e3779b97f4a7c15ull) ^ (input * 0xff51afd7ed558ccdull));
    r.next_u64();
    return r.next_u64();
}

} // namespace mediaseal
