#pragma once
// Counter-based RNG: every variate is a hash of (seed, stream, counter...),
// so parallel chains and replays are bit-reproducible by construction.

#include <cmath>
#include <cstdint>

namespace arms {

inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t counter_hash(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// uniform in (0,1), 53-bit mantissa, never exactly 0 or 1
inline double u01(uint64_t h) {
    return (double)((h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

// sequential stream for algorithms whose draw count is data-dependent
struct CounterRng {
    uint64_t seed = 0;
    uint64_t stream = 0;
    uint64_t ctr = 0;

    uint64_t next_u64() { return counter_hash(seed, stream, ctr++); }
    double next_u01() { return u01(next_u64()); }
    double next_gauss() {
        double u1 = next_u01();
        double u2 = next_u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }
};

} // namespace arms
