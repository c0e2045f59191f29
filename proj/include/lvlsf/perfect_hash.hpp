#pragma once

#include <cstdint>
#include <vector>

#include "lvlsf/rng.hpp"

namespace lvlsf {

/// Family of functions [domain] -> [range] such that every k-subset of the
/// domain is mapped injectively by at least one member.
///
/// Three constructions, chosen by regime:
///  - identity: range >= domain, one function, trivially injective;
///  - sampled: random arrays verified exhaustively over all C(domain,k)
///    subsets (cost-guarded);
///  - multiplicative: h_u(x) = ((u*x) mod p) mod range for all u in [1,p),
///    p prime >= domain. For any fixed pair x != y the number of colliding
///    u is a pair-independent constant cnt (multiples of `range` and of
///    p mod range in [1,p)), so C(k,2)*cnt < p-1 certifies that every
///    k-set has an injective member. The certificate is computed and
///    enforced at build time, keeping the family deterministic.
struct PerfectHashFamily {
    enum class Mode : uint8_t { identity = 0, sampled = 1, multiplicative = 2 };

    Mode mode = Mode::identity;
    uint32_t domain = 0;
    uint32_t range = 0;
    uint32_t k = 0;
    uint32_t prime = 0;                       // multiplicative
    uint32_t collision_count = 0;             // per-pair colliding multipliers
    std::vector<uint32_t> multipliers;        // multiplicative
    std::vector<std::vector<uint32_t>> fns;   // sampled

    size_t size() const {
        switch (mode) {
            case Mode::identity: return 1;
            case Mode::sampled: return fns.size();
            default: return multipliers.size();
        }
    }

    uint32_t apply(size_t fn, uint32_t x) const {
        switch (mode) {
            case Mode::identity: return x % range; // x itself whenever range >= domain
            case Mode::sampled: return fns[fn][x];
            default: return uint32_t((uint64_t(multipliers[fn]) * x % prime) % range);
        }
    }
};

/// Exhaustive check that every k-subset of [domain] has an injective member.
/// Cost guard: C(domain, k) <= 10^6.
bool verify_phf(const PerfectHashFamily& phf);

PerfectHashFamily build_perfect_hash_family(uint32_t domain, uint32_t range, uint32_t k,
                                            const Seed& seed);

} // namespace lvlsf
