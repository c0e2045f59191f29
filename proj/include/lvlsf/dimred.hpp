#pragma once

#include <cstdint>
#include <vector>

#include "lvlsf/bit_vector.hpp"
#include "lvlsf/rng.hpp"

namespace lvlsf {

/// Xor-bucketing reduction: coordinates hash into m buckets, each output bit
/// is the parity of its bucket, and the m-length parity vector splits into
/// S = m/B blocks of length B. Guarantees, for every x,y:
///   (1) with certainty, min_i dist(f_i(x), f_i(y)) <= dist(x,y)/S
///       (parity never increases distances; then averaging over blocks);
///   (2) for dist(x,y) >= cr, each block keeps distance >= (1-eps)cr/S
///       except with probability delta.
struct XorReduction {
    uint32_t d = 0;
    uint32_t m = 0;      // bucket count, multiple of B (m >= B)
    uint32_t B = 0;      // block length
    uint32_t S = 0;      // number of output functions
    bool identity = false; // B >= d: f is the identity on {0,1}^d
    double epsilon = 0, delta = 0;
    std::vector<uint32_t> bucket_of; // [d] -> [m]

    /// Full parity vector g(x) of length m (or x itself in identity mode).
    BitVector apply_g(const BitVector& x) const;
    /// The S block outputs f_i(x), each of length B.
    std::vector<BitVector> apply(const BitVector& x) const;
};

/// Paper-surface constructor: m = 3cr/eps buckets, block length
/// B = 27 eps^-3 ln(1/delta); m is rounded up to a multiple of B (never
/// below B) which only strengthens both properties. Preconditions:
/// d >= cr > r >= 1 and 1/delta >= m.
XorReduction build_xor_reduction(uint32_t d, uint32_t r, double c, double eps, double delta,
                                 const Seed& seed);
/// Planner surface: explicit bucket and block counts (B | m enforced).
XorReduction build_xor_reduction_explicit(uint32_t d, uint32_t m, uint32_t B, const Seed& seed);

/// Permutation partitioning reduction: a fixed random permutation of the
/// (zero-padded) coordinates, cut into S = d_pad/B blocks of length B.
/// Property (1) holds with certainty because block distances sum to the
/// full distance; property (2) is a Hoeffding bound with failure <= 1/n.
struct PartitionReduction {
    uint32_t d = 0;
    uint32_t d_pad = 0;
    uint32_t B = 0;
    uint32_t S = 0;
    double epsilon = 0;
    std::vector<uint32_t> perm; // permutation of [d_pad]

    std::vector<BitVector> apply(const BitVector& x) const;
};

/// Paper-surface constructor: B = 2 eps^-2 (d/(cr)) ln n. Precondition B <= d.
PartitionReduction build_partition_reduction(uint32_t d, uint32_t r, double c, double eps,
                                             uint64_t n, const Seed& seed);
PartitionReduction build_partition_reduction_explicit(uint32_t d, uint32_t B, const Seed& seed);

} // namespace lvlsf
