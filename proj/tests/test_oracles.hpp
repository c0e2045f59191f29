#pragma once

// Test-only brute-force helpers, independent of the implementation paths
// they check.

#include <cstdint>
#include <sstream>
#include <vector>

#include "lvlsf/bit_vector.hpp"
#include "lvlsf/serialize.hpp"
#include "lvlsf/turan.hpp"

namespace testutil {

// "1010" -> coordinate i = digit i (coordinate 0 first).
inline lvlsf::BitVector bv(const std::string& bits) {
    lvlsf::BitVector v(uint32_t(bits.size()));
    for (uint32_t i = 0; i < bits.size(); ++i)
        if (bits[i] == '1') v.set(i);
    return v;
}

inline uint32_t popcnt(uint64_t x) { return uint32_t(__builtin_popcountll(x)); }

// Exhaustive |B(x,t) ∩ B(y,t)| with dist(x,y) = r, by enumerating 2^d.
inline uint64_t ball_intersection_brute(uint32_t d, uint32_t r, uint32_t t) {
    uint64_t x = 0, y = (r >= 64 ? ~0ULL : (1ULL << r) - 1);
    uint64_t count = 0;
    for (uint64_t z = 0; z < (1ULL << d); ++z)
        if (popcnt(z ^ x) <= t && popcnt(z ^ y) <= t) ++count;
    return count;
}

// Constructs a base-stage Turán system with an explicit block list through
// the public serialization surface.
inline lvlsf::TuranSystem make_base(uint32_t n, uint32_t k, uint32_t r,
                                    const std::vector<lvlsf::Block>& blocks) {
    std::stringstream buf;
    lvlsf::Writer w{buf};
    w.u8(0); // stage base
    w.u32(n);
    w.u32(k);
    w.u32(r);
    for (int i = 0; i < 9; ++i) w.u32(0); // params ints
    w.u64(0);                             // params trace
    w.u8(0);                              // not all-subsets
    std::vector<lvlsf::Block> sorted = blocks;
    std::sort(sorted.begin(), sorted.end());
    w.u64(sorted.size());
    for (const auto& blk : sorted) w.vec_u(blk);
    lvlsf::Reader rd{buf};
    return lvlsf::read_turan(rd);
}

// All k-subsets of [n] as sorted vectors (small n only).
inline std::vector<std::vector<uint32_t>> all_subsets(uint32_t n, uint32_t k) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> c(k);
    if (k > n) return out;
    for (uint32_t i = 0; i < k; ++i) c[i] = i;
    for (;;) {
        out.push_back(c);
        int32_t i = int32_t(k) - 1;
        while (i >= 0 && c[uint32_t(i)] == n - k + uint32_t(i)) --i;
        if (i < 0) break;
        ++c[uint32_t(i)];
        for (uint32_t j = uint32_t(i) + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

} // namespace testutil
