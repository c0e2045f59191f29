#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lvlsf {

/// Family of balanced functions [B] -> [l] such that every S ⊆ [B] is split
/// into parts of size between floor(|S|/l) and ceil(|S|/l) by some member.
/// Every member has all parts of size exactly B/l (requires l | B; callers
/// pad their domain otherwise). Functions are stored as length-B part-label
/// arrays, deduplicated and in lexicographic order, so lookups are
/// deterministic.
class SplitterFamily {
public:
    SplitterFamily() = default;

    uint32_t domain() const { return B_; }
    uint32_t parts() const { return l_; }
    uint32_t part_size() const { return B_ / l_; }
    size_t size() const { return functions_.size(); }

    const std::vector<uint8_t>& labels(size_t fn) const { return functions_[fn]; }

    /// Coordinates of part j under function fn, in increasing index order.
    std::vector<uint32_t> part_indices(size_t fn, uint8_t j) const;

    /// True if fn splits S within the floor/ceil bounds.
    bool splits_evenly(size_t fn, std::span<const uint32_t> S) const;

    friend SplitterFamily build_splitter(uint32_t B, uint32_t l);

private:
    uint32_t B_ = 0;
    uint32_t l_ = 0;
    std::vector<std::vector<uint8_t>> functions_;
};

/// Constructs a (B,l)-splitter by recursive cyclic windows: width-B/2
/// windows for factor 2, width-B/p windows at all B offsets plus a recursive
/// complement split for odd prime factors, composed mixed-radix over the
/// factorization of l. Family size stays <= B^l.
/// Errors: l < 1 or l > B (argument), l not dividing B (divisibility),
/// l > 255 (representation guard).
SplitterFamily build_splitter(uint32_t B, uint32_t l);

/// Index of the first family member splitting S within floor/ceil bounds.
/// Existence is guaranteed by the family invariant.
size_t find_split(const SplitterFamily& fam, std::span<const uint32_t> S);

} // namespace lvlsf
