#pragma once

#include <cstdint>

namespace lvlsf {

/// Per-query work counters (the bench CSV's per-query columns).
struct QueryStats {
    uint64_t filters_decoded = 0;  // ids produced by decoding the query
    uint64_t buckets_hit = 0;      // nonempty buckets probed
    uint64_t candidates = 0;       // distinct points distance-checked
};

} // namespace lvlsf
