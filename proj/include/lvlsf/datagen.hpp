#pragma once

#include <cstdint>

#include "lvlsf/io.hpp"
#include "lvlsf/rng.hpp"

namespace lvlsf {

/// Planted-instance generators behind the CLI `gen` subcommand. Every query
/// has a planted target at the stated distance/similarity, recorded in the
/// truth sidecar, so recall can be checked exactly.

struct HammingInstance {
    HammingDataset data;
    HammingDataset queries;
    std::vector<TruthEntry> truth;
};

struct SetsInstance {
    SetDataset data;
    SetDataset queries;
    std::vector<TruthEntry> truth;
};

struct L1Instance {
    L1Dataset data;
    L1Dataset queries;
    std::vector<TruthEntry> truth;
};

/// n uniform points; each query flips at most r coordinates of a random
/// target (distance uniform in [0, r]).
HammingInstance gen_hamming_instance(uint32_t n, uint32_t d, uint32_t r, uint32_t queries,
                                     const Seed& seed);

/// n uniform weight-w sets; each query shares exactly ceil(b1*w) elements
/// with its target (similarity >= b1, tight).
SetsInstance gen_sets_instance(uint32_t n, uint32_t d, uint32_t w, double b1, uint32_t queries,
                               const Seed& seed);

/// n uniform points in a box of side 8*r; queries at l1 distance uniform in
/// (0, r] from their targets.
L1Instance gen_l1_instance(uint32_t n, uint32_t d, double r, uint32_t queries, const Seed& seed);

} // namespace lvlsf
