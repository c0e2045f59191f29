#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lvlsf/perfect_hash.hpp"
#include "lvlsf/rng.hpp"
#include "lvlsf/set_point.hpp"
#include "lvlsf/splitter.hpp"

namespace lvlsf {

using Block = std::vector<uint32_t>; // sorted r-subset of the universe

/// Integrality adjustments for the staged construction, with the trace of
/// every rounding step. The adjusted system is valid for the requested
/// (n, k, r): k only ever rounds down, the universe only pads up, and block
/// size only rounds up (larger blocks are still contained in every K-set).
struct TuranParams {
    uint32_t n = 0, k = 0, r = 0;          // requested
    uint32_t n_pad = 0, k_adj = 0, r_adj = 0;
    uint32_t b = 0;      // sqrt(r_adj)
    uint32_t c0 = 0;     // integral version of r/log(r^{3/2}); k/a = c0*b
    uint32_t a = 1;      // partition count, k_adj / (c0*b)
    std::vector<std::string> trace;
};

/// Explicit decodable Turán (n,k,r)-system. Stages nest: a base block list,
/// optionally scaled by a splitter, extended by perfect hashing, and
/// extended again by partitioning. decode(S) returns every block contained
/// in S (sound, complete, monotone), deduplicated and sorted.
class TuranSystem {
public:
    enum class Stage : uint8_t {
        base = 0,
        splitter_scaled = 1,
        hash_extended = 2,
        partition_extended = 3,
    };

    Stage stage() const { return stage_; }
    uint32_t universe() const { return n_; }
    uint32_t covers_k() const { return k_; }
    uint32_t block_size() const { return r_; }
    const TuranParams& params() const { return params_; }

    const std::vector<Block>& base_blocks() const { return base_blocks_; }
    bool base_all_subsets() const { return base_all_subsets_; }
    const TuranSystem* inner() const { return inner_.get(); }
    const SplitterFamily& scale_splitter() const { return splitter_; }
    const PerfectHashFamily& phf() const { return phf_; }
    const std::vector<uint32_t>& hash_permutation() const { return hash_perm_; }
    const std::vector<uint32_t>& universe_permutation() const { return universe_perm_; }
    uint32_t partition_parts() const { return parts_a_; }

    /// T(S) = {R in T : R ⊆ S}. S is a set of universe elements (sorted).
    std::vector<Block> decode(const std::vector<uint32_t>& S) const;
    std::vector<Block> decode(const SetPoint& S) const { return decode(S.elements()); }

    /// Existence version of decode(S) != empty, with early exit.
    bool contains_block(const std::vector<uint32_t>& S) const;

    /// ln |T| from the stage structure (exact for base and scaled stages;
    /// an upper bound once hashing enters).
    double log_size() const;

    /// Closed-form bound on E |T(S)| over the build's internal permutations
    /// for |S| = s. Exact expectation for base and partition stages;
    /// the Maclaurin/Vandermonde bound through hash and partition stages.
    double expected_decode_bound(double s) const;

    friend TuranSystem build_base_system(uint32_t n, uint32_t k, uint32_t r, const Seed& seed);
    friend TuranSystem splitter_scale(TuranSystem sys, uint32_t b);
    friend TuranSystem hash_extend(TuranSystem sys, uint32_t new_universe,
                                   PerfectHashFamily phf, const Seed& seed);
    friend TuranSystem partition_extend(TuranSystem sys, uint32_t a, const Seed& seed);
    friend TuranSystem build_turan(uint32_t n, uint32_t k, uint32_t r, const Seed& seed);

private:
    void decode_into(const std::vector<uint32_t>& S, std::vector<Block>& out) const;
    void decode_base(const std::vector<uint32_t>& S, std::vector<Block>& out) const;
    void decode_scaled(const std::vector<uint32_t>& S, std::vector<Block>& out) const;
    void decode_hashed(const std::vector<uint32_t>& S, std::vector<Block>& out) const;
    void decode_partitioned(const std::vector<uint32_t>& S, std::vector<Block>& out) const;

    Stage stage_ = Stage::base;
    uint32_t n_ = 0, k_ = 0, r_ = 0;
    TuranParams params_;

    // base
    std::vector<Block> base_blocks_;
    bool base_all_subsets_ = false;
    std::vector<uint64_t> base_keys_; // packed blocks for membership tests

    // splitter_scaled
    std::unique_ptr<TuranSystem> inner_;
    SplitterFamily splitter_;
    uint32_t scale_b_ = 0;
    std::vector<std::vector<uint64_t>> part_masks_; // [fn][part * words + w]
    std::vector<std::vector<uint32_t>> part_coords_; // [fn * b + j] -> coords

    // hash_extended
    PerfectHashFamily phf_;
    std::vector<uint32_t> hash_perm_; // permutation of [inner universe]

    // partition_extended
    std::vector<uint32_t> universe_perm_; // permutation of [n]
    std::vector<uint32_t> universe_inv_;
    uint32_t parts_a_ = 0;

    friend struct TuranSerde;
};

/// Stage 1: sample ceil(C(n,r)/C(k,r) (1 + ln C(n,k))) r-sets and verify;
/// expected O(1) rounds, 64-round retry cap. When k == r the system is all
/// r-subsets and is built deterministically (sampling would coupon-collect
/// to exactly that set). Cost guard: C(n,k) enumerable (<= 10^6).
TuranSystem build_base_system(uint32_t n, uint32_t k, uint32_t r, const Seed& seed);

/// Stage 2: (n,k,r) -> (b*n, b*k, b*r) via a (b*n, b)-splitter.
TuranSystem splitter_scale(TuranSystem sys, uint32_t b);

/// Stage 3: ((k)^2-universe system) -> (new_universe, k, r) via a perfect
/// hash family plus a random permutation of the hash range.
TuranSystem hash_extend(TuranSystem sys, uint32_t new_universe, PerfectHashFamily phf,
                        const Seed& seed);

/// Stage 4: (n,k,r) -> (a*n, a*k, r) via a random permutation of the larger
/// universe cut into a parts.
TuranSystem partition_extend(TuranSystem sys, uint32_t a, const Seed& seed);

/// Full composition with the integrality adjustments. Uses a direct base
/// system when the (n,k) regime is enumerable and the sample budget is
/// small; otherwise the four-stage pipeline. Requires n > k and k above the
/// (adjusted) r^{3/2} threshold for the pipeline.
TuranSystem build_turan(uint32_t n, uint32_t k, uint32_t r, const Seed& seed);

/// Integrality plan for the pipeline (exposed for parameter reporting).
TuranParams plan_turan_params(uint32_t n, uint32_t k, uint32_t r);

/// True iff every k-subset of [n] contains a decoded block.
/// Cost guard: C(n,k) <= 10^6. Iterates K-sets in colex order, early exit.
bool verify_system(const TuranSystem& sys, uint32_t n, uint32_t k);
bool verify_system_serial(const TuranSystem& sys, uint32_t n, uint32_t k);

struct Writer;
struct Reader;
void write_turan(Writer& w, const TuranSystem& sys);
TuranSystem read_turan(Reader& rd);

/// Text dump: `turan n=<n> k=<k> r=<r>` then one block per line (materializes
/// via decode of the full universe; cost-guarded).
void dump_turan(std::ostream& out, const TuranSystem& sys);

} // namespace lvlsf
