#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lvlsf/bit_vector.hpp"
#include "lvlsf/dimred.hpp"
#include "lvlsf/query_stats.hpp"
#include "lvlsf/rng.hpp"
#include "lvlsf/serialize.hpp"
#include "lvlsf/tensored_code.hpp"

namespace lvlsf {

enum class ReductionKind : uint8_t { partition = 0, xor_buckets = 1 };

/// Planner output for the Hamming (c,r)-near-neighbor structure.
///
/// The `theory_*` block evaluates the asymptotic parameter display
/// (epsilon, B, b, s and the predicted query exponent) and its feasibility
/// conditions; it is reported, with a rounding trace, but not built
/// directly: at enumerable scales the tensoring/verification cost guards
/// dominate, so the `build` block is chosen by an explicit cost model over
/// guarded feasible configurations, preserving the covering guarantee
/// exactly (which is what the Las Vegas contract needs; only the constants
/// suffer).
struct HammingParams {
    uint64_t n = 0;
    uint32_t d = 0;
    uint32_t r = 0;
    double c = 1;
    ReductionKind reduction = ReductionKind::partition;

    // Asymptotic display (reported)
    double epsilon = 0;
    double theory_B = 0, theory_b = 0, theory_s = 0, theory_S = 0;
    double predicted_rho = 0;

    // Build configuration
    uint32_t S = 0;        // substructures
    uint32_t block_B = 0;  // reduced block length
    uint32_t m = 0;        // xor bucket count (= S * block_B); 0 for partition
    uint32_t l = 0;        // tensoring parts
    uint32_t b = 0;        // inner dimension
    uint32_t r_sub = 0;    // per-substructure pair budget r'
    uint32_t r_b = 0;      // inner pair budget ceil(r'/l)
    uint32_t t_b = 0;      // inner decode radius
    InnerCodeMode code_mode = InnerCodeMode::full_cube;
    double s_build = 0;    // s with t_b at block scale

    // Cost-model estimates (documented in the trace)
    double est_candidates = 0;
    double est_decode_ops = 0;
    double est_entries_per_point = 0;

    std::vector<std::string> trace;

    uint32_t cr_threshold() const { return uint32_t(c * r + 1e-9); }
};

/// Plans parameters for the given instance. `theorem` mode pairs with the
/// xor reduction, `corollary` mode with partitioning (and checks the
/// corollary's r/d assumption).
enum class HammingPlanMode : uint8_t { theorem = 0, corollary = 1 };
HammingParams plan_hamming_params(uint64_t n, uint32_t d, uint32_t r, double c,
                                  HammingPlanMode mode);

/// LSF index over Hamming points: one reduction, a shared tensored code on
/// the reduced blocks, and one bucket map per substructure. Zero false
/// negatives: a query within r of a stored point always returns some point
/// within cr.
class HammingIndex {
public:
    HammingIndex() = default;

    const HammingParams& params() const { return params_; }
    size_t size() const { return points_.size(); }
    const std::vector<BitVector>& points() const { return points_; }
    const TensoredCode& code() const { return code_; }

    std::optional<uint32_t> query(const BitVector& q) const;
    std::optional<uint32_t> query(const BitVector& q, QueryStats& stats) const;

    uint64_t bucket_entries() const;

    void save(std::ostream& out) const;
    static HammingIndex load(std::istream& in);

    friend HammingIndex build_hamming_index(std::vector<BitVector> points,
                                            const HammingParams& params, const Seed& seed);

private:
    std::vector<BitVector> reduce(const BitVector& x) const;

    HammingParams params_;
    uint64_t seed_value_ = 0;
    PartitionReduction part_red_;
    XorReduction xor_red_;
    TensoredCode code_;
    std::vector<BitVector> points_;
    using Bucket = std::unordered_map<FilterKey, std::vector<uint32_t>, FilterKeyHash>;
    std::vector<Bucket> buckets_; // one per substructure
};

HammingIndex build_hamming_index(std::vector<BitVector> points, const HammingParams& params,
                                 const Seed& seed);

} // namespace lvlsf
