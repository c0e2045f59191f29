#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lvlsf/query_stats.hpp"
#include "lvlsf/rng.hpp"
#include "lvlsf/serialize.hpp"
#include "lvlsf/set_point.hpp"
#include "lvlsf/turan.hpp"

namespace lvlsf {

/// Filter composition for one equal-weight group.
enum class SimilarityMode : uint8_t {
    all_subsets = 0,      // a = 1: the (d, k, k) system of all k-subsets
    turan_partitioned = 1,// partition_extend over all-subsets parts
    turan_pipeline = 2,   // full staged construction
    self_concat = 3,      // pipeline after mu-fold self-concatenation
};

/// Planner output for one weight group of the Braun-Blanquet structure.
struct SimilarityParams {
    uint64_t n = 0;
    uint32_t d = 0;
    uint32_t w = 0;          // group weight
    double b1 = 0, b2 = 0;
    uint32_t k = 0;          // floor(b1 * w)
    uint32_t r = 0;          // ceil(ln n / ln(1/b2))
    SimilarityMode mode = SimilarityMode::all_subsets;
    uint32_t part_a = 1;     // partition count (partitioned mode)
    uint32_t concat_mu = 1;  // self-concatenation factor
    double rho_target = 0;   // log(1/b1) / log(1/b2)
    double est_decode = 0;   // expected blocks per decoded point
    double est_candidates = 0;
    std::vector<std::string> trace;
};

/// True added only for tests/CLI experiments: forces the staged pipeline
/// (with self-concatenation when k is below its threshold) even when the
/// cost model prefers the partitioned composition.
SimilarityParams plan_similarity_params(uint64_t n, uint32_t d, uint32_t w, double b1, double b2,
                                        bool force_pipeline = false);

/// Exact-weight grouping: returns (weight, member ids) pairs, weights
/// ascending. A query of weight wq is dispatched to every group whose
/// weight could hold a b1-similar set: w in [b1*wq, wq/b1].
std::vector<std::pair<uint32_t, std::vector<uint32_t>>> group_by_weight(
    const std::vector<SetPoint>& points);

/// LSF index for (b1,b2)-similarity search under Braun-Blanquet similarity.
/// Zero false negatives: whenever some stored x has sim(x,q) >= b1, the
/// query returns a point with similarity > b2.
class SimilarityIndex {
public:
    SimilarityIndex() = default;

    size_t size() const { return points_.size(); }
    double b1() const { return b1_; }
    double b2() const { return b2_; }
    const std::vector<SetPoint>& points() const { return points_; }

    struct Group {
        uint32_t weight = 0;
        SimilarityParams params;
        TuranSystem system;
        std::unordered_map<FilterKey, std::vector<uint32_t>, FilterKeyHash> buckets;
    };
    const std::vector<Group>& groups() const { return groups_; }

    std::optional<uint32_t> query(const SetPoint& q) const;
    std::optional<uint32_t> query(const SetPoint& q, QueryStats& stats) const;

    uint64_t bucket_entries() const;

    void save(std::ostream& out) const;
    static SimilarityIndex load(std::istream& in);

    friend SimilarityIndex build_similarity_index(std::vector<SetPoint> points, double b1,
                                                  double b2, const Seed& seed,
                                                  bool force_pipeline);

private:
    static std::vector<uint32_t> concat_elements(const SetPoint& x, uint32_t mu, uint32_t d);
    std::vector<FilterKey> decode_keys(const Group& g, const SetPoint& x) const;

    double b1_ = 0, b2_ = 0;
    uint64_t seed_value_ = 0;
    uint32_t d_ = 0;
    std::vector<SetPoint> points_;
    std::vector<Group> groups_;
};

SimilarityIndex build_similarity_index(std::vector<SetPoint> points, double b1, double b2,
                                       const Seed& seed, bool force_pipeline = false);

} // namespace lvlsf
