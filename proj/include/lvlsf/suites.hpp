#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lvlsf {

/// One verification-suite result row (CSV: suite,case,pass,value).
struct SuiteRow {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string value;
};

/// Exhaustive splitter check: for l in {2,4} and every B <= max_B divisible
/// by l, all 2^B subsets split within floor/ceil bounds, all parts exactly
/// B/l.
std::vector<SuiteRow> suite_splitter(uint32_t max_B);

/// Exhaustive covering check: sampled inner codes at b in {2,5} tensored to
/// every B <= max_B, every pair at distance <= r shares a FilterId.
std::vector<SuiteRow> suite_covering(uint32_t max_B, uint64_t seed);

/// Turán systems: the staged (12,6,3) build plus each stage on its toy
/// parameters, exhaustively verified with decode completeness against the
/// materialize-and-filter oracle.
std::vector<SuiteRow> suite_turan(uint64_t seed);

/// Appendix bounds: the binomial-ratio chain over every n <= max_n,
/// m <= n, k <= m, and the ball-intersection bounds against exact counts
/// over every d <= max_d with valid (r, s).
std::vector<SuiteRow> suite_bounds(uint32_t max_n, uint32_t max_d);

/// One-sided reductions over `pairs` random pairs: contraction and
/// property (1) may never fail; property (2) failure rates must sit within
/// their delta budgets at 99% confidence.
std::vector<SuiteRow> suite_reductions(uint64_t pairs, uint64_t seed);

/// Staircase-map identity (exhaustive to max_M) and end-to-end l1
/// embedding distortion bands with zero near-pair violations.
std::vector<SuiteRow> suite_unary(uint32_t max_M, uint64_t seed);

void print_rows_csv(std::ostream& out, const std::vector<SuiteRow>& rows);
bool all_pass(const std::vector<SuiteRow>& rows);

} // namespace lvlsf
