#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvlsf/bit_vector.hpp"
#include "lvlsf/set_point.hpp"

namespace lvlsf {
namespace oracle {

/// Named quantity with an exact value (when computable) bracketed by
/// analytic bounds.
struct BoundsReport {
    std::string quantity;
    bool has_exact = false;
    double exact = 0;       // exact value (possibly scaled, see quantity)
    double lower = 0;
    double upper = 0;
    std::string inputs;
};

// ---- Ground-truth scans ----------------------------------------------------

/// All ids with hamming_distance(points[i], q) <= threshold. Exact by
/// definition. Serial reference.
std::vector<uint32_t> linear_scan_hamming_serial(const std::vector<BitVector>& points,
                                                 const BitVector& q, uint32_t threshold);
/// OpenMP variant; identical output (ids ascending).
std::vector<uint32_t> linear_scan_hamming(const std::vector<BitVector>& points,
                                          const BitVector& q, uint32_t threshold);

/// All ids with braun_blanquet(points[i], q) >= threshold (ratio compare is
/// exact integer arithmetic).
std::vector<uint32_t> linear_scan_similarity_serial(const std::vector<SetPoint>& points,
                                                    const SetPoint& q,
                                                    uint32_t sim_num, uint32_t sim_den);
std::vector<uint32_t> linear_scan_similarity(const std::vector<SetPoint>& points,
                                             const SetPoint& q,
                                             uint32_t sim_num, uint32_t sim_den);

// ---- Hamming ball intersections -------------------------------------------

/// Exact |{z : dist(z,x) <= t, dist(z,y) <= t}| for any fixed pair x,y at
/// distance r in {0,1}^d; the value does not depend on the pair. Computed by
/// the two-index binomial summation; d <= 30 cost guard.
uint64_t ball_intersection_count(uint32_t d, uint32_t r, uint32_t t);

/// Analytic bracket for I * 2^-d at radius t = d/2 - s*sqrt(d)/2.
/// Preconditions (bounds regime): 1 <= s <= d^{1/4}/2 and r < d/2.
BoundsReport ball_intersection_bounds(uint32_t d, uint32_t r, double s);

/// The pair-capture lower bound (7/(8d)) exp(-s^2/(2(1-r/d))) evaluated
/// without the regime precondition; used as a conservative sampling budget.
double ball_intersection_lower(uint32_t d, uint32_t r, double s);

// ---- Binomial ratios -------------------------------------------------------

/// Exact C(n,k) for n <= 63 (fits u64; throws cost_guard_error beyond).
uint64_t binomial(uint32_t n, uint32_t k);

/// The four-term chain around C(n,k)/C(m,k), evaluated in log space:
///   (n/m)^k <= (n/m)^k exp((n-m)/(nm) k(k-1)/2) <= C(n,k)/C(m,k)
///           <= exp(n H(k/n) - m H(k/m)) <= (n/m)^k e^{k^2/m}.
/// Returns logs of all five values in `chain_logs` order left-to-right with
/// the exact ratio in the middle. Requires n >= m >= k >= 0.
struct RatioChain {
    double chain_logs[5];
    bool holds(double eps = 1e-9) const {
        for (int i = 0; i + 1 < 5; ++i)
            if (chain_logs[i] > chain_logs[i + 1] + eps) return false;
        return true;
    }
};
RatioChain binom_ratio_chain(uint32_t n, uint32_t m, uint32_t k);
BoundsReport binom_ratio_bounds(uint32_t n, uint32_t m, uint32_t k);

/// Volume lower bound ceil(C(n,r)/C(k,r)) on the size of any Turán
/// (n,k,r)-system.
uint64_t turan_volume_bound(uint32_t n, uint32_t k, uint32_t r);

} // namespace oracle
} // namespace lvlsf
