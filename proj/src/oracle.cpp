#include "lvlsf/oracle.hpp"

#include <cmath>
#include <sstream>

#include "lvlsf/errors.hpp"

namespace lvlsf {
namespace oracle {

std::vector<uint32_t> linear_scan_hamming_serial(const std::vector<BitVector>& points,
                                                 const BitVector& q, uint32_t threshold) {
    std::vector<uint32_t> ids;
    for (uint32_t i = 0; i < points.size(); ++i)
        if (hamming_distance(points[i], q) <= threshold) ids.push_back(i);
    return ids;
}

std::vector<uint32_t> linear_scan_hamming(const std::vector<BitVector>& points,
                                          const BitVector& q, uint32_t threshold) {
    const int64_t n = int64_t(points.size());
    std::vector<uint8_t> hit(points.size(), 0);
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i)
        hit[size_t(i)] = hamming_distance(points[size_t(i)], q) <= threshold;
    std::vector<uint32_t> ids;
    for (uint32_t i = 0; i < points.size(); ++i)
        if (hit[i]) ids.push_back(i);
    return ids;
}

namespace {
bool sim_at_least(const SetPoint& x, const SetPoint& q, uint32_t num, uint32_t den) {
    uint32_t mx = std::max(x.weight(), q.weight());
    if (mx == 0) return false;
    // |x∩q|/mx >= num/den  <=>  |x∩q|*den >= num*mx  (exact in u64)
    return uint64_t(intersection_size(x, q)) * den >= uint64_t(num) * mx;
}
} // namespace

std::vector<uint32_t> linear_scan_similarity_serial(const std::vector<SetPoint>& points,
                                                    const SetPoint& q,
                                                    uint32_t sim_num, uint32_t sim_den) {
    std::vector<uint32_t> ids;
    for (uint32_t i = 0; i < points.size(); ++i)
        if (sim_at_least(points[i], q, sim_num, sim_den)) ids.push_back(i);
    return ids;
}

std::vector<uint32_t> linear_scan_similarity(const std::vector<SetPoint>& points,
                                             const SetPoint& q,
                                             uint32_t sim_num, uint32_t sim_den) {
    const int64_t n = int64_t(points.size());
    std::vector<uint8_t> hit(points.size(), 0);
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i)
        hit[size_t(i)] = sim_at_least(points[size_t(i)], q, sim_num, sim_den);
    std::vector<uint32_t> ids;
    for (uint32_t i = 0; i < points.size(); ++i)
        if (hit[i]) ids.push_back(i);
    return ids;
}

uint64_t binomial(uint32_t n, uint32_t k) {
    if (k > n) return 0;
    if (n > 63) throw cost_guard_error("binomial: n > 63 would overflow u64");
    if (k > n - k) k = n - k;
    uint64_t c = 1;
    for (uint32_t i = 0; i < k; ++i) {
        // Exact: c is always a binomial coefficient after the division.
        c = c / (i + 1) * (n - i) + c % (i + 1) * (n - i) / (i + 1);
    }
    return c;
}

uint64_t ball_intersection_count(uint32_t d, uint32_t r, uint32_t t) {
    if (d > 30) throw cost_guard_error("ball_intersection_count: d > 30");
    if (r > d) throw parameter_error("ball_intersection_count: r > d");
    // z at distance i from x on the r differing coordinates and j on the
    // d-r equal ones has dist(x,z) = i+j and dist(y,z) = (r-i)+j, so the
    // constraint dist <= t for both reads i+j <= t and j-i <= t-r.
    uint64_t total = 0;
    for (uint32_t i = 0; i <= r; ++i) {
        if (i > t) break;
        int64_t jmax = std::min<int64_t>(int64_t(t) - int64_t(i),
                                         int64_t(t) - int64_t(r) + int64_t(i));
        jmax = std::min<int64_t>(jmax, int64_t(d - r));
        for (int64_t j = 0; j <= jmax; ++j)
            total += binomial(r, i) * binomial(d - r, uint32_t(j));
    }
    return total;
}

double ball_intersection_lower(uint32_t d, uint32_t r, double s) {
    return 7.0 / (8.0 * d) * std::exp(-s * s / (2.0 * (1.0 - double(r) / d)));
}

BoundsReport ball_intersection_bounds(uint32_t d, uint32_t r, double s) {
    if (s < 1.0 || s > std::pow(double(d), 0.25) / 2.0)
        throw parameter_error("ball_intersection_bounds: s outside [1, d^{1/4}/2]");
    if (2 * r >= d)
        throw parameter_error("ball_intersection_bounds: requires r < d/2");
    double t_real = d / 2.0 - s * std::sqrt(double(d)) / 2.0;
    uint32_t t = uint32_t(std::floor(t_real));
    BoundsReport rep;
    rep.quantity = "I * 2^-d (hamming ball intersection mass)";
    std::ostringstream os;
    os << "d=" << d << " r=" << r << " s=" << s << " t=" << t;
    rep.inputs = os.str();
    rep.lower = ball_intersection_lower(d, r, s);
    rep.upper = std::exp(-s * s / (2.0 * (1.0 - double(r) / d)));
    if (d <= 30) {
        rep.has_exact = true;
        rep.exact = double(ball_intersection_count(d, r, t)) * std::ldexp(1.0, -int(d));
    }
    return rep;
}

namespace {
double entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}
} // namespace

RatioChain binom_ratio_chain(uint32_t n, uint32_t m, uint32_t k) {
    if (!(n >= m && m >= k))
        throw parameter_error("binom_ratio_chain: requires n >= m >= k >= 0");
    RatioChain rc{};
    double log_nm = std::log(double(n)) - std::log(double(m));
    if (m == 0) { // n == m == k == 0: every term is 1
        for (auto& v : rc.chain_logs) v = 0.0;
        return rc;
    }
    rc.chain_logs[0] = k * log_nm;
    rc.chain_logs[1] = k * log_nm +
                       double(n - m) / (double(n) * double(m)) * (double(k) * (k - 1.0) / 2.0);
    // Exact ratio as a product of k rational factors, accumulated in logs.
    double lr = 0.0;
    for (uint32_t i = 0; i < k; ++i)
        lr += std::log(double(n - i)) - std::log(double(m - i));
    rc.chain_logs[2] = lr;
    rc.chain_logs[3] = n * entropy(double(k) / n) - m * entropy(double(k) / m);
    rc.chain_logs[4] = k * log_nm + double(k) * k / m;
    return rc;
}

BoundsReport binom_ratio_bounds(uint32_t n, uint32_t m, uint32_t k) {
    RatioChain rc = binom_ratio_chain(n, m, k);
    BoundsReport rep;
    rep.quantity = "log C(n,k)/C(m,k)";
    std::ostringstream os;
    os << "n=" << n << " m=" << m << " k=" << k;
    rep.inputs = os.str();
    rep.has_exact = true;
    rep.exact = rc.chain_logs[2];
    rep.lower = rc.chain_logs[1];
    rep.upper = rc.chain_logs[3];
    return rep;
}

uint64_t turan_volume_bound(uint32_t n, uint32_t k, uint32_t r) {
    if (!(n >= k && k >= r))
        throw parameter_error("turan_volume_bound: requires n >= k >= r");
    if (r == 0) return 1;
    if (n <= 63) {
        uint64_t num = binomial(n, r), den = binomial(k, r);
        return (num + den - 1) / den;
    }
    // Extended precision for large n, with a guard digit before the ceiling.
    long double ratio = 1.0L;
    for (uint32_t i = 0; i < r; ++i)
        ratio *= (long double)(n - i) / (long double)(k - i);
    return uint64_t(ceill(ratio - 1e-9L));
}

} // namespace oracle
} // namespace lvlsf
