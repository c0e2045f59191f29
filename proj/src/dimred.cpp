#include "lvlsf/dimred.hpp"

#include <cmath>
#include <numeric>

#include "lvlsf/errors.hpp"

namespace lvlsf {

BitVector XorReduction::apply_g(const BitVector& x) const {
    if (x.dim() != d)
        throw dimension_error("xor reduction: dim mismatch");
    if (identity) return x;
    BitVector g(m);
    for (uint32_t i = 0; i < d; ++i)
        if (x.get(i)) g.flip(bucket_of[i]);
    return g;
}

std::vector<BitVector> XorReduction::apply(const BitVector& x) const {
    BitVector g = apply_g(x);
    if (identity) return {g};
    std::vector<BitVector> out;
    out.reserve(S);
    for (uint32_t i = 0; i < S; ++i) {
        BitVector f(B);
        for (uint32_t j = 0; j < B; ++j)
            if (g.get(i * B + j)) f.set(j);
        out.push_back(std::move(f));
    }
    return out;
}

XorReduction build_xor_reduction_explicit(uint32_t d, uint32_t m, uint32_t B, const Seed& seed) {
    if (B == 0 || m == 0 || m % B != 0)
        throw parameter_error("xor reduction: need B | m, B >= 1");
    XorReduction red;
    red.d = d;
    red.m = m;
    red.B = B;
    red.S = m / B;
    Rng rng(seed);
    red.bucket_of.resize(d);
    for (auto& b : red.bucket_of) b = uint32_t(rng.below(m));
    return red;
}

XorReduction build_xor_reduction(uint32_t d, uint32_t r, double c, double eps, double delta,
                                 const Seed& seed) {
    if (!(r >= 1) || !(c * r > r) || !(d >= c * r))
        throw parameter_error("xor reduction: requires d >= cr > r >= 1");
    if (!(eps > 0) || !(delta > 0) || delta >= 1)
        throw parameter_error("xor reduction: eps, delta must be in (0,1)");
    double m0 = 3.0 * c * r / eps;
    if (1.0 / delta < m0)
        throw parameter_error("xor reduction: requires 1/delta >= m = 3cr/eps");
    uint32_t B = uint32_t(std::ceil(27.0 * std::pow(eps, -3.0) * std::log(1.0 / delta)));
    if (B >= d) {
        // Identity short-circuit: the whole vector is one block.
        XorReduction red;
        red.d = d;
        red.m = d;
        red.B = d;
        red.S = 1;
        red.identity = true;
        red.epsilon = eps;
        red.delta = delta;
        return red;
    }
    // Round m up to a multiple of B (adjusting eps by a constant factor);
    // never below B so that S >= 1.
    uint32_t m = uint32_t(std::ceil(m0 / B)) * B;
    if (m < B) m = B;
    XorReduction red = build_xor_reduction_explicit(d, m, B, seed);
    red.epsilon = eps;
    red.delta = delta;
    return red;
}

std::vector<BitVector> PartitionReduction::apply(const BitVector& x) const {
    if (x.dim() != d)
        throw dimension_error("partition reduction: dim mismatch");
    std::vector<BitVector> out;
    out.reserve(S);
    for (uint32_t i = 0; i < S; ++i) {
        BitVector f(B);
        for (uint32_t j = 0; j < B; ++j) {
            uint32_t src = perm[i * B + j];
            if (src < d && x.get(src)) f.set(j);
        }
        out.push_back(std::move(f));
    }
    return out;
}

PartitionReduction build_partition_reduction_explicit(uint32_t d, uint32_t B, const Seed& seed) {
    if (B == 0 || B > d)
        throw parameter_error("partition reduction: need 1 <= B <= d");
    PartitionReduction red;
    red.d = d;
    red.B = B;
    red.d_pad = (d + B - 1) / B * B;
    red.S = red.d_pad / B;
    red.perm.resize(red.d_pad);
    std::iota(red.perm.begin(), red.perm.end(), 0u);
    Rng rng(seed);
    rng.shuffle(red.perm);
    return red;
}

PartitionReduction build_partition_reduction(uint32_t d, uint32_t r, double c, double eps,
                                             uint64_t n, const Seed& seed) {
    if (!(eps > 0) || r == 0 || c <= 0 || n < 2)
        throw parameter_error("partition reduction: bad parameters");
    double B0 = 2.0 * std::pow(eps, -2.0) * (double(d) / (c * r)) * std::log(double(n));
    uint32_t B = uint32_t(std::ceil(B0));
    if (B > d)
        throw parameter_error("partition reduction: B = " + std::to_string(B) +
                              " exceeds d = " + std::to_string(d));
    PartitionReduction red = build_partition_reduction_explicit(d, B, seed);
    red.epsilon = eps;
    return red;
}

} // namespace lvlsf
