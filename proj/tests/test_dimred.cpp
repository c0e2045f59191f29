#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lvlsf/dimred.hpp"
#include "lvlsf/errors.hpp"
#include "test_oracles.hpp"

using namespace lvlsf;

namespace {

BitVector random_point(Rng& rng, uint32_t d) {
    BitVector v(d);
    for (size_t w = 0; w < v.word_count(); ++w) v.data()[w] = rng.next_u64();
    v.mask_tail();
    return v;
}

BitVector flip_random(const BitVector& x, uint32_t count, Rng& rng) {
    BitVector y = x;
    std::vector<uint32_t> coords(x.dim());
    for (uint32_t i = 0; i < x.dim(); ++i) coords[i] = i;
    for (uint32_t i = 0; i < count; ++i) {
        uint32_t j = i + uint32_t(rng.below(x.dim() - i));
        std::swap(coords[i], coords[j]);
        y.flip(coords[i]);
    }
    return y;
}

uint32_t min_block_distance(const std::vector<BitVector>& fx, const std::vector<BitVector>& fy) {
    uint32_t best = UINT32_MAX;
    for (size_t i = 0; i < fx.size(); ++i)
        best = std::min(best, hamming_distance(fx[i], fy[i]));
    return best;
}

} // namespace

TEST_CASE("xor reduction: identity when B >= d") {
    auto red = build_xor_reduction(64, 4, 2.0, 0.5, 1.0 / 256, Seed(1));
    CHECK(red.identity);
    CHECK(red.S == 1);
    Rng rng(Seed(2));
    auto x = random_point(rng, 64);
    CHECK(red.apply(x).size() == 1);
    CHECK(red.apply(x)[0] == x);
}

TEST_CASE("xor reduction parameter surface") {
    CHECK_THROWS_AS(build_xor_reduction(64, 4, 2.0, 0.5, 0.5, Seed(1)), parameter_error);
    CHECK_THROWS_AS(build_xor_reduction(4, 4, 2.0, 0.5, 1e-3, Seed(1)), parameter_error);
    auto red = build_xor_reduction_explicit(512, 96, 32, Seed(1));
    CHECK(red.S == 3);
    CHECK(red.m % red.B == 0);
    // determinism
    auto red2 = build_xor_reduction_explicit(512, 96, 32, Seed(1));
    CHECK(red.bucket_of == red2.bucket_of);
}

TEST_CASE("xor parity semantics") {
    auto red = build_xor_reduction_explicit(100, 24, 8, Seed(3));
    // all-zeros maps to all-zeros
    BitVector zero(100);
    for (auto& f : red.apply(zero)) CHECK(f.weight() == 0);
    // a single 1 at coordinate j sets exactly one output coordinate
    for (uint32_t j = 0; j < 100; j += 13) {
        BitVector x(100);
        x.set(j);
        auto g = red.apply_g(x);
        CHECK(g.weight() == 1);
        CHECK(g.get(red.bucket_of[j]));
    }
}

TEST_CASE("xor parity never increases distances (10^5 pairs)") {
    auto red = build_xor_reduction_explicit(256, 96, 32, Seed(4));
    Rng rng(Seed(5));
    for (int trial = 0; trial < 100000; ++trial) {
        auto x = random_point(rng, 256);
        auto y = trial % 2 ? flip_random(x, 1 + uint32_t(rng.below(64)), rng)
                           : random_point(rng, 256);
        REQUIRE(hamming_distance(red.apply_g(x), red.apply_g(y)) <= hamming_distance(x, y));
    }
}

TEST_CASE("xor property 1 holds with certainty") {
    auto red = build_xor_reduction_explicit(256, 96, 32, Seed(6));
    Rng rng(Seed(7));
    for (int trial = 0; trial < 20000; ++trial) {
        auto x = random_point(rng, 256);
        auto y = flip_random(x, uint32_t(rng.below(200)), rng);
        uint32_t dist = hamming_distance(x, y);
        REQUIRE(min_block_distance(red.apply(x), red.apply(y)) <= dist / red.S);
    }
}

TEST_CASE("xor property 2: empirical failure rate within the delta budget") {
    // Parameters sized so the formula path emits a multi-block reduction
    // while meeting the 1/delta >= m assumption.
    const uint32_t d = 512, r = 128;
    const double c = 2.0, eps = 0.9, delta = 1e-3;
    auto red = build_xor_reduction(d, r, c, eps, delta, Seed(8));
    REQUIRE(!red.identity);
    REQUIRE(red.S >= 2);
    Rng rng(Seed(9));
    const int trials = 20000;
    uint64_t failures = 0, blocks = 0;
    const double threshold = (1.0 - eps) * (c * r) / red.S;
    for (int t = 0; t < trials; ++t) {
        auto x = random_point(rng, d);
        auto y = flip_random(x, uint32_t(c * r), rng);
        auto fx = red.apply(x), fy = red.apply(y);
        for (uint32_t i = 0; i < red.S; ++i, ++blocks)
            if (hamming_distance(fx[i], fy[i]) < threshold) ++failures;
    }
    // one-sided 99% binomial bound around delta
    double phat = double(failures) / double(blocks);
    double bound = delta + 2.576 * std::sqrt(delta * (1 - delta) / double(blocks));
    CHECK(phat <= bound);
}

TEST_CASE("partition reduction: block distances sum to the full distance") {
    auto red = build_partition_reduction_explicit(100, 20, Seed(10));
    Rng rng(Seed(11));
    for (int trial = 0; trial < 5000; ++trial) {
        auto x = random_point(rng, 100);
        auto y = random_point(rng, 100);
        auto fx = red.apply(x), fy = red.apply(y);
        uint32_t total = 0;
        for (uint32_t i = 0; i < red.S; ++i) total += hamming_distance(fx[i], fy[i]);
        REQUIRE(total == hamming_distance(x, y));
        // property 1 via averaging
        REQUIRE(min_block_distance(fx, fy) <= hamming_distance(x, y) * red.B / red.d_pad);
        // identical points land at 0 everywhere
        if (trial == 0) {
            auto fz = red.apply(x);
            for (uint32_t i = 0; i < red.S; ++i) REQUIRE(hamming_distance(fx[i], fz[i]) == 0);
        }
    }
}

TEST_CASE("partition far pairs stay far (Hoeffding regime)") {
    // d=256, cr=64, eps=0.5, n=1024 -> B = 222 <= d
    auto red = build_partition_reduction(256, 32, 2.0, 0.5, 1024, Seed(12));
    REQUIRE(red.S >= 2);
    Rng rng(Seed(13));
    const int trials = 20000;
    uint64_t failures = 0, blocks = 0;
    const double threshold = (1.0 - 0.5) * 64.0 * red.B / red.d_pad;
    for (int t = 0; t < trials; ++t) {
        auto x = random_point(rng, 256);
        auto y = flip_random(x, 64, rng);
        auto fx = red.apply(x), fy = red.apply(y);
        for (uint32_t i = 0; i < red.S; ++i, ++blocks)
            if (hamming_distance(fx[i], fy[i]) < threshold) ++failures;
    }
    double phat = double(failures) / double(blocks);
    double delta = 1.0 / 1024;
    CHECK(phat <= delta + 2.576 * std::sqrt(delta * (1 - delta) / double(blocks)));
}

TEST_CASE("partition parameter surface") {
    CHECK_THROWS_AS(build_partition_reduction(64, 1, 2.0, 0.25, 1u << 20, Seed(1)),
                    parameter_error); // B would exceed d
    CHECK_THROWS_AS(build_partition_reduction_explicit(10, 11, Seed(1)), parameter_error);
    auto red = build_partition_reduction_explicit(100, 32, Seed(2));
    CHECK(red.d_pad == 128);
    CHECK(red.S == 4);
    BitVector x(99);
    CHECK_THROWS_AS(red.apply(x), dimension_error);
}
