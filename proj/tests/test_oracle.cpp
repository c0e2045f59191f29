#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lvlsf/errors.hpp"
#include "lvlsf/oracle.hpp"
#include "lvlsf/rng.hpp"
#include "test_oracles.hpp"

using namespace lvlsf;
using namespace lvlsf::oracle;

TEST_CASE("linear scan ground truth") {
    std::vector<BitVector> pts;
    Rng rng(Seed(5));
    for (int i = 0; i < 300; ++i) pts.push_back(BitVector::from_bits(rng.next_u64(), 48));

    // q in P at threshold 0 contains q's id
    auto hits = linear_scan_hamming(pts, pts[17], 0);
    CHECK(std::find(hits.begin(), hits.end(), 17u) != hits.end());

    // empty P
    std::vector<BitVector> empty;
    CHECK(linear_scan_hamming(empty, pts[0], 5).empty());

    // parallel vs serial reference, plus an independent recount
    for (uint32_t t : {0u, 4u, 12u, 24u, 48u}) {
        auto q = BitVector::from_bits(rng.next_u64(), 48);
        auto par = linear_scan_hamming(pts, q, t);
        auto ser = linear_scan_hamming_serial(pts, q, t);
        REQUIRE(par == ser);
        uint32_t direct = 0;
        for (const auto& p : pts)
            if (hamming_distance(p, q) <= t) ++direct;
        REQUIRE(par.size() == direct);
    }
}

TEST_CASE("similarity scan ground truth") {
    std::vector<SetPoint> pts;
    Rng rng(Seed(6));
    for (int i = 0; i < 200; ++i) {
        std::vector<uint32_t> es;
        for (uint32_t e = 0; e < 64; ++e)
            if (rng.below(4) == 0) es.push_back(e);
        if (es.empty()) es.push_back(uint32_t(rng.below(64)));
        pts.emplace_back(std::move(es), 64);
    }
    auto q = pts[3];
    auto par = linear_scan_similarity(pts, q, 1, 2);
    auto ser = linear_scan_similarity_serial(pts, q, 1, 2);
    REQUIRE(par == ser);
    CHECK(std::find(par.begin(), par.end(), 3u) != par.end());
}

TEST_CASE("binomial coefficients") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(60, 30) == 118264581564861424ULL);
    CHECK(binomial(5, 9) == 0);
    CHECK_THROWS_AS(binomial(64, 2), cost_guard_error);
}

TEST_CASE("ball intersection count examples") {
    CHECK(ball_intersection_count(4, 2, 2) == 8);
    // coincident centers: ball volume
    for (uint32_t t : {0u, 1u, 3u}) {
        uint64_t vol = 0;
        for (uint32_t j = 0; j <= t; ++j) vol += binomial(9, j);
        CHECK(ball_intersection_count(9, 0, t) == vol);
    }
    // disjoint balls when 2t < r
    CHECK(ball_intersection_count(10, 10, 4) == 0);
    CHECK(ball_intersection_count(8, 7, 3) == 0);
    CHECK_THROWS_AS(ball_intersection_count(31, 2, 2), cost_guard_error);
}

TEST_CASE("ball intersection count equals exhaustive enumeration (d <= 12)") {
    for (uint32_t d : {2u, 5u, 8u, 12u})
        for (uint32_t r = 0; r <= d; ++r)
            for (uint32_t t = 0; t <= d; ++t)
                REQUIRE(ball_intersection_count(d, r, t) ==
                        testutil::ball_intersection_brute(d, r, t));
}

TEST_CASE("ball intersection monotone in t") {
    for (uint32_t r : {1u, 3u, 6u})
        for (uint32_t t = 1; t <= 14; ++t)
            REQUIRE(ball_intersection_count(14, r, t) >= ball_intersection_count(14, r, t - 1));
}

TEST_CASE("ball intersection bounds bracket the exact mass") {
    // s in [1, d^{1/4}/2] requires d >= 16
    for (double s : {1.0, std::pow(16.0, 0.25) / 2.0}) {
        for (uint32_t r = 0; 2 * r < 16; ++r) {
            auto rep = ball_intersection_bounds(16, r, s);
            REQUIRE(rep.has_exact);
            REQUIRE(rep.lower <= rep.exact + 1e-12);
            REQUIRE(rep.exact <= rep.upper + 1e-12);
        }
    }
    CHECK_THROWS_AS(ball_intersection_bounds(16, 2, 0.5), parameter_error);
    CHECK_THROWS_AS(ball_intersection_bounds(16, 2, 3.0), parameter_error);
    CHECK_THROWS_AS(ball_intersection_bounds(16, 8, 1.0), parameter_error);
}

TEST_CASE("binomial ratio chain") {
    // (4,2,2): exact ratio 6; chain 4 <= 6 <= 4e^2
    auto rc = binom_ratio_chain(4, 2, 2);
    CHECK(rc.chain_logs[0] == doctest::Approx(std::log(4.0)));
    CHECK(rc.chain_logs[2] == doctest::Approx(std::log(6.0)));
    CHECK(rc.chain_logs[4] == doctest::Approx(std::log(4.0) + 2.0));
    CHECK(rc.holds());

    // k = 0: every term is 1
    {
        auto r2 = binom_ratio_chain(7, 3, 0);
        for (double v : r2.chain_logs) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
    }
    // n = m: the four tight terms are 1; the final e^{k^2/m} slack is >= 1
    {
        auto r3 = binom_ratio_chain(9, 9, 4);
        for (int i = 0; i < 4; ++i) CHECK(r3.chain_logs[i] == doctest::Approx(0.0));
        CHECK(r3.chain_logs[4] >= 0.0);
        CHECK(r3.holds());
    }

    // full grid up to n = 40 in the unit test (acceptance pushes to 60)
    for (uint32_t n = 1; n <= 40; ++n)
        for (uint32_t m = 1; m <= n; ++m)
            for (uint32_t k = 0; k <= m; ++k)
                REQUIRE(binom_ratio_chain(n, m, k).holds());

    CHECK_THROWS_AS(binom_ratio_chain(3, 5, 2), parameter_error);
}

TEST_CASE("turan volume bound") {
    CHECK(turan_volume_bound(4, 3, 2) == 2);
    CHECK(turan_volume_bound(12, 6, 2) == 5);
    CHECK(turan_volume_bound(9, 4, 0) == 1);
    CHECK(turan_volume_bound(9, 9, 3) == 1);
    CHECK(turan_volume_bound(1024, 32, 4) == 1266547); // ceil(C(1024,4)/C(32,4))
    CHECK_THROWS_AS(turan_volume_bound(4, 5, 2), parameter_error);
}
