#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "lvlsf/errors.hpp"
#include "lvlsf/inner_code.hpp"
#include "test_oracles.hpp"

using namespace lvlsf;

TEST_CASE("full cube covers any pair budget with the midpoint radius") {
    // (b=4, r=2, t=1): any pair at distance 2 shares its midpoint
    auto cube = build_inner_code_radius(4, 2, 1, Seed(1), InnerCodeMode::full_cube);
    CHECK(cube.size() == 16);
    CHECK(verify_inner_code(cube, 4, 2, 1));

    // (b=4, r=0, t=0): the cube is the unique minimal solution
    auto exact = build_inner_code_radius(4, 0, 0, Seed(1), InnerCodeMode::full_cube);
    CHECK(verify_inner_code(exact, 4, 0, 0));
    // dropping any word breaks covering
    InnerCode broken = exact;
    broken.mode = InnerCodeMode::sampled;
    broken.words.clear();
    for (uint64_t wv = 1; wv < 16; ++wv) broken.words.push_back(wv);
    CHECK(!verify_inner_code(broken, 4, 0, 0));

    for (uint32_t b : {6u, 10u, 14u})
        for (uint32_t r = 0; r <= b / 2; ++r)
            REQUIRE(verify_inner_code(
                build_inner_code_radius(b, r, (r + 1) / 2, Seed(1), InnerCodeMode::full_cube),
                b, r, (r + 1) / 2));
}

TEST_CASE("single word cannot cover distant pairs") {
    InnerCode one;
    one.mode = InnerCodeMode::sampled;
    one.b = 4;
    one.r_b = 2;
    one.t_b = 1;
    one.words = {0}; // only 0000
    CHECK(!verify_inner_code(one, 4, 2, 1));
}

TEST_CASE("sampled code (b=6, r=2, t=2) verifies and beats nothing smaller than greedy") {
    auto sampled = build_inner_code_radius(6, 2, 2, Seed(2024), InnerCodeMode::sampled);
    CHECK(verify_inner_code(sampled, 6, 2, 2));
    CHECK(sampled.words.size() <= sampled.sample_budget);

    auto greedy = build_inner_code_radius(6, 2, 2, Seed(2024), InnerCodeMode::greedy);
    CHECK(verify_inner_code(greedy, 6, 2, 2));
    // greedy is a near-minimal verified code; the sampled one is no smaller
    CHECK(sampled.words.size() >= greedy.words.size());
}

TEST_CASE("one sampling round succeeds with constant probability (100 seeds)") {
    // Re-create single rounds by hand at the budgeted size and count how
    // many verify; the retry loop in the builder needs only a constant rate.
    auto reference = build_inner_code_radius(6, 2, 2, Seed(0), InnerCodeMode::sampled);
    const uint64_t budget = reference.sample_budget;
    uint32_t successes = 0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(Seed(seed).child(0));
        InnerCode code;
        code.mode = InnerCodeMode::sampled;
        code.b = 6;
        code.r_b = 2;
        code.t_b = 2;
        for (uint64_t i = 0; i < budget; ++i) code.words.push_back(rng.next_u64() & 63);
        std::sort(code.words.begin(), code.words.end());
        code.words.erase(std::unique(code.words.begin(), code.words.end()), code.words.end());
        if (verify_inner_code(code, 6, 2, 2)) ++successes;
    }
    CHECK(successes >= 50);
}

TEST_CASE("parity class code: r_b <= 1 with t = 1") {
    for (uint32_t b : {4u, 8u, 14u}) {
        auto par = build_inner_code_radius(b, 1, 1, Seed(3), InnerCodeMode::parity);
        CHECK(par.size() == (1ULL << (b - 1)));
        CHECK(verify_inner_code(par, b, 1, 1));
        CHECK(verify_inner_code(par, b, 0, 1));
    }
    CHECK_THROWS_AS(build_inner_code_radius(8, 2, 1, Seed(3), InnerCodeMode::parity),
                    parameter_error);
}

TEST_CASE("verify parallel matches the serial reference") {
    auto code = build_inner_code_radius(8, 2, 2, Seed(9), InnerCodeMode::sampled);
    for (uint32_t t : {1u, 2u, 3u}) {
        CHECK(verify_inner_code(code, 8, 2, t) == verify_inner_code_serial(code, 8, 2, t));
        CHECK(verify_inner_code(code, 8, 3, t) == verify_inner_code_serial(code, 8, 3, t));
    }
}

TEST_CASE("decode matches a brute scan of the materialized words") {
    for (auto mode : {InnerCodeMode::full_cube, InnerCodeMode::parity, InnerCodeMode::sampled}) {
        uint32_t b = 10, r = 1, t = mode == InnerCodeMode::sampled ? 2 : 1;
        auto code = build_inner_code_radius(b, r, t, Seed(4), mode);
        for (uint64_t x = 0; x < (1u << b); x += 37) {
            std::vector<uint64_t> got;
            code.decode_into(x, got);
            // Brute reference: structured indices are word values; sampled
            // indices are positions in the word list.
            std::vector<uint64_t> want;
            if (mode == InnerCodeMode::sampled) {
                for (uint64_t idx = 0; idx < code.words.size(); ++idx)
                    if (testutil::popcnt(code.words[size_t(idx)] ^ x) <= t) want.push_back(idx);
            } else {
                for (uint64_t w = 0; w < (1u << b); ++w) {
                    if (mode == InnerCodeMode::parity && testutil::popcnt(w) % 2 != 0) continue;
                    if (testutil::popcnt(w ^ x) <= t) want.push_back(w);
                }
            }
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            REQUIRE(got == want);
        }
    }
}

TEST_CASE("covers_pair agrees with decode intersection") {
    for (auto mode : {InnerCodeMode::full_cube, InnerCodeMode::parity, InnerCodeMode::sampled}) {
        uint32_t b = 8, r = 1, t = mode == InnerCodeMode::sampled ? 2 : 1;
        auto code = build_inner_code_radius(b, r, t, Seed(5), mode);
        for (uint64_t x = 0; x < 256; x += 3) {
            for (uint64_t y = 0; y < 256; y += 5) {
                std::vector<uint64_t> dx, dy;
                code.decode_into(x, dx);
                code.decode_into(y, dy);
                std::sort(dx.begin(), dx.end());
                std::sort(dy.begin(), dy.end());
                std::vector<uint64_t> both;
                std::set_intersection(dx.begin(), dx.end(), dy.begin(), dy.end(),
                                      std::back_inserter(both));
                REQUIRE(code.covers_pair(x, y) == !both.empty());
            }
        }
    }
}

TEST_CASE("feasibility and guards") {
    // t below ceil(r/2): no word can cover a worst-case pair
    CHECK_THROWS_AS(build_inner_code_radius(8, 4, 1, Seed(0), InnerCodeMode::full_cube),
                    parameter_error);
    // verification cost guard
    auto cube = build_inner_code_radius(4, 2, 1, Seed(0), InnerCodeMode::full_cube);
    CHECK_THROWS_AS(verify_inner_code(cube, 17, 2, 1), cost_guard_error);
    // s'-surface wrapper applies the ceiling
    auto viaS = build_inner_code(6, 2, 0.5, Seed(1));
    CHECK(viaS.t_b == 3); // ceil(3 - 0.25*sqrt(6)) = ceil(2.39)
    CHECK(verify_inner_code(viaS, 6, 2, viaS.t_b));
}
