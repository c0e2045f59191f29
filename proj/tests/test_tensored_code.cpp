#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lvlsf/errors.hpp"
#include "lvlsf/tensored_code.hpp"
#include "test_oracles.hpp"

using namespace lvlsf;

namespace {

TensoredCode toy_code(uint32_t B, uint32_t b, uint32_t r_b, uint32_t t_b, InnerCodeMode mode,
                      uint64_t seed = 1) {
    return build_tensored_code(build_inner_code_radius(b, r_b, t_b, Seed(seed), mode), B);
}

std::vector<FilterKey> decode_sorted(const TensoredCode& code, const BitVector& x) {
    std::vector<FilterKey> keys;
    code.decode(x, keys);
    std::sort(keys.begin(), keys.end());
    return keys;
}

bool keys_intersect(const std::vector<FilterKey>& a, const std::vector<FilterKey>& b) {
    std::vector<FilterKey> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return !both.empty();
}

} // namespace

TEST_CASE("B = b: single-part tensoring equals the inner code") {
    auto code = toy_code(6, 6, 2, 2, InnerCodeMode::sampled);
    CHECK(code.parts() == 1);
    CHECK(code.splitter().size() == 1);
    CHECK(code.log_size() == doctest::Approx(std::log(double(code.inner().size()))));
    for (uint64_t x = 0; x < 64; ++x) {
        std::vector<uint64_t> inner_ids;
        code.inner().decode_into(x, inner_ids);
        auto keys = decode_sorted(code, BitVector::from_bits(x, 6));
        REQUIRE(keys.size() == inner_ids.size());
        std::sort(inner_ids.begin(), inner_ids.end());
        for (size_t i = 0; i < keys.size(); ++i) {
            REQUIRE(keys[i].hi == 0);
            REQUIRE(keys[i].lo == inner_ids[i]);
        }
    }
}

TEST_CASE("materialized tiny code: structure and size accounting") {
    auto code = toy_code(8, 4, 2, 1, InnerCodeMode::full_cube);
    auto all = code.materialize();
    // |C| = |Pi| * |A|^{B/b}, with every id distinct
    const double expect_log = std::log(double(code.splitter().size())) +
                              2.0 * std::log(16.0);
    CHECK(code.log_size() == doctest::Approx(expect_log));
    CHECK(double(all.size()) == doctest::Approx(std::exp(expect_log)));
    std::set<std::pair<uint64_t, uint64_t>> ids;
    for (auto& [key, vec] : all) ids.insert({key.hi, key.lo});
    CHECK(ids.size() == all.size());

    // each codeword's restriction to part k equals the chosen inner word
    for (auto& [key, cw] : all) {
        size_t fn = size_t(key.hi);
        for (uint32_t j = 0; j < code.parts(); ++j) {
            uint64_t idx = (key.lo >> (j * code.inner().index_bits())) &
                           ((1ULL << code.inner().index_bits()) - 1);
            auto coords = code.splitter().part_indices(fn, uint8_t(j));
            uint64_t expect = code.inner().word_value(idx);
            for (size_t i = 0; i < coords.size(); ++i)
                REQUIRE(cw.get(coords[i]) == ((expect >> i) & 1));
        }
    }
}

TEST_CASE("zero-distance containment: a codeword decodes to itself") {
    auto code = toy_code(8, 4, 2, 1, InnerCodeMode::full_cube);
    auto all = code.materialize();
    for (size_t i = 0; i < all.size(); i += 7) {
        auto keys = decode_sorted(code, all[i].second);
        REQUIRE(std::binary_search(keys.begin(), keys.end(), all[i].first));
    }
}

TEST_CASE("exhaustive covering at B=8, b=4 and decode/shares agreement") {
    auto code = toy_code(8, 4, 2, 1, InnerCodeMode::full_cube);
    const uint32_t r = 4; // splitter splits <=4 differences into <=2 per part
    for (uint64_t x = 0; x < 256; ++x) {
        auto vx = BitVector::from_bits(x, 8);
        auto kx = decode_sorted(code, vx);
        for (uint64_t y = x; y < 256; ++y) {
            auto vy = BitVector::from_bits(y, 8);
            bool shares = code.shares_filter(vx, vy);
            if (testutil::popcnt(x ^ y) <= r) REQUIRE(shares);
            if ((x * 7 + y) % 23 == 0) { // literal intersection on a subsample
                auto ky = decode_sorted(code, vy);
                REQUIRE(shares == keys_intersect(kx, ky));
            }
        }
    }
}

TEST_CASE("exhaustive covering with a sampled inner code (B=10, b=5)") {
    auto code = toy_code(10, 5, 2, 2, InnerCodeMode::sampled, 7);
    const uint32_t r = 4;
    for (uint64_t x = 0; x < 1024; ++x) {
        auto vx = BitVector::from_bits(x, 10);
        for (uint64_t m = 1; m < 1024; m = (m << 1) | 1) { // nested masks up to weight 10
            uint64_t y = x ^ m;
            if (testutil::popcnt(x ^ y) > r) break;
            REQUIRE(code.shares_filter(vx, BitVector::from_bits(y, 10)));
        }
    }
}

TEST_CASE("expected decode size: Monte Carlo within 3 SE of exact enumeration") {
    auto code = toy_code(8, 4, 2, 1, InnerCodeMode::full_cube);
    // exact E|C(x)| by enumerating all 256 inputs
    double exact_mean = 0;
    std::vector<FilterKey> keys;
    for (uint64_t x = 0; x < 256; ++x) {
        keys.clear();
        code.decode(BitVector::from_bits(x, 8), keys);
        exact_mean += double(keys.size());
    }
    exact_mean /= 256.0;

    Rng rng(Seed(99));
    const int trials = 1000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < trials; ++i) {
        keys.clear();
        code.decode(BitVector::from_bits(rng.next_u64() & 255, 8), keys);
        sum += double(keys.size());
        sumsq += double(keys.size()) * double(keys.size());
    }
    double mean = sum / trials;
    double var = (sumsq - sum * sum / trials) / (trials - 1);
    double se = std::sqrt(var / trials);
    CHECK(std::abs(mean - exact_mean) <= 3.0 * se + 1e-9);
}

TEST_CASE("padding: outer dimension not divisible by b") {
    auto code = toy_code(10, 4, 2, 1, InnerCodeMode::full_cube);
    CHECK(code.padded_dim() == 12);
    CHECK(code.parts() == 3);
    Rng rng(Seed(13));
    for (int i = 0; i < 2000; ++i) {
        uint64_t x = rng.next_u64() & 1023;
        uint64_t mask = 0;
        for (int bshift = 0; bshift < 3; ++bshift) mask |= 1ULL << rng.below(10);
        auto vx = BitVector::from_bits(x, 10), vy = BitVector::from_bits(x ^ mask, 10);
        if (hamming_distance(vx, vy) <= 3) REQUIRE(code.shares_filter(vx, vy));
    }
}

TEST_CASE("production shape: 10^5 planted pairs always share a filter") {
    // The index planner's preferred configuration: single-part full-cube
    // code at B = 32 with pair budget 2 and radius 1.
    auto code = toy_code(32, 32, 2, 1, InnerCodeMode::full_cube);
    Rng rng(Seed(41));
    for (int trial = 0; trial < 100000; ++trial) {
        uint64_t x = rng.next_u64() & 0xffffffffULL;
        uint64_t y = x;
        uint32_t flips = uint32_t(rng.below(3)); // distance 0..2
        for (uint32_t i = 0; i < flips; ++i) y ^= 1ULL << rng.below(32);
        REQUIRE(code.shares_filter(BitVector::from_bits(x, 32), BitVector::from_bits(y, 32)));
    }
    // and the parity-class variant with budget 1
    auto par = toy_code(32, 32, 1, 1, InnerCodeMode::parity);
    for (int trial = 0; trial < 100000; ++trial) {
        uint64_t x = rng.next_u64() & 0xffffffffULL;
        uint64_t y = rng.coin() ? x ^ (1ULL << rng.below(32)) : x;
        REQUIRE(par.shares_filter(BitVector::from_bits(x, 32), BitVector::from_bits(y, 32)));
    }
}

TEST_CASE("decoding soundness: every id is a codeword within l*t_b of x") {
    auto code = toy_code(8, 4, 2, 1, InnerCodeMode::full_cube);
    auto all = code.materialize();
    std::map<std::pair<uint64_t, uint64_t>, BitVector> by_id;
    for (auto& [key, cw] : all) by_id.emplace(std::make_pair(key.hi, key.lo), cw);
    const uint32_t t_outer = code.parts() * code.inner().t_b;
    std::vector<FilterKey> keys;
    for (uint64_t x = 0; x < 256; ++x) {
        keys.clear();
        auto vx = BitVector::from_bits(x, 8);
        code.decode(vx, keys);
        for (const auto& key : keys) {
            auto it = by_id.find({key.hi, key.lo});
            REQUIRE(it != by_id.end());
            REQUIRE(hamming_distance(it->second, vx) <= t_outer);
        }
    }
}

TEST_CASE("dimension and cap errors") {
    auto code = toy_code(8, 4, 2, 1, InnerCodeMode::full_cube);
    std::vector<FilterKey> keys;
    CHECK_THROWS_AS(code.decode(BitVector(7), keys), dimension_error);
    CHECK_THROWS_AS(code.shares_filter(BitVector(8), BitVector(7)), dimension_error);
    CHECK_THROWS_AS(code.decode(BitVector(8), keys, 3), cost_guard_error);
    auto big = toy_code(16, 8, 2, 1, InnerCodeMode::full_cube);
    CHECK_THROWS_AS(big.materialize(1000), cost_guard_error);
}
