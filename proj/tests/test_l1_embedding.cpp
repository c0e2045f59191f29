#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lvlsf/errors.hpp"
#include "lvlsf/l1_embedding.hpp"
#include "test_oracles.hpp"

using namespace lvlsf;

namespace {

uint64_t symbol_distance(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    uint64_t dist = 0;
    for (size_t i = 0; i < a.size(); ++i) dist += a[i] != b[i];
    return dist;
}

double l1(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
    return s;
}

// Random points in a ball of radius `spread` around a center, plus exact
// l1-distance perturbations for planted pairs.
std::vector<std::vector<double>> cluster(Rng& rng, uint32_t d, size_t n, double spread) {
    std::vector<std::vector<double>> pts(n, std::vector<double>(d));
    for (auto& p : pts)
        for (auto& v : p) v = (rng.unit() - 0.5) * 2.0 * spread;
    return pts;
}

std::vector<double> perturb(const std::vector<double>& x, double dist, Rng& rng) {
    // Exact l1 displacement: random nonnegative weights summing to `dist`
    // with one fixed sign per coordinate (no cancellation).
    std::vector<double> w(x.size());
    double total = 0;
    for (auto& v : w) total += (v = rng.unit() + 1e-9);
    std::vector<double> y = x;
    for (size_t i = 0; i < x.size(); ++i)
        y[i] += (rng.coin() ? 1.0 : -1.0) * dist * w[i] / total;
    return y;
}

} // namespace

TEST_CASE("staircase map examples") {
    // M=8, R=4: h(1) = <0,0,0,1>, h(3) = <0,1,1,1>, distance 2
    CHECK(L1Embedding::staircase(1, 4) == std::vector<uint64_t>{0, 0, 0, 1});
    CHECK(L1Embedding::staircase(3, 4) == std::vector<uint64_t>{0, 1, 1, 1});
    CHECK(symbol_distance(L1Embedding::staircase(1, 4), L1Embedding::staircase(3, 4)) == 2);
    // mapping 100 and 105 with R=8 gives unary distance 5
    CHECK(symbol_distance(L1Embedding::staircase(100, 8), L1Embedding::staircase(105, 8)) == 5);
}

TEST_CASE("staircase identity dist(h(c1),h(c2)) = min(|c1-c2|, R), M <= 256") {
    for (uint64_t R : {1ULL, 3ULL, 8ULL, 16ULL}) {
        for (uint64_t c1 = 0; c1 <= 256; ++c1)
            for (uint64_t c2 = c1; c2 <= 256; ++c2)
                REQUIRE(symbol_distance(L1Embedding::staircase(c1, R),
                                        L1Embedding::staircase(c2, R)) ==
                        std::min(c2 - c1, R));
    }
}

TEST_CASE("grid offsets keep every build point r-clear of boundaries") {
    Rng rng(Seed(21));
    const uint32_t d = 3;
    const double r = 0.5;
    auto pts = cluster(rng, d, 40, 30.0);
    auto emb = build_l1_embedding(pts, d, r, 2.0, 0.5, Seed(22));
    const double side = 2.0 * r * double(pts.size());
    (void)side;
    // Embed each point and its tiny perturbations; same cell expected.
    for (const auto& p : pts) {
        auto e1 = emb.embed_point(p);
        std::vector<double> q = p;
        for (auto& v : q) v += (rng.unit() - 0.5) * (2.0 * r / d) * 0.99;
        auto e2 = emb.embed_point(q);
        REQUIRE(e1.cell == e2.cell); // within r of a stored point -> same cell
    }
}

TEST_CASE("identical points embed at distance zero") {
    Rng rng(Seed(23));
    auto pts = cluster(rng, 4, 20, 5.0);
    auto emb = build_l1_embedding(pts, 4, 1.0, 2.0, 0.5, Seed(24));
    for (const auto& p : pts) {
        auto a = emb.embed_point(p);
        auto b = emb.embed_point(p);
        CHECK(hamming_distance(a.bits, b.bits) == 0);
    }
}

TEST_CASE("near/far distortion bands, one-sided near guarantee") {
    Rng rng(Seed(25));
    const uint32_t d = 4;
    const double r = 1.0, c = 2.0, eps = 0.5;
    auto pts = cluster(rng, d, 50, 4.0); // tight cluster: pairs stay in one cell
    auto emb = build_l1_embedding(pts, d, r, c, eps, Seed(26));
    const double sr = emb.bits_per_unit() * r;

    uint32_t near_violations = 0, far_violations = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto& p = pts[rng.below(pts.size())];
        auto near_q = perturb(p, r * (0.2 + 0.8 * rng.unit()), rng);
        auto far_q = perturb(p, c * r * (1.0 + rng.unit()), rng);
        auto ep = emb.embed_point(p);
        auto en = emb.embed_point(near_q);
        auto ef = emb.embed_point(far_q);
        REQUIRE(en.cell == ep.cell);
        REQUIRE(ef.cell == ep.cell);
        double dn = hamming_distance(ep.bits, en.bits);
        double df = hamming_distance(ep.bits, ef.bits);
        if (dn > (1.0 + eps) * sr) ++near_violations;
        if (df < (1.0 - eps) * c * sr) ++far_violations;
    }
    CHECK(near_violations == 0); // hard one-sided guarantee
    CHECK(far_violations == 0);
}

TEST_CASE("prefix mode separates cells") {
    Rng rng(Seed(27));
    const uint32_t d = 2;
    const double r = 0.25, c = 2.0, eps = 0.5;
    // two clusters far apart -> distinct cells
    auto pts = cluster(rng, d, 10, 1.0);
    auto far_cluster = cluster(rng, d, 10, 1.0);
    for (auto& p : far_cluster) {
        for (auto& v : p) v += 1e6;
        pts.push_back(p);
    }
    auto emb = build_l1_embedding(pts, d, r, c, eps, Seed(28), /*prefix_mode=*/true);
    REQUIRE(emb.cell_count() >= 2);
    const double far_threshold = (1.0 - eps) * c * emb.bits_per_unit() * r;
    auto e0 = emb.embed_point(pts[0]);
    auto ef = emb.embed_point(pts[15]);
    CHECK(e0.cell.empty()); // prefix mode embeds globally
    CHECK(double(hamming_distance(e0.bits, ef.bits)) >= far_threshold);
    // same-cell near pair unaffected by the prefix
    auto nq = perturb(pts[0], r * 0.8, rng);
    auto en = emb.embed_point(nq);
    CHECK(double(hamming_distance(e0.bits, en.bits)) <= (1.0 + eps) * emb.bits_per_unit() * r);

    // unseen cell
    std::vector<double> outside = {5e8, -5e8};
    CHECK_THROWS_AS(emb.embed_point(outside), parameter_error);
}

TEST_CASE("parameter surface") {
    Rng rng(Seed(29));
    auto pts = cluster(rng, 3, 8, 2.0);
    CHECK_THROWS_AS(build_l1_embedding({}, 3, 1.0, 2.0, 0.5, Seed(1)), parameter_error);
    CHECK_THROWS_AS(build_l1_embedding(pts, 3, 0.0, 2.0, 0.5, Seed(1)), parameter_error);
    CHECK_THROWS_AS(build_l1_embedding(pts, 3, 1.0, 2.0, 1.5, Seed(1)), parameter_error);
    std::vector<std::vector<double>> bad = {{1.0, 2.0}};
    CHECK_THROWS_AS(build_l1_embedding(bad, 3, 1.0, 2.0, 0.5, Seed(1)), dimension_error);
}
