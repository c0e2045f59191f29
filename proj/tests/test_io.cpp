#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "lvlsf/errors.hpp"
#include "lvlsf/io.hpp"
#include "lvlsf/rng.hpp"
#include "test_oracles.hpp"

using namespace lvlsf;

TEST_CASE("hamming point files round trip") {
    HammingDataset ds;
    ds.dim = 12;
    Rng rng(Seed(90));
    for (int i = 0; i < 30; ++i) {
        BitVector v(12);
        for (uint32_t j = 0; j < 12; ++j)
            if (rng.coin()) v.set(j);
        ds.points.push_back(v);
    }
    std::stringstream buf;
    write_hamming(buf, ds);
    CHECK(peek_format(buf) == "hamming");
    auto back = read_hamming(buf);
    CHECK(back.dim == ds.dim);
    REQUIRE(back.points.size() == ds.points.size());
    for (size_t i = 0; i < ds.points.size(); ++i) REQUIRE(back.points[i] == ds.points[i]);
}

TEST_CASE("hamming header and hex errors") {
    std::istringstream bad1("hamming d=8\n");
    CHECK_THROWS_AS(read_hamming(bad1), parameter_error);
    std::istringstream bad2("sets d=8 n=1\n00\n");
    CHECK_THROWS_AS(read_hamming(bad2), parameter_error);
    std::istringstream bad3("hamming d=8 n=2\nff\n");
    CHECK_THROWS_AS(read_hamming(bad3), parameter_error); // truncated
}

TEST_CASE("set point files round trip") {
    SetDataset ds;
    ds.universe = 40;
    Rng rng(Seed(91));
    for (int i = 0; i < 25; ++i) {
        std::vector<uint32_t> es;
        for (uint32_t e = 0; e < 40; ++e)
            if (rng.below(3) == 0) es.push_back(e);
        if (es.empty()) es.push_back(0);
        ds.points.emplace_back(std::move(es), 40);
    }
    std::stringstream buf;
    write_sets(buf, ds);
    CHECK(peek_format(buf) == "sets");
    auto back = read_sets(buf);
    REQUIRE(back.points.size() == ds.points.size());
    for (size_t i = 0; i < ds.points.size(); ++i)
        REQUIRE(back.points[i].elements() == ds.points[i].elements());

    std::istringstream dup("sets d=8 n=1\n3 3\n");
    CHECK_THROWS_AS(read_sets(dup), parameter_error);
    std::istringstream range("sets d=8 n=1\n9\n");
    CHECK_THROWS_AS(read_sets(range), dimension_error);
}

TEST_CASE("l1 files round trip") {
    L1Dataset ds;
    ds.dim = 3;
    Rng rng(Seed(92));
    for (int i = 0; i < 10; ++i)
        ds.points.push_back({rng.unit() * 100 - 50, rng.unit(), -rng.unit() * 3});
    std::stringstream buf;
    write_l1(buf, ds);
    CHECK(peek_format(buf) == "l1");
    auto back = read_l1(buf);
    REQUIRE(back.points.size() == ds.points.size());
    for (size_t i = 0; i < ds.points.size(); ++i)
        for (size_t j = 0; j < 3; ++j)
            REQUIRE(back.points[i][j] == doctest::Approx(ds.points[i][j]).epsilon(1e-15));

    std::istringstream wrong("l1 d=3 n=1\n1.0 2.0\n");
    CHECK_THROWS_AS(read_l1(wrong), dimension_error);
}

TEST_CASE("truth sidecar round trip") {
    std::vector<TruthEntry> truth = {{0, 17, 4.0}, {1, 99, 0.5}};
    std::stringstream buf;
    write_truth(buf, truth);
    auto back = read_truth(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[0].query == 0);
    CHECK(back[0].planted_id == 17);
    CHECK(back[0].value == 4.0);
    CHECK(back[1].planted_id == 99);

    std::istringstream bad("query,planted\n");
    CHECK_THROWS_AS(read_truth(bad), parameter_error);
}
