#include "lvlsf/suites.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <sstream>

#include "lvlsf/dimred.hpp"
#include "lvlsf/l1_embedding.hpp"
#include "lvlsf/oracle.hpp"
#include "lvlsf/rng.hpp"
#include "lvlsf/splitter.hpp"
#include "lvlsf/tensored_code.hpp"
#include "lvlsf/turan.hpp"

namespace lvlsf {

namespace {

template <typename... Args>
std::string fmt(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

BitVector random_bits(Rng& rng, uint32_t d) {
    BitVector v(d);
    for (size_t w = 0; w < v.word_count(); ++w) v.data()[w] = rng.next_u64();
    v.mask_tail();
    return v;
}

BitVector flip_exact(const BitVector& x, uint32_t count, Rng& rng) {
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

} // namespace

std::vector<SuiteRow> suite_splitter(uint32_t max_B) {
    std::vector<SuiteRow> rows;
    for (uint32_t l : {2u, 4u}) {
        for (uint32_t B = l; B <= max_B; B += l) {
            auto fam = build_splitter(B, l);
            // part bitmasks for fast counting
            std::vector<uint32_t> part_mask(fam.size() * l, 0);
            for (size_t fn = 0; fn < fam.size(); ++fn)
                for (uint32_t i = 0; i < B; ++i)
                    part_mask[fn * l + fam.labels(fn)[i]] |= 1u << i;
            bool balanced = true;
            for (size_t fn = 0; fn < fam.size() && balanced; ++fn)
                for (uint32_t j = 0; j < l; ++j)
                    balanced = balanced && std::popcount(part_mask[fn * l + j]) == int(B / l);

            uint64_t missed = 0;
            for (uint32_t mask = 0; mask < (1u << B); ++mask) {
                uint32_t sz = uint32_t(std::popcount(mask));
                uint32_t lo = sz / l, hi = lo + (sz % l != 0);
                bool split = false;
                for (size_t fn = 0; fn < fam.size() && !split; ++fn) {
                    bool ok = true;
                    for (uint32_t j = 0; j < l && ok; ++j) {
                        uint32_t c = uint32_t(std::popcount(mask & part_mask[fn * l + j]));
                        ok = c >= lo && c <= hi;
                    }
                    split = ok;
                }
                if (!split) ++missed;
            }
            bool size_ok = std::log(double(fam.size())) <= l * std::log(double(B)) + 1e-9;
            rows.push_back({"splitter", fmt("B=", B, " l=", l),
                            missed == 0 && balanced && size_ok,
                            fmt("family=", fam.size(), " missed=", missed)});
        }
    }
    return rows;
}

std::vector<SuiteRow> suite_covering(uint32_t max_B, uint64_t seed) {
    std::vector<SuiteRow> rows;
    for (uint32_t b : {2u, 5u}) {
        for (uint32_t B = b; B <= max_B; B += b) {
            uint32_t l = B / b;
            // minimal radii plus one widened-radius case (a genuinely
            // sampled word list rather than the full-cube fallback)
            for (auto [r, extra_t] : {std::pair<uint32_t, uint32_t>{l, 0},
                                      {2 * l, 0},
                                      {2 * l, 1}}) {
                if (r > B) continue;
                uint32_t r_b = (r + l - 1) / l;
                uint32_t t_b = (r_b + 1) / 2 + extra_t;
                if (t_b > b / 2 && t_b > r_b) continue;
                TensoredCode code;
                try {
                    code = build_tensored_code(
                        build_inner_code_radius(b, r_b, t_b, Seed(seed).child(B).child(r),
                                                InnerCodeMode::sampled),
                        B);
                } catch (const parameter_error&) {
                    continue; // infeasible (e.g. t beyond b/2)
                }
                uint64_t pairs = 0, missed = 0;
                std::vector<uint32_t> ball;
                for (uint32_t x = 0; x < (1u << B); ++x) {
                    auto vx = BitVector::from_bits(x, B);
                    for (uint32_t y = x; y < (1u << B); ++y) {
                        if (uint32_t(std::popcount(x ^ y)) > r) continue;
                        ++pairs;
                        if (!code.shares_filter(vx, BitVector::from_bits(y, B))) ++missed;
                    }
                }
                rows.push_back({"covering", fmt("B=", B, " b=", b, " r=", r, " t=", t_b),
                                missed == 0,
                                fmt("pairs=", pairs, " missed=", missed,
                                    " words=", code.inner().words.size())});
            }
        }
    }
    return rows;
}

namespace {

std::vector<uint32_t> whole_universe(const TuranSystem& sys) {
    std::vector<uint32_t> u(sys.universe());
    for (uint32_t i = 0; i < u.size(); ++i) u[i] = i;
    return u;
}

// decode(S) must equal the materialized system filtered to S.
bool decode_complete(const TuranSystem& sys, Rng& rng, uint32_t trials, uint32_t set_size) {
    auto all = sys.decode(whole_universe(sys));
    for (uint32_t t = 0; t < trials; ++t) {
        std::vector<uint32_t> S(sys.universe());
        for (uint32_t i = 0; i < S.size(); ++i) S[i] = i;
        rng.shuffle(S);
        S.resize(std::min<size_t>(set_size, S.size()));
        std::sort(S.begin(), S.end());
        std::vector<Block> expect;
        for (const auto& blk : all)
            if (std::includes(S.begin(), S.end(), blk.begin(), blk.end())) expect.push_back(blk);
        if (sys.decode(S) != expect) return false;
    }
    return true;
}

} // namespace

std::vector<SuiteRow> suite_turan(uint64_t seed) {
    std::vector<SuiteRow> rows;
    Rng rng(Seed(seed).child(1));

    auto full = build_turan(12, 6, 3, Seed(seed));
    bool ok = verify_system(full, 12, 6) && decode_complete(full, rng, 100, 8);
    rows.push_back({"turan", "(12,6,3) staged build", ok,
                    fmt("|T|=", full.decode(whole_universe(full)).size())});

    auto base = build_base_system(4, 3, 2, Seed(seed).child(2));
    rows.push_back({"turan", "base (4,3,2)",
                    verify_system(base, 4, 3) && decode_complete(base, rng, 50, 3),
                    fmt("blocks=", base.base_blocks().size())});

    auto scaled = splitter_scale(build_base_system(4, 3, 2, Seed(seed).child(3)), 2);
    rows.push_back({"turan", "splitter-scaled (8,6,4)",
                    verify_system(scaled, 8, 6) && decode_complete(scaled, rng, 50, 6),
                    fmt("pi=", scaled.scale_splitter().size())});

    auto phf = build_perfect_hash_family(6, 4, 2, Seed(seed).child(4));
    auto hashed = hash_extend(build_base_system(4, 2, 2, Seed(seed).child(5)), 6, phf,
                              Seed(seed).child(6));
    rows.push_back({"turan", "hash-extended (6,2,2)",
                    verify_system(hashed, 6, 2) && decode_complete(hashed, rng, 50, 4),
                    fmt("H=", phf.size())});

    auto parted = partition_extend(build_base_system(4, 2, 2, Seed(seed).child(7)), 2,
                                   Seed(seed).child(8));
    rows.push_back({"turan", "partition-extended (8,4,2)",
                    verify_system(parted, 8, 4) && decode_complete(parted, rng, 50, 5),
                    "a=2"});
    return rows;
}

std::vector<SuiteRow> suite_bounds(uint32_t max_n, uint32_t max_d) {
    std::vector<SuiteRow> rows;
    uint64_t cases = 0, violations = 0;
    for (uint32_t n = 1; n <= max_n; ++n)
        for (uint32_t m = 1; m <= n; ++m)
            for (uint32_t k = 0; k <= m; ++k) {
                ++cases;
                if (!oracle::binom_ratio_chain(n, m, k).holds()) ++violations;
            }
    rows.push_back({"bounds", fmt("binomial ratio chain n<=", max_n), violations == 0,
                    fmt("cases=", cases, " violations=", violations)});

    // Exact summation equals 2^d enumeration.
    uint64_t count_checks = 0, count_bad = 0;
    for (uint32_t d = 1; d <= std::min(max_d, 16u); ++d)
        for (uint32_t r = 0; r <= d; ++r)
            for (uint32_t t = 0; t <= d; ++t) {
                uint64_t x = 0, y = (r >= 64 ? ~0ULL : (1ULL << r) - 1);
                uint64_t brute = 0;
                for (uint64_t z = 0; z < (1ULL << d); ++z)
                    if (uint32_t(std::popcount(z ^ x)) <= t &&
                        uint32_t(std::popcount(z ^ y)) <= t)
                        ++brute;
                ++count_checks;
                if (oracle::ball_intersection_count(d, r, t) != brute) ++count_bad;
            }
    rows.push_back({"bounds", fmt("intersection summation vs 2^d enumeration d<=", std::min(max_d, 16u)),
                    count_bad == 0, fmt("cases=", count_checks, " violations=", count_bad)});

    uint64_t grid = 0, bad = 0;
    for (uint32_t d = 16; d <= std::max(max_d, 16u); ++d) {
        double s_max = std::pow(double(d), 0.25) / 2.0;
        for (double s = 1.0; s <= s_max + 1e-12; s += std::max((s_max - 1.0) / 4.0, 0.25)) {
            for (uint32_t r = 0; 2 * r < d; ++r) {
                auto rep = oracle::ball_intersection_bounds(d, r, std::min(s, s_max));
                ++grid;
                if (rep.has_exact && !(rep.lower <= rep.exact + 1e-12 &&
                                       rep.exact <= rep.upper + 1e-12))
                    ++bad;
            }
        }
    }
    rows.push_back({"bounds", fmt("ball intersection brackets d<=", std::max(max_d, 16u)),
                    bad == 0, fmt("cases=", grid, " violations=", bad)});
    return rows;
}

std::vector<SuiteRow> suite_reductions(uint64_t pairs, uint64_t seed) {
    std::vector<SuiteRow> rows;
    Rng rng(Seed(seed).child(3));

    {
        auto red = build_xor_reduction_explicit(256, 96, 32, Seed(seed).child(4));
        uint64_t contraction_bad = 0, prop1_bad = 0;
        for (uint64_t t = 0; t < pairs; ++t) {
            auto x = random_bits(rng, 256);
            auto y = t % 2 ? flip_exact(x, 1 + uint32_t(rng.below(200)), rng)
                           : random_bits(rng, 256);
            uint32_t dist = hamming_distance(x, y);
            if (hamming_distance(red.apply_g(x), red.apply_g(y)) > dist) ++contraction_bad;
            auto fx = red.apply(x), fy = red.apply(y);
            uint32_t best = UINT32_MAX;
            for (uint32_t i = 0; i < red.S; ++i)
                best = std::min(best, hamming_distance(fx[i], fy[i]));
            if (best > dist / red.S) ++prop1_bad;
        }
        rows.push_back({"reductions", "xor contraction + property 1",
                        contraction_bad == 0 && prop1_bad == 0,
                        fmt("pairs=", pairs, " violations=", contraction_bad + prop1_bad)});
    }
    {
        const uint32_t d = 512, r = 128;
        const double c = 2.0, eps = 0.9, delta = 1e-3;
        auto red = build_xor_reduction(d, r, c, eps, delta, Seed(seed).child(5));
        uint64_t fails = 0, blocks = 0;
        const double threshold = (1.0 - eps) * (c * r) / red.S;
        const uint64_t trials = std::max<uint64_t>(pairs / 5, 1000);
        for (uint64_t t = 0; t < trials; ++t) {
            auto x = random_bits(rng, d);
            auto y = flip_exact(x, uint32_t(c * r), rng);
            auto fx = red.apply(x), fy = red.apply(y);
            for (uint32_t i = 0; i < red.S; ++i, ++blocks)
                if (hamming_distance(fx[i], fy[i]) < threshold) ++fails;
        }
        double phat = double(fails) / double(blocks);
        double bound = delta + 2.576 * std::sqrt(delta * (1 - delta) / double(blocks));
        rows.push_back({"reductions", "xor property 2 (<= delta at 99% CI)", phat <= bound,
                        fmt("phat=", phat, " delta=", delta)});
    }
    {
        auto red = build_partition_reduction_explicit(256, 32, Seed(seed).child(6));
        uint64_t sum_bad = 0, prop1_bad = 0;
        for (uint64_t t = 0; t < pairs; ++t) {
            auto x = random_bits(rng, 256);
            auto y = t % 2 ? flip_exact(x, uint32_t(rng.below(256)), rng) : random_bits(rng, 256);
            auto fx = red.apply(x), fy = red.apply(y);
            uint32_t total = 0, best = UINT32_MAX;
            for (uint32_t i = 0; i < red.S; ++i) {
                uint32_t bd = hamming_distance(fx[i], fy[i]);
                total += bd;
                best = std::min(best, bd);
            }
            uint32_t dist = hamming_distance(x, y);
            if (total != dist) ++sum_bad;
            if (uint64_t(best) * red.d_pad > uint64_t(dist) * red.B) ++prop1_bad;
        }
        rows.push_back({"reductions", "partition sum identity + property 1",
                        sum_bad == 0 && prop1_bad == 0,
                        fmt("pairs=", pairs, " violations=", sum_bad + prop1_bad)});
    }
    {
        const uint32_t d = 256, r = 32, n = 1024;
        const double c = 2.0, eps = 0.5;
        auto red = build_partition_reduction(d, r, c, eps, n, Seed(seed).child(7));
        uint64_t fails = 0, blocks = 0;
        const double threshold = (1.0 - eps) * (c * r) * red.B / red.d_pad;
        const uint64_t trials = std::max<uint64_t>(pairs / 5, 1000);
        for (uint64_t t = 0; t < trials; ++t) {
            auto x = random_bits(rng, d);
            auto y = flip_exact(x, uint32_t(c * r), rng);
            auto fx = red.apply(x), fy = red.apply(y);
            for (uint32_t i = 0; i < red.S; ++i, ++blocks)
                if (hamming_distance(fx[i], fy[i]) < threshold) ++fails;
        }
        double delta = 1.0 / n;
        double phat = double(fails) / double(blocks);
        double bound = delta + 2.576 * std::sqrt(delta * (1 - delta) / double(blocks));
        rows.push_back({"reductions", "partition property 2 (<= 1/n at 99% CI)", phat <= bound,
                        fmt("phat=", phat, " delta=", delta)});
    }
    return rows;
}

std::vector<SuiteRow> suite_unary(uint32_t max_M, uint64_t seed) {
    std::vector<SuiteRow> rows;
    {
        uint64_t bad = 0, cases = 0;
        for (uint64_t R : {1ULL, 2ULL, 8ULL, 16ULL, 64ULL}) {
            for (uint64_t c1 = 0; c1 <= max_M; ++c1)
                for (uint64_t c2 = c1; c2 <= max_M; ++c2) {
                    auto h1 = L1Embedding::staircase(c1, R);
                    auto h2 = L1Embedding::staircase(c2, R);
                    uint64_t dist = 0;
                    for (size_t i = 0; i < h1.size(); ++i) dist += h1[i] != h2[i];
                    ++cases;
                    if (dist != std::min(c2 - c1, R)) ++bad;
                }
        }
        rows.push_back({"unary", fmt("staircase identity M<=", max_M), bad == 0,
                        fmt("cases=", cases, " violations=", bad)});
    }
    {
        Rng rng(Seed(seed).child(8));
        const uint32_t d = 4;
        const double r = 1.0, c = 2.0, eps = 0.5;
        std::vector<std::vector<double>> pts(60, std::vector<double>(d));
        for (auto& p : pts)
            for (auto& v : p) v = (rng.unit() - 0.5) * 8.0;
        auto emb = build_l1_embedding(pts, d, r, c, eps, Seed(seed).child(9));
        const double sr = emb.bits_per_unit() * r;
        uint64_t near_bad = 0, far_bad = 0;
        const int trials = 1000;
        for (int t = 0; t < trials; ++t) {
            const auto& p = pts[rng.below(pts.size())];
            double near_dist = r * (0.05 + 0.95 * rng.unit());
            double far_dist = c * r * (1.0 + rng.unit());
            std::vector<double> wgt(d);
            double total = 0;
            for (auto& v : wgt) total += (v = rng.unit() + 1e-9);
            std::vector<double> qn = p, qf = p;
            for (uint32_t i = 0; i < d; ++i) {
                double sign = rng.coin() ? 1.0 : -1.0;
                qn[i] += sign * near_dist * wgt[i] / total;
                qf[i] += sign * far_dist * wgt[i] / total;
            }
            auto ep = emb.embed_point(p);
            auto en = emb.embed_point(qn);
            auto ef = emb.embed_point(qf);
            if (en.cell != ep.cell ||
                double(hamming_distance(ep.bits, en.bits)) > (1.0 + eps) * sr)
                ++near_bad;
            if (ef.cell == ep.cell &&
                double(hamming_distance(ep.bits, ef.bits)) < (1.0 - eps) * c * sr)
                ++far_bad;
        }
        rows.push_back({"unary", "embedding distortion bands (1000 pairs)",
                        near_bad == 0 && far_bad == 0,
                        fmt("near_violations=", near_bad, " far_violations=", far_bad)});
    }
    return rows;
}

void print_rows_csv(std::ostream& out, const std::vector<SuiteRow>& rows) {
    out << "suite,case,pass,value\n";
    for (const auto& r : rows)
        out << r.suite << "," << r.name << "," << (r.pass ? "1" : "0") << "," << r.value << "\n";
}

bool all_pass(const std::vector<SuiteRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

} // namespace lvlsf
