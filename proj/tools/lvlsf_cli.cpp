// Batch front end for the Las Vegas similarity-search library: dataset
// generation with planted neighbors, index build/persist, query execution,
// benchmark measurement, and the verification-suite driver.
//
// Exit codes: 0 ok, 2 parameter error, 3 construction failure,
// 4 verification failure (including any recall miss).

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "lvlsf/datagen.hpp"
#include "lvlsf/errors.hpp"
#include "lvlsf/hamming_index.hpp"
#include "lvlsf/l1_embedding.hpp"
#include "lvlsf/oracle.hpp"
#include "lvlsf/similarity_index.hpp"
#include "lvlsf/suites.hpp"

using namespace lvlsf;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParameter = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitVerification = 4;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parameter_error("cannot open input file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parameter_error("cannot open output file: " + path);
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HammingPlanMode parse_mode(const std::string& mode, const std::string& reduction,
                           HammingPlanMode fallback) {
    // --reduction overrides --mode when both are given.
    if (reduction == "xor") return HammingPlanMode::theorem;
    if (reduction == "partition") return HammingPlanMode::corollary;
    if (!reduction.empty()) throw parameter_error("unknown reduction: " + reduction);
    if (mode == "theorem") return HammingPlanMode::theorem;
    if (mode == "corollary") return HammingPlanMode::corollary;
    if (mode.empty()) return fallback;
    throw parameter_error("unknown mode: " + mode);
}

json params_json(const HammingParams& p) {
    json j;
    j["n"] = p.n;
    j["d"] = p.d;
    j["r"] = p.r;
    j["c"] = p.c;
    j["reduction"] = p.reduction == ReductionKind::partition ? "partition" : "xor";
    j["theory"] = {{"epsilon", p.epsilon}, {"B", p.theory_B},     {"b", p.theory_b},
                   {"s", p.theory_s},      {"S", p.theory_S},     {"rho", p.predicted_rho}};
    j["build"] = {{"S", p.S},     {"B", p.block_B}, {"m", p.m},       {"l", p.l},
                  {"b", p.b},     {"r_sub", p.r_sub}, {"r_b", p.r_b}, {"t_b", p.t_b},
                  {"code_mode", int(p.code_mode)},  {"s_build", p.s_build}};
    j["estimates"] = {{"candidates", p.est_candidates},
                      {"decode_ops", p.est_decode_ops},
                      {"entries_per_point", p.est_entries_per_point}};
    j["trace"] = p.trace;
    return j;
}

std::string params_summary(const HammingParams& p) {
    std::ostringstream os;
    os << (p.reduction == ReductionKind::partition ? "partition" : "xor") << " S=" << p.S
       << " B=" << p.block_B << " l=" << p.l << " t=" << p.t_b;
    return os.str();
}

// ---- l1 composite container (kind 2) ---------------------------------------
// The embedding plus one Hamming sub-index per occupied grid cell. Near
// queries always land in their target's cell (grid clearance), so per-cell
// dispatch loses nothing; results are re-checked against the raw l1 metric.

struct L1Index {
    struct Cell {
        std::vector<int64_t> key;
        std::vector<uint32_t> ids; // local sub-index id -> global id
        HammingIndex index;
    };

    double r = 0, c = 0, eps = 0;
    L1Dataset raw;
    L1Embedding embedding;
    std::vector<Cell> cells;

    void save(std::ostream& out) const {
        Writer w{out};
        const char magic[6] = {'L', 'V', 'L', 'S', 'F', '1'};
        w.bytes(magic, 6);
        w.u16(1);
        w.u8(2); // kind: l1 composite
        w.f64(r);
        w.f64(c);
        w.f64(eps);
        w.u32(raw.dim);
        w.u64(raw.points.size());
        for (const auto& p : raw.points)
            for (double v : p) w.f64(v);
        embedding.save(out);
        w.u64(cells.size());
        for (const auto& cell : cells) {
            w.u64(cell.key.size());
            for (int64_t v : cell.key) w.u64(uint64_t(v));
            w.vec_u(cell.ids);
            cell.index.save(out);
        }
    }

    static L1Index load(std::istream& in) {
        Reader rd{in};
        char magic[6];
        rd.bytes(magic, 6);
        if (std::string(magic, 6) != "LVLSF1") throw parameter_error("load: bad magic");
        if (rd.u16() != 1) throw parameter_error("load: unsupported version");
        if (rd.u8() != 2) throw parameter_error("load: not an l1 index");
        L1Index idx;
        idx.r = rd.f64();
        idx.c = rd.f64();
        idx.eps = rd.f64();
        idx.raw.dim = rd.u32();
        idx.raw.points.resize(size_t(rd.u64()), std::vector<double>(idx.raw.dim));
        for (auto& p : idx.raw.points)
            for (auto& v : p) v = rd.f64();
        idx.embedding = L1Embedding::load(in);
        size_t nc = size_t(rd.u64());
        for (size_t i = 0; i < nc; ++i) {
            Cell cell;
            size_t klen = size_t(rd.u64());
            cell.key.resize(klen);
            for (auto& v : cell.key) v = int64_t(rd.u64());
            cell.ids = rd.vec_u<uint32_t>();
            cell.index = HammingIndex::load(in);
            idx.cells.push_back(std::move(cell));
        }
        return idx;
    }

    // Returns (global id, l1 distance) of a reported point, if any.
    std::optional<std::pair<uint32_t, double>> query(const std::vector<double>& q,
                                                     QueryStats& stats) const {
        auto emb = embedding.embed_point(q);
        for (const auto& cell : cells) {
            if (cell.key != emb.cell) continue;
            auto hit = cell.index.query(emb.bits, stats);
            if (!hit) return std::nullopt;
            uint32_t global = cell.ids[*hit];
            double dist = 0;
            for (uint32_t i = 0; i < raw.dim; ++i)
                dist += std::abs(raw.points[global][i] - q[i]);
            return std::make_pair(global, dist);
        }
        return std::nullopt; // unseen cell: no point within r can exist
    }
};

L1Index build_l1_index(L1Dataset ds, double r, double c, double eps, bool mode_is_xor,
                       uint64_t seed_value) {
    L1Index idx;
    idx.r = r;
    idx.c = c;
    idx.eps = eps;
    idx.raw = std::move(ds);
    Seed seed(seed_value);
    idx.embedding = build_l1_embedding(idx.raw.points, idx.raw.dim, r, c, eps, seed);
    // Embedded thresholds: near pairs land within (1+eps)Sr; any embedded
    // distance below (1-eps)cSr certifies a raw distance below cr.
    const double sr = idx.embedding.bits_per_unit() * r;
    uint32_t r_h = uint32_t(std::ceil((1.0 + eps) * sr));
    double far_h = (1.0 - eps) * c * sr - 1.0;
    if (far_h <= r_h)
        throw parameter_error("l1 build: approximation gap closes after embedding; "
                              "increase c or decrease eps");
    double c_h = far_h / r_h;

    std::map<std::vector<int64_t>, std::vector<uint32_t>> members;
    std::vector<BitVector> bits(idx.raw.points.size());
    for (uint32_t i = 0; i < idx.raw.points.size(); ++i) {
        auto e = idx.embedding.embed_point(idx.raw.points[i]);
        members[e.cell].push_back(i);
        bits[i] = std::move(e.bits);
    }
    uint64_t cell_no = 0;
    for (auto& [key, ids] : members) {
        std::vector<BitVector> cell_pts;
        cell_pts.reserve(ids.size());
        for (uint32_t id : ids) cell_pts.push_back(bits[id]);
        auto params = plan_hamming_params(std::max<uint64_t>(idx.raw.points.size(), 2),
                                          idx.embedding.output_bits(), r_h, c_h,
                                          mode_is_xor ? HammingPlanMode::theorem
                                                      : HammingPlanMode::corollary);
        auto sub = build_hamming_index(std::move(cell_pts), params, seed.child(100 + cell_no));
        idx.cells.push_back({key, ids, std::move(sub)});
        ++cell_no;
    }
    return idx;
}

} // namespace

// ---- subcommands ------------------------------------------------------------

namespace {

struct GenArgs {
    std::string kind = "hamming";
    uint32_t n = 1024, d = 256, w = 64, queries = 100;
    uint32_t r = 16;
    double b1 = 0.5;
    uint64_t seed = 1;
    std::string out, queries_out, truth_out;
};

int run_gen(const GenArgs& a) {
    Seed seed(a.seed);
    if (a.kind == "hamming") {
        auto inst = gen_hamming_instance(a.n, a.d, a.r, a.queries, seed);
        auto f = open_out(a.out);
        write_hamming(f, inst.data);
        if (!a.queries_out.empty()) {
            auto q = open_out(a.queries_out);
            write_hamming(q, inst.queries);
        }
        if (!a.truth_out.empty()) {
            auto t = open_out(a.truth_out);
            write_truth(t, inst.truth);
        }
    } else if (a.kind == "sets") {
        auto inst = gen_sets_instance(a.n, a.d, a.w, a.b1, a.queries, seed);
        auto f = open_out(a.out);
        write_sets(f, inst.data);
        if (!a.queries_out.empty()) {
            auto q = open_out(a.queries_out);
            write_sets(q, inst.queries);
        }
        if (!a.truth_out.empty()) {
            auto t = open_out(a.truth_out);
            write_truth(t, inst.truth);
        }
    } else if (a.kind == "l1") {
        auto inst = gen_l1_instance(a.n, a.d, double(a.r), a.queries, seed);
        auto f = open_out(a.out);
        write_l1(f, inst.data);
        if (!a.queries_out.empty()) {
            auto q = open_out(a.queries_out);
            write_l1(q, inst.queries);
        }
        if (!a.truth_out.empty()) {
            auto t = open_out(a.truth_out);
            write_truth(t, inst.truth);
        }
    } else {
        throw parameter_error("gen: unknown kind " + a.kind);
    }
    std::cerr << "gen: wrote " << a.n << " points (" << a.kind << ") to " << a.out << "\n";
    return kExitOk;
}

struct BuildArgs {
    std::string input, out;
    uint64_t seed = 1;
    uint32_t r = 16;
    double c = 2.0;
    double b1 = 0.5, b2 = 0.25;
    double eps = 0.25;
    std::string mode, reduction; // empty: corollary for hamming, theorem for l1
    bool force_pipeline = false;
    bool dump_params = false;
};

int run_build(const BuildArgs& a) {
    auto in = open_in(a.input);
    std::string fmt = peek_format(in);
    if (fmt == "hamming") {
        auto ds = read_hamming(in);
        auto params = plan_hamming_params(std::max<size_t>(ds.points.size(), 2), ds.dim, a.r,
                                          a.c, parse_mode(a.mode, a.reduction, HammingPlanMode::corollary));
        if (a.dump_params) std::cout << params_json(params).dump(2) << "\n";
        auto idx = build_hamming_index(std::move(ds.points), params, Seed(a.seed));
        auto f = open_out(a.out);
        idx.save(f);
        std::cerr << "build: hamming index over " << idx.size() << " points, "
                  << idx.bucket_entries() << " bucket entries -> " << a.out << "\n";
    } else if (fmt == "sets") {
        auto ds = read_sets(in);
        auto idx = build_similarity_index(std::move(ds.points), a.b1, a.b2, Seed(a.seed),
                                          a.force_pipeline);
        if (a.dump_params) {
            json j;
            for (const auto& g : idx.groups())
                j["groups"].push_back({{"weight", g.weight},
                                       {"mode", int(g.params.mode)},
                                       {"a", g.params.part_a},
                                       {"k", g.params.k},
                                       {"r", g.params.r},
                                       {"rho_target", g.params.rho_target},
                                       {"trace", g.params.trace}});
            std::cout << j.dump(2) << "\n";
        }
        auto f = open_out(a.out);
        idx.save(f);
        std::cerr << "build: similarity index over " << idx.size() << " points, "
                  << idx.bucket_entries() << " bucket entries -> " << a.out << "\n";
    } else if (fmt == "l1") {
        auto ds = read_l1(in);
        auto idx = build_l1_index(std::move(ds), double(a.r), a.c, a.eps,
                                  parse_mode(a.mode, a.reduction, HammingPlanMode::theorem) == HammingPlanMode::theorem,
                                  a.seed);
        auto f = open_out(a.out);
        idx.save(f);
        std::cerr << "build: l1 index, " << idx.cells.size() << " cells, embedded dim "
                  << idx.embedding.output_bits() << " -> " << a.out << "\n";
    } else {
        throw parameter_error("build: unrecognized input format " + fmt);
    }
    return kExitOk;
}

uint8_t container_kind(const std::string& path) {
    auto in = open_in(path);
    char magic[6];
    in.read(magic, 6);
    if (!in || std::string(magic, 6) != "LVLSF1")
        throw parameter_error("not an index container: " + path);
    in.ignore(2);
    int kind = in.get();
    if (kind < 0) throw parameter_error("truncated container: " + path);
    return uint8_t(kind);
}

struct QueryArgs {
    std::string index, queries, truth, out;
};

int run_query(const QueryArgs& a) {
    std::ostream* outp = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file = open_out(a.out);
        outp = &file;
    }
    std::vector<TruthEntry> truth;
    if (!a.truth.empty()) {
        auto t = open_in(a.truth);
        truth = read_truth(t);
    }
    uint64_t misses = 0, invalid = 0;
    (*outp) << "query,result,value,candidates,ok\n";
    uint8_t kind = container_kind(a.index);
    auto qin = open_in(a.queries);

    auto emit = [&](uint32_t qi, bool has, uint32_t id, double value, uint64_t cands, bool ok) {
        (*outp) << qi << ",";
        if (has) (*outp) << id;
        else (*outp) << "none";
        (*outp) << "," << value << "," << cands << "," << (ok ? 1 : 0) << "\n";
        if (!ok) ++invalid;
    };

    if (kind == 0) {
        auto in = open_in(a.index);
        auto idx = HammingIndex::load(in);
        auto qs = read_hamming(qin);
        const uint32_t cr = idx.params().cr_threshold();
        for (uint32_t qi = 0; qi < qs.points.size(); ++qi) {
            QueryStats st;
            auto hit = idx.query(qs.points[qi], st);
            bool planted = qi < truth.size();
            if (hit) {
                uint32_t dist = hamming_distance(idx.points()[*hit], qs.points[qi]);
                emit(qi, true, *hit, dist, st.candidates, dist <= cr);
            } else {
                emit(qi, false, 0, -1, st.candidates, true);
                if (planted && truth[qi].value <= idx.params().r) ++misses;
            }
        }
    } else if (kind == 1) {
        auto in = open_in(a.index);
        auto idx = SimilarityIndex::load(in);
        auto qs = read_sets(qin);
        for (uint32_t qi = 0; qi < qs.points.size(); ++qi) {
            QueryStats st;
            auto hit = idx.query(qs.points[qi], st);
            if (hit) {
                const auto& x = idx.points()[*hit];
                double sim = double(intersection_size(x, qs.points[qi])) /
                             std::max(x.weight(), qs.points[qi].weight());
                emit(qi, true, *hit, sim, st.candidates, sim > idx.b2());
            } else {
                emit(qi, false, 0, -1, st.candidates, true);
                if (qi < truth.size() && truth[qi].value >= idx.b1() - 1e-12) ++misses;
            }
        }
    } else if (kind == 2) {
        auto in = open_in(a.index);
        auto idx = L1Index::load(in);
        auto qs = read_l1(qin);
        const double cr = idx.c * idx.r;
        for (uint32_t qi = 0; qi < qs.points.size(); ++qi) {
            QueryStats st;
            auto hit = idx.query(qs.points[qi], st);
            if (hit) {
                // translate local cell id to global id via the stored table
                emit(qi, true, hit->first, hit->second, st.candidates, hit->second <= cr);
            } else {
                emit(qi, false, 0, -1, st.candidates, true);
                if (qi < truth.size() && truth[qi].value <= idx.r) ++misses;
            }
        }
    } else {
        throw parameter_error("query: unknown container kind");
    }

    std::cerr << "query: recall misses=" << misses << " invalid answers=" << invalid << "\n";
    if (misses > 0 || invalid > 0) {
        std::cerr << "query: Las Vegas contract violated\n";
        return kExitVerification;
    }
    return kExitOk;
}

struct BenchArgs {
    std::string kind = "hamming";
    std::vector<uint64_t> ns = {1024, 2048, 4096};
    uint32_t d = 256, r = 16, w = 64, queries = 1000;
    double c = 2.0, b1 = 0.5, b2 = 0.25;
    uint64_t seed = 1;
    std::string mode, reduction;
    std::string csv;
};

int run_bench(const BenchArgs& a) {
    struct Row {
        uint64_t n;
        std::string params;
        double build_s, mean_us, median_us, cands;
        double recall;
    };
    std::vector<Row> rows;
    bool all_recall = true;

    for (uint64_t n : a.ns) {
        Row row;
        row.n = n;
        std::vector<double> lat;
        uint64_t cands_total = 0, found = 0;
        if (a.kind == "hamming") {
            auto inst = gen_hamming_instance(uint32_t(n), a.d, a.r, a.queries, Seed(a.seed));
            auto params = plan_hamming_params(n, a.d, a.r, a.c, parse_mode(a.mode, a.reduction, HammingPlanMode::corollary));
            row.params = params_summary(params);
            auto t0 = std::chrono::steady_clock::now();
            auto idx = build_hamming_index(std::move(inst.data.points), params,
                                           Seed(a.seed).child(n));
            row.build_s = seconds_since(t0);
            for (uint32_t qi = 0; qi < inst.queries.points.size(); ++qi) {
                QueryStats st;
                auto q0 = std::chrono::steady_clock::now();
                auto hit = idx.query(inst.queries.points[qi], st);
                lat.push_back(seconds_since(q0) * 1e6);
                cands_total += st.candidates;
                if (hit) ++found;
            }
        } else if (a.kind == "sets") {
            auto inst = gen_sets_instance(uint32_t(n), a.d, a.w, a.b1, a.queries, Seed(a.seed));
            auto t0 = std::chrono::steady_clock::now();
            auto idx = build_similarity_index(std::move(inst.data.points), a.b1, a.b2,
                                              Seed(a.seed).child(n));
            row.build_s = seconds_since(t0);
            std::ostringstream ps;
            const auto& g = idx.groups()[0];
            ps << "mode=" << int(g.params.mode) << " a=" << g.params.part_a
               << " k=" << g.params.k << " r=" << g.params.r;
            row.params = ps.str();
            for (uint32_t qi = 0; qi < inst.queries.points.size(); ++qi) {
                QueryStats st;
                auto q0 = std::chrono::steady_clock::now();
                auto hit = idx.query(inst.queries.points[qi], st);
                lat.push_back(seconds_since(q0) * 1e6);
                cands_total += st.candidates;
                if (hit) ++found;
            }
        } else {
            throw parameter_error("bench: unknown kind " + a.kind);
        }
        row.recall = a.queries ? double(found) / a.queries : 1.0;
        all_recall = all_recall && row.recall == 1.0;
        row.cands = a.queries ? double(cands_total) / a.queries : 0.0;
        std::sort(lat.begin(), lat.end());
        row.mean_us = std::accumulate(lat.begin(), lat.end(), 0.0) / std::max<size_t>(lat.size(), 1);
        row.median_us = lat.empty() ? 0.0 : lat[lat.size() / 2];
        rows.push_back(row);
    }

    // least-squares exponent of candidates vs n
    double exponent = 0;
    if (rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& r : rows) {
            double x = std::log(double(r.n)), y = std::log(std::max(r.cands, 1e-9));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double m = double(rows.size());
        exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }

    std::ostream* outp = &std::cout;
    std::ofstream file;
    if (!a.csv.empty()) {
        file = open_out(a.csv);
        outp = &file;
    }
    (*outp) << "n,d,params,build_s,mean_query_us,median_query_us,cands_per_query,recall,"
               "collision_exponent\n";
    for (const auto& r : rows)
        (*outp) << r.n << "," << a.d << "," << r.params << "," << r.build_s << "," << r.mean_us
                << "," << r.median_us << "," << r.cands << "," << r.recall << "," << exponent
                << "\n";
    std::cerr << "bench: fitted candidate exponent " << exponent << "\n";
    if (!all_recall) {
        std::cerr << "bench: recall below 1.0, Las Vegas contract violated\n";
        return kExitVerification;
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string suite = "all";
    uint32_t max = 10;
    uint64_t pairs = 100000;
    uint64_t seed = 1;
    uint64_t cost_guard = 1000000;
    std::string csv;
};

int run_verify(const VerifyArgs& a) {
    std::vector<SuiteRow> rows;
    auto want = [&](const char* name) { return a.suite == "all" || a.suite == name; };
    // The enumeration guard caps exhaustive domain sizes at 2^B * B <= guard.
    uint32_t guard_bits = 1;
    while ((uint64_t(1) << (guard_bits + 1)) * (guard_bits + 1) <= a.cost_guard &&
           guard_bits < 20)
        ++guard_bits;
    if (want("splitter")) {
        auto r = suite_splitter(std::min({a.max, 16u, guard_bits}));
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (want("covering")) {
        auto r = suite_covering(std::min({a.max, 12u, guard_bits}), a.seed);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (want("turan")) {
        auto r = suite_turan(a.seed);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (want("bounds")) {
        auto r = suite_bounds(std::min(a.max * 6, 60u), 16);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (want("reductions")) {
        auto r = suite_reductions(a.pairs, a.seed);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (want("unary")) {
        auto r = suite_unary(256, a.seed);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (rows.empty()) throw parameter_error("verify: unknown suite " + a.suite);

    if (!a.csv.empty()) {
        auto f = open_out(a.csv);
        print_rows_csv(f, rows);
    }
    print_rows_csv(std::cout, rows);
    return all_pass(rows) ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Las Vegas locality-sensitive filters: zero-false-negative similarity search"};
    app.require_subcommand(1);

    GenArgs g;
    auto* gen = app.add_subcommand("gen", "generate a planted dataset with a truth sidecar");
    gen->add_option("--kind", g.kind, "hamming|sets|l1");
    gen->add_option("--n", g.n, "number of points")->required();
    gen->add_option("--d", g.d, "dimension / universe size");
    gen->add_option("--w", g.w, "set weight (sets)");
    gen->add_option("--r", g.r, "planted radius (hamming/l1)");
    gen->add_option("--b1", g.b1, "planted similarity (sets)");
    gen->add_option("--queries", g.queries, "number of planted queries");
    gen->add_option("--seed", g.seed, "root seed");
    gen->add_option("--out", g.out, "points file")->required();
    gen->add_option("--queries-out", g.queries_out, "queries file");
    gen->add_option("--truth-out", g.truth_out, "truth sidecar (CSV)");

    BuildArgs b;
    auto* build = app.add_subcommand("build", "build and persist an index");
    build->add_option("--input", b.input, "points file")->required();
    build->add_option("--out", b.out, "index container")->required();
    build->add_option("--seed", b.seed, "root seed");
    build->add_option("--r", b.r, "near radius (hamming/l1)");
    build->add_option("--c", b.c, "approximation factor");
    build->add_option("--b1", b.b1, "near similarity (sets)");
    build->add_option("--b2", b.b2, "far similarity (sets)");
    build->add_option("--eps", b.eps, "embedding distortion (l1)");
    build->add_option("--mode", b.mode, "theorem|corollary");
    build->add_option("--reduction", b.reduction, "xor|partition (overrides --mode)");
    build->add_flag("--force-pipeline", b.force_pipeline, "force the staged Turán pipeline");
    build->add_flag("--dump-params", b.dump_params, "print the parameter plan as JSON");

    QueryArgs q;
    auto* query = app.add_subcommand("query", "run queries against an index");
    query->add_option("--index", q.index)->required();
    query->add_option("--queries", q.queries)->required();
    query->add_option("--truth", q.truth, "truth sidecar for recall checking");
    query->add_option("--out", q.out, "results CSV (default stdout)");

    BenchArgs be;
    auto* bench = app.add_subcommand("bench", "planted-instance benchmark, CSV output");
    bench->add_option("--kind", be.kind, "hamming|sets");
    bench->add_option("--ns", be.ns, "dataset sizes")->delimiter(',');
    bench->add_option("--d", be.d);
    bench->add_option("--r", be.r);
    bench->add_option("--c", be.c);
    bench->add_option("--w", be.w);
    bench->add_option("--b1", be.b1);
    bench->add_option("--b2", be.b2);
    bench->add_option("--queries", be.queries);
    bench->add_option("--seed", be.seed);
    bench->add_option("--mode", be.mode, "theorem|corollary");
    bench->add_option("--reduction", be.reduction, "xor|partition");
    bench->add_option("--csv", be.csv, "output CSV path (default stdout)");

    VerifyArgs v;
    auto* verify = app.add_subcommand("verify", "run the exhaustive verification suites");
    verify->add_option("--suite", v.suite, "splitter|covering|turan|bounds|reductions|unary|all");
    verify->add_option("--max", v.max, "exhaustive size cap (meaning varies by suite)");
    verify->add_option("--pairs", v.pairs, "random pairs for the reduction suite");
    verify->add_option("--seed", v.seed);
    verify->add_option("--cost-guard", v.cost_guard, "enumeration guard");
    verify->add_option("--csv", v.csv, "also write rows to this CSV file");

    try {
        app.parse(argc, argv);
        if (*gen) return run_gen(g);
        if (*build) return run_build(b);
        if (*query) return run_query(q);
        if (*bench) return run_bench(be);
        if (*verify) return run_verify(v);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitParameter;
    } catch (const verification_error& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerification;
    } catch (const construction_error& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameter;
    }
    return kExitOk;
}
