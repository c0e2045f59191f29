#include "lvlsf/hamming_index.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lvlsf/errors.hpp"
#include "lvlsf/oracle.hpp"

namespace lvlsf {

namespace {

constexpr double kCandidateCost = 48; // word-op equivalent of one candidate scan
constexpr double kEntryCost = 2;
constexpr double kEntriesPerPointGuard = 8192;
constexpr double kDecodeOpsGuard = 2e6;
constexpr double kSampledWordsGuard = 3e5;
constexpr double kStructuredBallGuard = 2048;
constexpr double kCorollaryRatio = 1.0 / 16.0; // Omega constant for r/d >= (ln n)^{-1/6}
constexpr double kFeasibilityKappa = 8.0;      // s^2 <= kappa * B / sqrt(b)

double log_binom(double n, double k) {
    if (k < 0 || k > n) return -1e300;
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

struct BuildConfig {
    ReductionKind red;
    uint32_t m = 0, B = 0, S = 0, l = 0, b = 0;
    uint32_t r_sub = 0, r_b = 0, t_b = 0;
    InnerCodeMode mode = InnerCodeMode::full_cube;
    double words = 0, scan = 0, eaj = 0;
    double decode_ops = 0, entries = 0, est_cand = 0, score = 0;
};

// Probability that a random inner word captures both endpoints of a pair at
// part-distance e, turned into a collision probability for the word list.
double part_collision(const BuildConfig& cfg, uint32_t e) {
    if (e > cfg.b) e = cfg.b;
    switch (cfg.mode) {
        case InnerCodeMode::full_cube:
            return e <= 2 * cfg.t_b ? 1.0 : 0.0;
        case InnerCodeMode::parity:
            if (e > 2 * cfg.t_b) return 0.0;
            return (e == 2 * cfg.t_b && e > 0) ? 0.5 : 1.0;
        default: {
            uint64_t isect = oracle::ball_intersection_count(cfg.b, e, cfg.t_b);
            double p = double(isect) * std::ldexp(1.0, -int(cfg.b));
            return 1.0 - std::pow(1.0 - p, cfg.words);
        }
    }
}

double block_collision(const BuildConfig& cfg, uint32_t e, double pi_size) {
    if (cfg.l == 1) return part_collision(cfg, e);
    BuildConfig part = cfg;
    double q = part_collision(part, (e + 1) / 2) * part_collision(part, e / 2);
    return std::min(1.0, pi_size * q);
}

double splitter_size_estimate(uint32_t B, uint32_t l) {
    if (l == 1) return 1;
    if (l == 2) return B / 2.0 + 1;
    return std::pow(double(B), double(l)); // generic bound; grid stays at l <= 2
}

// Distribution of the far-pair block distance: hypergeometric for the
// partition reduction, binomial after parity folding for xor. The far model
// is a random pair at distance d/2 (the bulk of random data), stated in the
// trace.
std::vector<double> block_dist_pmf(const BuildConfig& cfg, uint32_t d, uint32_t d_pad) {
    std::vector<double> pmf(cfg.B + 1, 0.0);
    double far = d / 2.0;
    if (cfg.red == ReductionKind::partition) {
        for (uint32_t e = 0; e <= std::min(cfg.B, uint32_t(far)); ++e) {
            double lp = log_binom(far, e) + log_binom(double(d_pad) - far, double(cfg.B) - e) -
                        log_binom(double(d_pad), double(cfg.B));
            pmf[e] = std::exp(lp);
        }
    } else {
        double qbit = 0.5 * (1.0 - std::pow(1.0 - 2.0 / double(cfg.m), far));
        for (uint32_t e = 0; e <= cfg.B; ++e) {
            double lp = log_binom(double(cfg.B), e) + e * std::log(qbit) +
                        (double(cfg.B) - e) * std::log(1.0 - qbit);
            pmf[e] = std::exp(lp);
        }
    }
    return pmf;
}

bool score_config(BuildConfig& cfg, uint64_t n, uint32_t d, uint32_t d_pad) {
    double two_b = std::ldexp(1.0, int(cfg.b));
    double vol = ball_volume(cfg.b, cfg.t_b);
    switch (cfg.mode) {
        case InnerCodeMode::full_cube:
            cfg.words = two_b;
            cfg.scan = vol;
            cfg.eaj = vol;
            if (vol > kStructuredBallGuard) return false;
            break;
        case InnerCodeMode::parity:
            cfg.words = two_b / 2;
            cfg.scan = cfg.b + 1;
            cfg.eaj = (1.0 + cfg.b) / 2.0;
            if (cfg.r_b > 1 || cfg.t_b != 1 || cfg.b < 2) return false;
            break;
        default: {
            if (cfg.b > 16) return false;
            double sp = (double(cfg.b) - 2.0 * cfg.t_b) / std::sqrt(double(cfg.b));
            double p = oracle::ball_intersection_lower(cfg.b, cfg.r_b, std::max(sp, 0.0));
            p = std::clamp(p, 1e-12, 1.0);
            cfg.words = std::min(two_b, std::ceil(double(cfg.b) * std::log(2.0) / p));
            if (cfg.words > kSampledWordsGuard) return false;
            cfg.scan = cfg.words;
            cfg.eaj = cfg.words * vol / two_b;
            break;
        }
    }
    if (cfg.t_b < (cfg.r_b + 1) / 2) return false;
    uint32_t index_bits = cfg.mode == InnerCodeMode::sampled
                              ? uint32_t(std::ceil(std::log2(std::max(cfg.words, 2.0))))
                              : cfg.b;
    if (uint64_t(index_bits) * cfg.l > 64) return false;

    double pi_size = splitter_size_estimate(cfg.B, cfg.l);
    cfg.entries = cfg.S * pi_size * std::pow(cfg.eaj, double(cfg.l));
    cfg.decode_ops = cfg.S * pi_size * (cfg.l * cfg.scan) + cfg.entries;
    if (cfg.entries > kEntriesPerPointGuard || cfg.decode_ops > kDecodeOpsGuard) return false;

    auto pmf = block_dist_pmf(cfg, d, d_pad);
    double qbar = 0;
    for (uint32_t e = 0; e <= cfg.B; ++e)
        if (pmf[e] > 0) qbar += pmf[e] * block_collision(cfg, e, pi_size);
    double unionp = 1.0 - std::pow(1.0 - std::min(qbar, 1.0), double(cfg.S));
    cfg.est_cand = double(n) * unionp + 1.0;
    cfg.score = cfg.decode_ops + cfg.est_cand * kCandidateCost + cfg.entries * kEntryCost;
    return true;
}

} // namespace

HammingParams plan_hamming_params(uint64_t n, uint32_t d, uint32_t r, double c,
                                  HammingPlanMode mode) {
    if (r == 0 || c <= 1.0)
        throw parameter_error("plan: requires r > 0 and c > 1");
    if (c * r > d / 2.0)
        throw parameter_error("plan: requires cr <= d/2");
    if (n < 2)
        throw parameter_error("plan: requires n >= 2");

    HammingParams p;
    p.n = n;
    p.d = d;
    p.r = r;
    p.c = c;
    p.reduction = mode == HammingPlanMode::theorem ? ReductionKind::xor_buckets
                                                   : ReductionKind::partition;
    const double ln_n = std::log(double(n));
    std::ostringstream tr;

    if (mode == HammingPlanMode::theorem) {
        p.epsilon = std::pow(ln_n, -0.25);
        p.theory_B = 27.0 * std::pow(p.epsilon, -3.0) * ln_n; // delta = 1/n
        p.theory_b = ln_n / std::log(4.0);
        double m_f = 3.0 * c * r / p.epsilon;
        p.theory_S = std::max(m_f / p.theory_B, 1.0);
        double r_f = double(r) / p.theory_S;
        double ratio = c * r_f / p.theory_B;
        p.theory_s = std::sqrt(2.0 * ((1.0 - ratio) / ratio) * ln_n);
        p.predicted_rho = 1.0 / c;
        tr << "theorem display: eps=" << p.epsilon << " B=" << p.theory_B
           << " b=" << p.theory_b << " s=" << p.theory_s << " S=" << p.theory_S
           << " rho=1/c=" << p.predicted_rho;
    } else {
        p.epsilon = std::pow(ln_n, -1.0 / 3.0);
        double threshold = std::pow(ln_n, -1.0 / 6.0) * kCorollaryRatio;
        if (double(r) / d < threshold)
            throw parameter_error("plan: corollary mode requires r/d >= (ln n)^{-1/6}/16");
        p.theory_B = 2.0 * std::pow(p.epsilon, -2.0) * (double(d) / (c * r)) * ln_n;
        p.theory_b = ln_n / std::log(4.0);
        double ratio = c * r / double(d);
        p.theory_s = std::sqrt(2.0 * ((1.0 - ratio) / ratio) * ln_n);
        p.theory_S = double(d) / p.theory_B;
        p.predicted_rho = (1.0 - c * r / d) / (c * (1.0 - double(r) / d));
        tr << "corollary display: eps=" << p.epsilon << " B=" << p.theory_B
           << " b=" << p.theory_b << " s=" << p.theory_s
           << " rho=(1-cr/d)/(c(1-r/d))=" << p.predicted_rho;
    }
    p.trace.push_back(tr.str());
    double feas = p.theory_s * p.theory_s / (p.theory_B / std::sqrt(p.theory_b));
    if (feas > kFeasibilityKappa)
        throw parameter_error("plan: s^2 = O(B/sqrt(b)) feasibility violated (ratio " +
                              std::to_string(feas) + ")");
    p.trace.push_back("feasibility s^2 / (B/sqrt(b)) = " + std::to_string(feas));

    // Guarded grid search for the build configuration.
    std::vector<BuildConfig> grid;
    auto add_geometry = [&](uint32_t m, uint32_t B, uint32_t S, uint32_t r_sub) {
        for (uint32_t l : {1u, 2u}) {
            if (B % l != 0) continue;
            uint32_t b = B / l;
            if (b < 1 || b > 63) continue;
            uint32_t r_b = (r_sub + l - 1) / l;
            uint32_t t_min = (r_b + 1) / 2;
            BuildConfig base;
            base.red = p.reduction;
            base.m = m;
            base.B = B;
            base.S = S;
            base.l = l;
            base.b = b;
            base.r_sub = r_sub;
            base.r_b = r_b;
            {
                BuildConfig cfg = base;
                cfg.mode = InnerCodeMode::full_cube;
                cfg.t_b = t_min;
                grid.push_back(cfg);
            }
            if (r_b <= 1 && b >= 2) {
                BuildConfig cfg = base;
                cfg.mode = InnerCodeMode::parity;
                cfg.t_b = 1;
                grid.push_back(cfg);
            }
            if (b <= 16) {
                for (uint32_t t = std::max(t_min, 1u); t <= std::min(b / 2, t_min + 3); ++t) {
                    BuildConfig cfg = base;
                    cfg.mode = InnerCodeMode::sampled;
                    cfg.t_b = t;
                    grid.push_back(cfg);
                }
            }
        }
    };

    uint32_t d_pad_any = d;
    if (p.reduction == ReductionKind::partition) {
        for (uint32_t B : {8u, 16u, 32u, 64u, 128u}) {
            if (B > d) continue;
            uint32_t d_pad = (d + B - 1) / B * B;
            uint32_t S = d_pad / B;
            uint32_t r_sub = uint32_t(uint64_t(r) * B / d_pad);
            add_geometry(0, B, S, r_sub);
        }
    } else {
        for (double eps_b : {3.0, 2.0, 1.5, 1.0, 0.75, 0.5, 0.25, 0.125}) {
            uint32_t m0 = uint32_t(std::ceil(3.0 * c * r / eps_b));
            for (uint32_t B : {8u, 16u, 32u, 64u}) {
                uint32_t m = (std::max(m0, B) + B - 1) / B * B;
                uint32_t S = m / B;
                add_geometry(m, B, S, r / S);
            }
        }
        // Geometries pinned to small per-substructure budgets (r' in
        // {0,1,3}), needed when r is large in absolute terms.
        for (uint32_t target : {r + 1, r / 2 + 1, r / 4 + 1}) {
            for (uint32_t B : {8u, 16u, 32u}) {
                uint32_t S = std::max(target, 1u);
                add_geometry(S * B, B, S, r / S);
            }
        }
    }

    const BuildConfig* best = nullptr;
    for (auto& cfg : grid) {
        uint32_t d_pad = p.reduction == ReductionKind::partition
                             ? (d + cfg.B - 1) / cfg.B * cfg.B
                             : d;
        if (!score_config(cfg, n, d, d_pad)) continue;
        if (!best || cfg.score < best->score) best = &cfg;
    }
    (void)d_pad_any;
    if (!best)
        throw parameter_error("plan: no feasible build configuration within cost guards");

    p.S = best->S;
    p.block_B = best->B;
    p.m = best->m;
    p.l = best->l;
    p.b = best->b;
    p.r_sub = best->r_sub;
    p.r_b = best->r_b;
    p.t_b = best->t_b;
    p.code_mode = best->mode;
    p.s_build = (double(best->B) - 2.0 * best->t_b * best->l) / std::sqrt(double(best->B));
    p.est_candidates = best->est_cand;
    p.est_decode_ops = best->decode_ops;
    p.est_entries_per_point = best->entries;

    std::ostringstream bt;
    const char* mode_name = best->mode == InnerCodeMode::full_cube ? "full_cube"
                            : best->mode == InnerCodeMode::parity  ? "parity"
                            : best->mode == InnerCodeMode::greedy  ? "greedy"
                                                                   : "sampled";
    bt << "build: " << (p.reduction == ReductionKind::partition ? "partition" : "xor")
       << " S=" << p.S << " B=" << p.block_B;
    if (p.m) bt << " m=" << p.m;
    bt << " l=" << p.l << " b=" << p.b << " r'=" << p.r_sub << " r_b=" << p.r_b
       << " t_b=" << p.t_b << " code=" << mode_name
       << " est_cand=" << p.est_candidates << " est_decode=" << p.est_decode_ops
       << " est_entries=" << p.est_entries_per_point
       << " (far model: random pair at d/2)";
    p.trace.push_back(bt.str());
    return p;
}

// ---- index ------------------------------------------------------------------

std::vector<BitVector> HammingIndex::reduce(const BitVector& x) const {
    return params_.reduction == ReductionKind::partition ? part_red_.apply(x)
                                                         : xor_red_.apply(x);
}

HammingIndex build_hamming_index(std::vector<BitVector> points, const HammingParams& params,
                                 const Seed& seed) {
    HammingIndex idx;
    idx.params_ = params;
    idx.seed_value_ = seed.value;
    for (const auto& pt : points)
        if (pt.dim() != params.d)
            throw dimension_error("build: point dimension mismatch");

    if (params.reduction == ReductionKind::partition)
        idx.part_red_ = build_partition_reduction_explicit(params.d, params.block_B,
                                                           seed.child(seed_path::kReduction));
    else
        idx.xor_red_ = build_xor_reduction_explicit(params.d, params.m, params.block_B,
                                                    seed.child(seed_path::kReduction));

    InnerCode inner = build_inner_code_radius(params.b, params.r_b, params.t_b,
                                              seed.child(seed_path::kInnerCode),
                                              params.code_mode);
    idx.code_ = build_tensored_code(std::move(inner), params.block_B);
    idx.points_ = std::move(points);
    idx.buckets_.resize(params.S);

    // Decode in parallel chunks, then insert serially in id order so the
    // index contents are independent of the thread count.
    const uint32_t n = uint32_t(idx.points_.size());
    constexpr uint32_t kChunk = 1024;
    std::vector<std::vector<std::vector<FilterKey>>> chunk_keys(kChunk);
    for (uint32_t base = 0; base < n; base += kChunk) {
        const uint32_t count = std::min(kChunk, n - base);
        for (uint32_t i = 0; i < count; ++i) {
            chunk_keys[i].assign(params.S, {});
        }
#pragma omp parallel for schedule(dynamic, 8)
        for (int64_t i = 0; i < int64_t(count); ++i) {
            auto blocks = idx.reduce(idx.points_[base + uint32_t(i)]);
            for (uint32_t s = 0; s < params.S; ++s)
                idx.code_.decode(blocks[s], chunk_keys[size_t(i)][s]);
        }
        for (uint32_t i = 0; i < count; ++i)
            for (uint32_t s = 0; s < params.S; ++s)
                for (const FilterKey& key : chunk_keys[i][s]) {
                    auto& bucket = idx.buckets_[s][key];
                    if (bucket.empty() || bucket.back() != base + i)
                        bucket.push_back(base + i);
                }
    }
    return idx;
}

std::optional<uint32_t> HammingIndex::query(const BitVector& q) const {
    QueryStats stats;
    return query(q, stats);
}

std::optional<uint32_t> HammingIndex::query(const BitVector& q, QueryStats& stats) const {
    if (q.dim() != params_.d)
        throw dimension_error("query: dimension mismatch");
    const uint32_t cr = params_.cr_threshold();
    std::vector<uint8_t> visited(points_.size(), 0);
    std::vector<FilterKey> keys;
    auto blocks = reduce(q);
    for (uint32_t s = 0; s < params_.S; ++s) {
        keys.clear();
        code_.decode(blocks[s], keys);
        stats.filters_decoded += keys.size();
        for (const FilterKey& key : keys) {
            auto it = buckets_[s].find(key);
            if (it == buckets_[s].end()) continue;
            ++stats.buckets_hit;
            for (uint32_t id : it->second) {
                if (visited[id]) continue;
                visited[id] = 1;
                ++stats.candidates;
                if (hamming_distance(points_[id], q) <= cr) return id;
            }
        }
    }
    return std::nullopt;
}

uint64_t HammingIndex::bucket_entries() const {
    uint64_t total = 0;
    for (const auto& b : buckets_)
        for (const auto& kv : b) total += kv.second.size();
    return total;
}

// ---- persistence ------------------------------------------------------------

namespace {
constexpr char kMagic[6] = {'L', 'V', 'L', 'S', 'F', '1'};
constexpr uint16_t kVersion = 1;

void write_params(Writer& w, const HammingParams& p) {
    w.u64(p.n);
    w.u32(p.d);
    w.u32(p.r);
    w.f64(p.c);
    w.u8(uint8_t(p.reduction));
    w.f64(p.epsilon);
    w.f64(p.theory_B);
    w.f64(p.theory_b);
    w.f64(p.theory_s);
    w.f64(p.theory_S);
    w.f64(p.predicted_rho);
    w.u32(p.S);
    w.u32(p.block_B);
    w.u32(p.m);
    w.u32(p.l);
    w.u32(p.b);
    w.u32(p.r_sub);
    w.u32(p.r_b);
    w.u32(p.t_b);
    w.u8(uint8_t(p.code_mode));
    w.f64(p.s_build);
    w.f64(p.est_candidates);
    w.f64(p.est_decode_ops);
    w.f64(p.est_entries_per_point);
    w.u64(p.trace.size());
    for (const auto& t : p.trace) w.str(t);
}

HammingParams read_params(Reader& rd) {
    HammingParams p;
    p.n = rd.u64();
    p.d = rd.u32();
    p.r = rd.u32();
    p.c = rd.f64();
    p.reduction = ReductionKind(rd.u8());
    p.epsilon = rd.f64();
    p.theory_B = rd.f64();
    p.theory_b = rd.f64();
    p.theory_s = rd.f64();
    p.theory_S = rd.f64();
    p.predicted_rho = rd.f64();
    p.S = rd.u32();
    p.block_B = rd.u32();
    p.m = rd.u32();
    p.l = rd.u32();
    p.b = rd.u32();
    p.r_sub = rd.u32();
    p.r_b = rd.u32();
    p.t_b = rd.u32();
    p.code_mode = InnerCodeMode(rd.u8());
    p.s_build = rd.f64();
    p.est_candidates = rd.f64();
    p.est_decode_ops = rd.f64();
    p.est_entries_per_point = rd.f64();
    size_t nt = size_t(rd.u64());
    for (size_t i = 0; i < nt; ++i) p.trace.push_back(rd.str());
    return p;
}
} // namespace

void HammingIndex::save(std::ostream& out) const {
    Writer w{out};
    w.bytes(kMagic, sizeof(kMagic));
    w.u16(kVersion);
    w.u8(0); // kind: hamming
    write_params(w, params_);
    w.u64(seed_value_);
    if (params_.reduction == ReductionKind::partition) {
        w.u32(part_red_.d);
        w.u32(part_red_.d_pad);
        w.u32(part_red_.B);
        w.u32(part_red_.S);
        w.vec_u(part_red_.perm);
    } else {
        w.u32(xor_red_.d);
        w.u32(xor_red_.m);
        w.u32(xor_red_.B);
        w.u32(xor_red_.S);
        w.u8(xor_red_.identity ? 1 : 0);
        w.vec_u(xor_red_.bucket_of);
    }
    const InnerCode& ic = code_.inner();
    w.u8(uint8_t(ic.mode));
    w.u32(ic.b);
    w.u32(ic.r_b);
    w.u32(ic.t_b);
    w.f64(ic.s_prime);
    w.vec_u(ic.words);
    w.u64(ic.sample_budget);
    w.u32(ic.rounds_used);
    w.u32(code_.outer_dim());

    w.u32(uint32_t(points_.size()));
    w.u32(params_.d);
    for (const auto& pt : points_)
        for (uint64_t word : pt.words()) w.u64(word);

    w.u32(uint32_t(buckets_.size()));
    for (const auto& bucket : buckets_) {
        std::vector<std::pair<FilterKey, const std::vector<uint32_t>*>> sorted;
        sorted.reserve(bucket.size());
        for (const auto& kv : bucket) sorted.emplace_back(kv.first, &kv.second);
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        w.u64(sorted.size());
        for (const auto& [key, ids] : sorted) {
            w.u64(key.hi);
            w.u64(key.lo);
            w.vec_u(*ids);
        }
    }
}

HammingIndex HammingIndex::load(std::istream& in) {
    Reader rd{in};
    char magic[6];
    rd.bytes(magic, 6);
    if (std::string(magic, 6) != std::string(kMagic, 6))
        throw parameter_error("load: bad magic");
    if (rd.u16() != kVersion)
        throw parameter_error("load: unsupported version");
    if (rd.u8() != 0)
        throw parameter_error("load: not a hamming index");
    HammingIndex idx;
    idx.params_ = read_params(rd);
    idx.seed_value_ = rd.u64();
    if (idx.params_.reduction == ReductionKind::partition) {
        idx.part_red_.d = rd.u32();
        idx.part_red_.d_pad = rd.u32();
        idx.part_red_.B = rd.u32();
        idx.part_red_.S = rd.u32();
        idx.part_red_.perm = rd.vec_u<uint32_t>();
    } else {
        idx.xor_red_.d = rd.u32();
        idx.xor_red_.m = rd.u32();
        idx.xor_red_.B = rd.u32();
        idx.xor_red_.S = rd.u32();
        idx.xor_red_.identity = rd.u8() != 0;
        idx.xor_red_.bucket_of = rd.vec_u<uint32_t>();
    }
    InnerCode ic;
    ic.mode = InnerCodeMode(rd.u8());
    ic.b = rd.u32();
    ic.r_b = rd.u32();
    ic.t_b = rd.u32();
    ic.s_prime = rd.f64();
    ic.words = rd.vec_u<uint64_t>();
    ic.sample_budget = rd.u64();
    ic.rounds_used = rd.u32();
    uint32_t outer = rd.u32();
    idx.code_ = build_tensored_code(std::move(ic), outer);

    uint32_t n = rd.u32();
    uint32_t d = rd.u32();
    idx.points_.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        BitVector pt(d);
        for (size_t wd = 0; wd < pt.word_count(); ++wd) pt.data()[wd] = rd.u64();
        pt.mask_tail();
        idx.points_.push_back(std::move(pt));
    }
    uint32_t nb = rd.u32();
    idx.buckets_.resize(nb);
    for (uint32_t bi = 0; bi < nb; ++bi) {
        uint64_t cnt = rd.u64();
        idx.buckets_[bi].reserve(size_t(cnt));
        for (uint64_t j = 0; j < cnt; ++j) {
            FilterKey key{rd.u64(), rd.u64()};
            idx.buckets_[bi][key] = rd.vec_u<uint32_t>();
        }
    }
    return idx;
}

} // namespace lvlsf
