#include "lvlsf/similarity_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lvlsf/errors.hpp"

namespace lvlsf {

namespace {

constexpr double kCandidateCost = 48;
constexpr double kEntriesGuard = 4096;

// E[C(X, k1)] for X ~ Hypergeometric(population d, successes w, draws n1):
// choose the k1-subset among the w successes, then require it drawn.
double expected_contained_subsets(uint32_t d, uint32_t w, uint32_t n1, uint32_t k1) {
    if (k1 > w || k1 > n1) return 0;
    double v = 1;
    for (uint32_t i = 0; i < k1; ++i)
        v *= double(w - i) / double(i + 1) * double(n1 - i) / double(d - i);
    // v = C(w,k1) * prod (n1-i)/(d-i)
    return v;
}

} // namespace

SimilarityParams plan_similarity_params(uint64_t n, uint32_t d, uint32_t w, double b1, double b2,
                                        bool force_pipeline) {
    if (!(0 < b2 && b2 < b1 && b1 < 1))
        throw parameter_error("similarity plan: requires 0 < b2 < b1 < 1");
    if (w == 0 || w > d)
        throw parameter_error("similarity plan: requires 1 <= w <= d");
    if (n < 2)
        throw parameter_error("similarity plan: requires n >= 2");

    SimilarityParams p;
    p.n = n;
    p.d = d;
    p.w = w;
    p.b1 = b1;
    p.b2 = b2;
    p.k = std::max<uint32_t>(1, uint32_t(b1 * w + 1e-9));
    p.r = std::max<uint32_t>(1, uint32_t(std::ceil(std::log(double(n)) / std::log(1.0 / b2))));
    p.rho_target = std::log(1.0 / b1) / std::log(1.0 / b2);
    std::ostringstream tr;
    tr << "k=floor(b1 w)=" << p.k << " r=ceil(ln n/ln(1/b2))=" << p.r
       << " rho_target=" << p.rho_target;
    p.trace.push_back(tr.str());

    if (force_pipeline) {
        // Staged construction, concatenating until k clears the stage unit.
        uint32_t mu = 1;
        for (; mu <= 64; ++mu) {
            try {
                (void)plan_turan_params(uint64_t(mu) * d, mu * p.k, p.r);
                break;
            } catch (const parameter_error&) {
                continue;
            }
        }
        if (mu > 64)
            throw parameter_error("similarity plan: no concatenation factor fits the pipeline");
        p.concat_mu = mu;
        p.mode = mu > 1 ? SimilarityMode::self_concat : SimilarityMode::turan_pipeline;
        p.trace.push_back(mu > 1 ? "forced pipeline with self-concatenation mu=" +
                                       std::to_string(mu)
                                 : "forced pipeline");
        return p;
    }

    // k <= r: the all-(d,k,k)-subsets system is the prescribed fast
    // deterministic structure; use it whenever its decode cost fits.
    double far_inter = std::max(1.0, double(w) * w / d); // random far model
    if (p.k <= p.r) {
        double dec = expected_contained_subsets(d, w, d, p.k); // = C(w, k)
        if (dec <= kEntriesGuard) {
            p.mode = SimilarityMode::all_subsets;
            p.part_a = 1;
            p.est_decode = dec;
            p.est_candidates =
                double(n) * std::min(1.0, expected_contained_subsets(
                                              d, uint32_t(std::ceil(far_inter)), d, p.k)) + 1.0;
            p.trace.push_back("k <= r: all C(d,k) blocks (deterministic case split)");
            return p;
        }
        p.trace.push_back("k <= r but C(w,k) beyond the decode guard; partitioning instead");
    }

    // Partitioned family: a parts, all k1-subsets inside each part,
    // k1 = ceil(k/a). a = 1 is the all-subsets case again.
    double best_score = 0;
    bool have = false;
    for (uint32_t a = 1; a <= std::min(p.k, 64u); ++a) {
        uint32_t k1 = (p.k + a - 1) / a;
        uint32_t d_pad = (d + a - 1) / a * a;
        uint32_t n1 = d_pad / a;
        if (k1 > n1) continue;
        double dec = a * expected_contained_subsets(d_pad, w, n1, k1);
        if (dec > kEntriesGuard || dec <= 0) continue;
        double far = a * expected_contained_subsets(d_pad, uint32_t(std::ceil(far_inter)), n1, k1);
        double cand = double(n) * std::min(1.0, far) + 1.0;
        double score = dec * (k1 + 2.0) + cand * kCandidateCost;
        if (!have || score < best_score) {
            have = true;
            best_score = score;
            p.part_a = a;
            p.est_decode = dec;
            p.est_candidates = cand;
        }
    }
    if (!have)
        throw parameter_error("similarity plan: no feasible partition configuration");
    p.mode = p.part_a == 1 ? SimilarityMode::all_subsets : SimilarityMode::turan_partitioned;
    std::ostringstream bt;
    bt << "build: " << (p.part_a == 1 ? "all-subsets" : "partitioned all-subsets")
       << " a=" << p.part_a << " k1=" << (p.k + p.part_a - 1) / p.part_a
       << " est_decode=" << p.est_decode << " est_cand=" << p.est_candidates
       << " (far model: random intersection " << far_inter << ")";
    p.trace.push_back(bt.str());
    return p;
}

std::vector<std::pair<uint32_t, std::vector<uint32_t>>> group_by_weight(
    const std::vector<SetPoint>& points) {
    std::map<uint32_t, std::vector<uint32_t>> groups;
    for (uint32_t i = 0; i < points.size(); ++i)
        groups[points[i].weight()].push_back(i);
    return {groups.begin(), groups.end()};
}

std::vector<uint32_t> SimilarityIndex::concat_elements(const SetPoint& x, uint32_t mu,
                                                       uint32_t d) {
    std::vector<uint32_t> out;
    out.reserve(size_t(x.weight()) * mu);
    for (uint32_t j = 0; j < mu; ++j)
        for (uint32_t e : x.elements()) out.push_back(e + j * d);
    return out;
}

std::vector<FilterKey> SimilarityIndex::decode_keys(const Group& g, const SetPoint& x) const {
    std::vector<uint32_t> elems;
    if (g.params.concat_mu > 1)
        elems = concat_elements(x, g.params.concat_mu, d_);
    else
        elems = x.elements();
    auto blocks = g.system.decode(elems);
    std::vector<FilterKey> keys;
    keys.reserve(blocks.size());
    for (const auto& blk : blocks)
        keys.push_back(mix128(blk.data(), blk.size(), 0x7ab1e5));
    return keys;
}

SimilarityIndex build_similarity_index(std::vector<SetPoint> points, double b1, double b2,
                                       const Seed& seed, bool force_pipeline) {
    if (points.empty())
        throw parameter_error("similarity build: empty point set");
    SimilarityIndex idx;
    idx.b1_ = b1;
    idx.b2_ = b2;
    idx.seed_value_ = seed.value;
    idx.d_ = points[0].universe();
    for (const auto& pt : points)
        if (pt.universe() != idx.d_)
            throw dimension_error("similarity build: universe mismatch");
    idx.points_ = std::move(points);

    auto grouped = group_by_weight(idx.points_);
    uint64_t n_total = std::max<uint64_t>(idx.points_.size(), 2);
    for (const auto& [weight, members] : grouped) {
        Seed gseed = seed.child(seed_path::kTuran).child(weight);
        SimilarityParams params =
            plan_similarity_params(n_total, idx.d_, weight, b1, b2, force_pipeline);
        SimilarityIndex::Group g;
        g.weight = weight;
        g.params = params;
        switch (params.mode) {
            case SimilarityMode::all_subsets:
                g.system = build_base_system(idx.d_, params.k, params.k, gseed);
                break;
            case SimilarityMode::turan_partitioned: {
                uint32_t a = params.part_a;
                uint32_t k1 = (params.k + a - 1) / a;
                uint32_t d_pad = (idx.d_ + a - 1) / a * a;
                TuranSystem inner = build_base_system(d_pad / a, k1, k1, gseed);
                g.system = partition_extend(std::move(inner), a, gseed);
                break;
            }
            case SimilarityMode::turan_pipeline:
            case SimilarityMode::self_concat: {
                uint32_t mu = params.concat_mu;
                g.system = build_turan(mu * idx.d_, mu * params.k, params.r, gseed);
                break;
            }
        }
        g.params.est_decode = g.system.expected_decode_bound(double(weight) * params.concat_mu);

        // Parallel decode, serial insert in id order (thread-count invariant).
        const size_t m = members.size();
        std::vector<std::vector<FilterKey>> keys(m);
#pragma omp parallel for schedule(dynamic, 4)
        for (int64_t i = 0; i < int64_t(m); ++i)
            keys[size_t(i)] = idx.decode_keys(g, idx.points_[members[size_t(i)]]);
        for (size_t i = 0; i < m; ++i)
            for (const FilterKey& key : keys[i]) {
                auto& bucket = g.buckets[key];
                if (bucket.empty() || bucket.back() != members[i])
                    bucket.push_back(members[i]);
            }
        idx.groups_.push_back(std::move(g));
    }
    return idx;
}

std::optional<uint32_t> SimilarityIndex::query(const SetPoint& q) const {
    QueryStats stats;
    return query(q, stats);
}

std::optional<uint32_t> SimilarityIndex::query(const SetPoint& q, QueryStats& stats) const {
    if (q.universe() != d_)
        throw dimension_error("similarity query: universe mismatch");
    const uint32_t wq = q.weight();
    std::vector<uint8_t> visited(points_.size(), 0);
    for (const auto& g : groups_) {
        // Only groups whose weight admits sim >= b1 against weight wq.
        uint32_t lo = std::min(wq, g.weight), hi = std::max(wq, g.weight);
        if (double(lo) + 1e-9 < b1_ * double(hi)) continue;
        auto keys = decode_keys(g, q);
        stats.filters_decoded += keys.size();
        for (const FilterKey& key : keys) {
            auto it = g.buckets.find(key);
            if (it == g.buckets.end()) continue;
            ++stats.buckets_hit;
            for (uint32_t id : it->second) {
                if (visited[id]) continue;
                visited[id] = 1;
                ++stats.candidates;
                const SetPoint& x = points_[id];
                uint32_t inter = intersection_size(x, q);
                uint32_t mx = std::max(x.weight(), wq);
                if (double(inter) > b2_ * double(mx)) return id;
            }
        }
    }
    return std::nullopt;
}

uint64_t SimilarityIndex::bucket_entries() const {
    uint64_t total = 0;
    for (const auto& g : groups_)
        for (const auto& kv : g.buckets) total += kv.second.size();
    return total;
}

// ---- persistence ------------------------------------------------------------

namespace {
constexpr char kMagic[6] = {'L', 'V', 'L', 'S', 'F', '1'};
constexpr uint16_t kVersion = 1;

void write_sim_params(Writer& w, const SimilarityParams& p) {
    w.u64(p.n);
    w.u32(p.d);
    w.u32(p.w);
    w.f64(p.b1);
    w.f64(p.b2);
    w.u32(p.k);
    w.u32(p.r);
    w.u8(uint8_t(p.mode));
    w.u32(p.part_a);
    w.u32(p.concat_mu);
    w.f64(p.rho_target);
    w.f64(p.est_decode);
    w.f64(p.est_candidates);
    w.u64(p.trace.size());
    for (const auto& t : p.trace) w.str(t);
}

SimilarityParams read_sim_params(Reader& rd) {
    SimilarityParams p;
    p.n = rd.u64();
    p.d = rd.u32();
    p.w = rd.u32();
    p.b1 = rd.f64();
    p.b2 = rd.f64();
    p.k = rd.u32();
    p.r = rd.u32();
    p.mode = SimilarityMode(rd.u8());
    p.part_a = rd.u32();
    p.concat_mu = rd.u32();
    p.rho_target = rd.f64();
    p.est_decode = rd.f64();
    p.est_candidates = rd.f64();
    size_t nt = size_t(rd.u64());
    for (size_t i = 0; i < nt; ++i) p.trace.push_back(rd.str());
    return p;
}
} // namespace

void SimilarityIndex::save(std::ostream& out) const {
    Writer w{out};
    w.bytes(kMagic, sizeof(kMagic));
    w.u16(kVersion);
    w.u8(1); // kind: similarity
    w.f64(b1_);
    w.f64(b2_);
    w.u64(seed_value_);
    w.u32(d_);
    w.u32(uint32_t(points_.size()));
    for (const auto& pt : points_) w.vec_u(pt.elements());
    w.u32(uint32_t(groups_.size()));
    for (const auto& g : groups_) {
        w.u32(g.weight);
        write_sim_params(w, g.params);
        write_turan(w, g.system);
        std::vector<std::pair<FilterKey, const std::vector<uint32_t>*>> sorted;
        sorted.reserve(g.buckets.size());
        for (const auto& kv : g.buckets) sorted.emplace_back(kv.first, &kv.second);
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

SimilarityIndex SimilarityIndex::load(std::istream& in) {
    Reader rd{in};
    char magic[6];
    rd.bytes(magic, 6);
    if (std::string(magic, 6) != std::string(kMagic, 6))
        throw parameter_error("load: bad magic");
    if (rd.u16() != kVersion)
        throw parameter_error("load: unsupported version");
    if (rd.u8() != 1)
        throw parameter_error("load: not a similarity index");
    SimilarityIndex idx;
    idx.b1_ = rd.f64();
    idx.b2_ = rd.f64();
    idx.seed_value_ = rd.u64();
    idx.d_ = rd.u32();
    uint32_t n = rd.u32();
    idx.points_.reserve(n);
    for (uint32_t i = 0; i < n; ++i)
        idx.points_.emplace_back(rd.vec_u<uint32_t>(), idx.d_);
    uint32_t ng = rd.u32();
    for (uint32_t gi = 0; gi < ng; ++gi) {
        Group g;
        g.weight = rd.u32();
        g.params = read_sim_params(rd);
        g.system = read_turan(rd);
        uint64_t cnt = rd.u64();
        g.buckets.reserve(size_t(cnt));
        for (uint64_t j = 0; j < cnt; ++j) {
            FilterKey key{rd.u64(), rd.u64()};
            g.buckets[key] = rd.vec_u<uint32_t>();
        }
        idx.groups_.push_back(std::move(g));
    }
    return idx;
}

} // namespace lvlsf
