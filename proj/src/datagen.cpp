#include "lvlsf/datagen.hpp"

#include <cmath>

#include "lvlsf/errors.hpp"

namespace lvlsf {

namespace {

BitVector random_bits(Rng& rng, uint32_t d) {
    BitVector v(d);
    for (size_t w = 0; w < v.word_count(); ++w) v.data()[w] = rng.next_u64();
    v.mask_tail();
    return v;
}

std::vector<uint32_t> sample_distinct(Rng& rng, uint32_t n, uint32_t count) {
    std::vector<uint32_t> all(n);
    for (uint32_t i = 0; i < n; ++i) all[i] = i;
    for (uint32_t i = 0; i < count; ++i) {
        uint32_t j = i + uint32_t(rng.below(n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(count);
    return all;
}

} // namespace

HammingInstance gen_hamming_instance(uint32_t n, uint32_t d, uint32_t r, uint32_t queries,
                                     const Seed& seed) {
    if (n == 0 || r > d)
        throw parameter_error("gen hamming: need n >= 1 and r <= d");
    HammingInstance inst;
    inst.data.dim = d;
    inst.queries.dim = d;
    Rng rng(seed.child(seed_path::kGen));
    for (uint32_t i = 0; i < n; ++i) inst.data.points.push_back(random_bits(rng, d));
    for (uint32_t qi = 0; qi < queries; ++qi) {
        uint32_t target = uint32_t(rng.below(n));
        uint32_t dist = uint32_t(rng.below(r + 1));
        BitVector q = inst.data.points[target];
        for (uint32_t coord : sample_distinct(rng, d, dist)) q.flip(coord);
        inst.queries.points.push_back(std::move(q));
        inst.truth.push_back({qi, target, double(dist)});
    }
    return inst;
}

SetsInstance gen_sets_instance(uint32_t n, uint32_t d, uint32_t w, double b1, uint32_t queries,
                               const Seed& seed) {
    if (n == 0 || w == 0 || w > d)
        throw parameter_error("gen sets: need n >= 1 and 1 <= w <= d");
    if (!(b1 > 0 && b1 <= 1))
        throw parameter_error("gen sets: b1 in (0, 1]");
    uint32_t inter = uint32_t(std::ceil(b1 * w - 1e-9));
    if (inter > w)
        throw parameter_error("gen sets: planted intersection exceeds w");
    SetsInstance inst;
    inst.data.universe = d;
    inst.queries.universe = d;
    Rng rng(seed.child(seed_path::kGen));
    for (uint32_t i = 0; i < n; ++i)
        inst.data.points.emplace_back(sample_distinct(rng, d, w), d);
    for (uint32_t qi = 0; qi < queries; ++qi) {
        uint32_t target = uint32_t(rng.below(n));
        const auto& t = inst.data.points[target].elements();
        // keep `inter` elements of the target, fill the rest from outside it
        std::vector<uint32_t> kept = t;
        rng.shuffle(kept);
        kept.resize(inter);
        std::vector<uint32_t> pool;
        pool.reserve(d - w);
        for (uint32_t e = 0; e < d; ++e)
            if (!inst.data.points[target].contains(e)) pool.push_back(e);
        rng.shuffle(pool);
        for (uint32_t i = 0; i < w - inter; ++i) kept.push_back(pool[i]);
        inst.queries.points.emplace_back(std::move(kept), d);
        inst.truth.push_back({qi, target, double(inter) / double(w)});
    }
    return inst;
}

L1Instance gen_l1_instance(uint32_t n, uint32_t d, double r, uint32_t queries, const Seed& seed) {
    if (n == 0 || d == 0 || !(r > 0))
        throw parameter_error("gen l1: need n >= 1, d >= 1, r > 0");
    L1Instance inst;
    inst.data.dim = d;
    inst.queries.dim = d;
    Rng rng(seed.child(seed_path::kGen));
    const double box = 8.0 * r;
    for (uint32_t i = 0; i < n; ++i) {
        std::vector<double> p(d);
        for (auto& v : p) v = rng.unit() * box;
        inst.data.points.push_back(std::move(p));
    }
    for (uint32_t qi = 0; qi < queries; ++qi) {
        uint32_t target = uint32_t(rng.below(n));
        double dist = r * (rng.unit() * 0.999 + 0.001);
        // nonnegative weights summing to dist, one fixed sign per coordinate
        std::vector<double> wgt(d);
        double total = 0;
        for (auto& v : wgt) total += (v = rng.unit() + 1e-9);
        std::vector<double> q = inst.data.points[target];
        for (uint32_t i = 0; i < d; ++i)
            q[i] += (rng.coin() ? 1.0 : -1.0) * dist * wgt[i] / total;
        inst.queries.points.push_back(std::move(q));
        inst.truth.push_back({qi, target, dist});
    }
    return inst;
}

} // namespace lvlsf
