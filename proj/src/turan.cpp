#include "lvlsf/turan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "lvlsf/errors.hpp"
#include "lvlsf/oracle.hpp"
#include "lvlsf/serialize.hpp"

namespace lvlsf {

namespace {

constexpr double kEnumGuard = 1e6;     // C(n,k) verification guard
constexpr size_t kDecodeCap = size_t(1) << 22;
constexpr uint32_t kMaxRounds = 64;

double log_binom(double n, double k) {
    if (k < 0 || k > n) return -1e300;
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Iterate k-combinations of [n] in colexicographic order.
struct ComboIter {
    std::vector<uint32_t> c;
    uint32_t n, k;
    bool done = false;
    ComboIter(uint32_t n_, uint32_t k_) : n(n_), k(k_) {
        c.resize(k);
        for (uint32_t i = 0; i < k; ++i) c[i] = i;
        done = k > n || k == 0;
    }
    void next() {
        uint32_t i = 0;
        while (i < k) {
            uint32_t limit = (i + 1 < k) ? c[i + 1] : n;
            if (c[i] + 1 < limit) break;
            ++i;
        }
        if (i == k) { done = true; return; }
        ++c[i];
        for (uint32_t j = 0; j < i; ++j) c[j] = j;
    }
};

// Enumerates r-subsets of `elems`, calling f(block) with a sorted block.
template <typename F>
void for_each_subset(const std::vector<uint32_t>& elems, uint32_t r, F&& f) {
    if (elems.size() < r || r == 0) return;
    std::vector<uint32_t> idx(r);
    for (uint32_t i = 0; i < r; ++i) idx[i] = i;
    Block blk(r);
    for (;;) {
        for (uint32_t i = 0; i < r; ++i) blk[i] = elems[idx[i]];
        if (!f(blk)) return;
        int32_t i = int32_t(r) - 1;
        while (i >= 0 && idx[uint32_t(i)] == elems.size() - r + uint32_t(i)) --i;
        if (i < 0) return;
        ++idx[uint32_t(i)];
        for (uint32_t j = uint32_t(i) + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

// ---- decoding ---------------------------------------------------------------

void TuranSystem::decode_base(const std::vector<uint32_t>& S, std::vector<Block>& out) const {
    if (S.size() < r_) return;
    if (base_all_subsets_) {
        for_each_subset(S, r_, [&](const Block& blk) {
            out.push_back(blk);
            return out.size() <= kDecodeCap;
        });
        if (out.size() > kDecodeCap)
            throw cost_guard_error("turan decode: output exceeds cap");
        return;
    }
    double n_subsets = std::exp(log_binom(double(S.size()), double(r_)));
    if (n_subsets <= double(base_blocks_.size()) * 4.0) {
        for_each_subset(S, r_, [&](const Block& blk) {
            if (std::binary_search(base_blocks_.begin(), base_blocks_.end(), blk))
                out.push_back(blk);
            return true;
        });
    } else {
        for (const Block& blk : base_blocks_)
            if (std::includes(S.begin(), S.end(), blk.begin(), blk.end()))
                out.push_back(blk);
    }
}

void TuranSystem::decode_scaled(const std::vector<uint32_t>& S, std::vector<Block>& out) const {
    const uint32_t b = scale_b_;
    const uint32_t words = (n_ + 63) / 64;
    std::vector<uint64_t> mask(words, 0);
    for (uint32_t e : S) mask[e >> 6] |= 1ULL << (e & 63);

    const uint32_t min_per_part = inner_->r_;
    std::vector<std::vector<uint32_t>> locals(b);
    std::vector<std::vector<Block>> part_blocks(b);
    for (size_t fn = 0; fn < splitter_.size(); ++fn) {
        const uint64_t* pm = part_masks_[fn].data();
        bool viable = true;
        for (uint32_t j = 0; j < b && viable; ++j) {
            uint32_t cnt = 0;
            for (uint32_t w = 0; w < words; ++w)
                cnt += uint32_t(std::popcount(pm[j * words + w] & mask[w]));
            viable = cnt >= min_per_part;
        }
        if (!viable) continue;
        for (uint32_t j = 0; j < b && viable; ++j) {
            const auto& coords = part_coords_[fn * b + j];
            locals[j].clear();
            for (uint32_t local = 0; local < coords.size(); ++local) {
                uint32_t e = coords[local];
                if (mask[e >> 6] & (1ULL << (e & 63))) locals[j].push_back(local);
            }
            part_blocks[j] = inner_->decode(locals[j]);
            viable = !part_blocks[j].empty();
        }
        if (!viable) continue;
        // Full product across parts; map local block elements back to [n].
        std::vector<size_t> pick(b, 0);
        for (;;) {
            Block blk;
            blk.reserve(r_);
            for (uint32_t j = 0; j < b; ++j) {
                const auto& coords = part_coords_[fn * b + j];
                for (uint32_t local : part_blocks[j][pick[j]]) blk.push_back(coords[local]);
            }
            std::sort(blk.begin(), blk.end());
            out.push_back(std::move(blk));
            if (out.size() > kDecodeCap)
                throw cost_guard_error("turan decode: output exceeds cap");
            uint32_t j = 0;
            while (j < b && ++pick[j] == part_blocks[j].size()) pick[j++] = 0;
            if (j == b) break;
        }
    }
}

void TuranSystem::decode_hashed(const std::vector<uint32_t>& S, std::vector<Block>& out) const {
    const uint32_t range = phf_.range;
    std::vector<std::vector<uint32_t>> slot_elems(range);
    std::vector<uint32_t> touched;
    std::vector<uint32_t> image;
    for (size_t fn = 0; fn < phf_.size(); ++fn) {
        touched.clear();
        image.clear();
        for (uint32_t x : S) {
            uint32_t slot = hash_perm_[phf_.apply(fn, x)];
            if (slot_elems[slot].empty()) touched.push_back(slot);
            slot_elems[slot].push_back(x);
        }
        image.assign(touched.begin(), touched.end());
        std::sort(image.begin(), image.end());
        std::vector<Block> inner_blocks = inner_->decode(image);
        for (const Block& R : inner_blocks) {
            // Product of the pullback classes of R's slots.
            std::vector<size_t> pick(R.size(), 0);
            for (;;) {
                Block blk(R.size());
                for (size_t j = 0; j < R.size(); ++j)
                    blk[j] = slot_elems[R[j]][pick[j]];
                std::sort(blk.begin(), blk.end());
                out.push_back(std::move(blk));
                if (out.size() > kDecodeCap)
                    throw cost_guard_error("turan decode: output exceeds cap");
                size_t j = 0;
                while (j < R.size() && ++pick[j] == slot_elems[R[j]].size()) pick[j++] = 0;
                if (j == R.size()) break;
            }
        }
        for (uint32_t slot : touched) slot_elems[slot].clear();
    }
}

void TuranSystem::decode_partitioned(const std::vector<uint32_t>& S, std::vector<Block>& out) const {
    const uint32_t inner_n = inner_->n_;
    std::vector<std::vector<uint32_t>> locals(parts_a_);
    for (uint32_t e : S) {
        uint32_t pos = universe_perm_[e];
        locals[pos / inner_n].push_back(pos % inner_n);
    }
    for (uint32_t part = 0; part < parts_a_; ++part) {
        if (locals[part].size() < inner_->r_) continue;
        std::sort(locals[part].begin(), locals[part].end());
        std::vector<Block> blocks = inner_->decode(locals[part]);
        for (Block& blk : blocks) {
            for (auto& e : blk) e = universe_inv_[part * inner_n + e];
            std::sort(blk.begin(), blk.end());
            out.push_back(std::move(blk));
            if (out.size() > kDecodeCap)
                throw cost_guard_error("turan decode: output exceeds cap");
        }
    }
}

void TuranSystem::decode_into(const std::vector<uint32_t>& S, std::vector<Block>& out) const {
    switch (stage_) {
        case Stage::base: decode_base(S, out); break;
        case Stage::splitter_scaled: decode_scaled(S, out); break;
        case Stage::hash_extended: decode_hashed(S, out); break;
        case Stage::partition_extended: decode_partitioned(S, out); break;
    }
}

std::vector<Block> TuranSystem::decode(const std::vector<uint32_t>& S) const {
    for (uint32_t e : S)
        if (e >= n_)
            throw dimension_error("turan decode: element outside universe");
    std::vector<Block> out;
    decode_into(S, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool TuranSystem::contains_block(const std::vector<uint32_t>& S) const {
    if (S.size() < r_) return false;
    switch (stage_) {
        case Stage::base: {
            if (base_all_subsets_) return true; // |S| >= r checked above
            double n_subsets = std::exp(log_binom(double(S.size()), double(r_)));
            bool found = false;
            if (n_subsets <= double(base_blocks_.size()) * 4.0) {
                for_each_subset(S, r_, [&](const Block& blk) {
                    found = std::binary_search(base_blocks_.begin(), base_blocks_.end(), blk);
                    return !found;
                });
            } else {
                for (const Block& blk : base_blocks_) {
                    if (std::includes(S.begin(), S.end(), blk.begin(), blk.end())) {
                        found = true;
                        break;
                    }
                }
            }
            return found;
        }
        case Stage::splitter_scaled: {
            const uint32_t b = scale_b_;
            std::vector<std::vector<uint32_t>> locals(b);
            std::vector<uint32_t> seen(b);
            std::vector<uint32_t> local_of(n_);
            for (size_t fn = 0; fn < splitter_.size(); ++fn) {
                for (auto& v : locals) v.clear();
                const auto& labels = splitter_.labels(fn);
                // local index = rank of the coordinate inside its part
                std::fill(seen.begin(), seen.end(), 0);
                for (uint32_t i = 0; i < n_; ++i) local_of[i] = seen[labels[i]]++;
                for (uint32_t e : S) locals[labels[e]].push_back(local_of[e]);
                bool ok = true;
                for (uint32_t j = 0; j < b && ok; ++j)
                    ok = inner_->contains_block(locals[j]);
                if (ok) return true;
            }
            return false;
        }
        case Stage::hash_extended: {
            std::vector<uint32_t> image;
            for (size_t fn = 0; fn < phf_.size(); ++fn) {
                image.clear();
                for (uint32_t x : S) image.push_back(hash_perm_[phf_.apply(fn, x)]);
                std::sort(image.begin(), image.end());
                image.erase(std::unique(image.begin(), image.end()), image.end());
                if (inner_->contains_block(image)) return true;
            }
            return false;
        }
        case Stage::partition_extended: {
            const uint32_t inner_n = inner_->n_;
            std::vector<std::vector<uint32_t>> locals(parts_a_);
            for (uint32_t e : S) {
                uint32_t pos = universe_perm_[e];
                locals[pos / inner_n].push_back(pos % inner_n);
            }
            for (auto& loc : locals) {
                std::sort(loc.begin(), loc.end());
                if (inner_->contains_block(loc)) return true;
            }
            return false;
        }
    }
    return false;
}

// ---- size accounting --------------------------------------------------------

double TuranSystem::log_size() const {
    switch (stage_) {
        case Stage::base:
            return base_all_subsets_ ? log_binom(double(n_), double(r_))
                                     : std::log(double(std::max<size_t>(base_blocks_.size(), 1)));
        case Stage::splitter_scaled:
            return std::log(double(splitter_.size())) + double(scale_b_) * inner_->log_size();
        case Stage::hash_extended:
            // |T| = |T(universe)| <= |H| |T_inner| (n/range)^r by the
            // decode-size bound at s = n.
            return std::log(double(phf_.size())) + inner_->log_size() +
                   double(r_) * (std::log(double(n_)) - std::log(double(phf_.range)));
        case Stage::partition_extended:
            return std::log(double(parts_a_)) + inner_->log_size();
    }
    return 0;
}

double TuranSystem::expected_decode_bound(double s) const {
    s = std::min(s, double(n_));
    switch (stage_) {
        case Stage::base: {
            if (s < r_) return 0;
            double subsets = std::exp(log_binom(s, double(r_)));
            if (base_all_subsets_) return subsets;
            // E over uniform random S of fixed size: each block is
            // contained with probability prod (s-i)/(n-i).
            double p = 1;
            for (uint32_t i = 0; i < r_; ++i) p *= (s - i) / double(n_ - i);
            return double(base_blocks_.size()) * p;
        }
        case Stage::splitter_scaled: {
            // Even-split estimate (reported, not asserted standalone).
            double per = inner_->expected_decode_bound(s / scale_b_);
            return double(splitter_.size()) * std::pow(per, double(scale_b_));
        }
        case Stage::hash_extended: {
            // Maclaurin: E <= |H| |T_inner| (s/range)^r.
            return double(phf_.size()) * std::exp(inner_->log_size()) *
                   std::pow(s / double(phf_.range), double(r_));
        }
        case Stage::partition_extended: {
            const double m = double(n_) / parts_a_;
            if (inner_->stage_ == Stage::base && inner_->base_all_subsets_) {
                // Exact: a * E[C(X,r)] = a * C(s,r) * prod (m-i)/(n-i).
                double v = parts_a_ * std::exp(log_binom(s, double(r_)));
                for (uint32_t i = 0; i < r_; ++i) v *= (m - i) / double(n_ - i);
                return v;
            }
            // Exact hypergeometric moment of the inner bound's s-dependence
            // (inner bounds are monomials of degree r in s for the hashed
            // composition; evaluate E[X^r] numerically).
            double total = 0;
            uint32_t xmax = uint32_t(std::min(s, m));
            double lead = inner_->expected_decode_bound(1.0); // bound at s=1 gives the monomial scale
            bool monomial = inner_->stage_ == Stage::hash_extended;
            for (uint32_t x = inner_->r_; x <= xmax; ++x) {
                double lp = log_binom(s, double(x)) + log_binom(double(n_) - s, m - double(x)) -
                            log_binom(double(n_), m);
                double inner_val = monomial ? lead * std::pow(double(x), double(r_))
                                            : inner_->expected_decode_bound(double(x));
                total += std::exp(lp) * inner_val;
            }
            return double(parts_a_) * total;
        }
    }
    return 0;
}

// ---- construction -----------------------------------------------------------

TuranSystem build_base_system(uint32_t n, uint32_t k, uint32_t r, const Seed& seed) {
    if (!(n >= k && k >= r && r >= 1))
        throw parameter_error("base system: requires n >= k >= r >= 1");

    TuranSystem sys;
    sys.stage_ = TuranSystem::Stage::base;
    sys.n_ = n;
    sys.k_ = k;
    sys.r_ = r;

    if (k == r) {
        // Any valid system must contain every r-subset; build it directly
        // (sampling would coupon-collect to exactly this set). Structural,
        // so no enumeration guard applies.
        sys.base_all_subsets_ = true;
        return sys;
    }
    if (log_binom(n, k) > std::log(kEnumGuard))
        throw cost_guard_error("base system: C(n,k) beyond enumeration guard");

    double log_ratio = log_binom(n, r) - log_binom(k, r);
    double budget = std::exp(log_ratio) * (1.0 + log_binom(n, k));
    if (budget > 1e7)
        throw cost_guard_error("base system: sample budget beyond guard");
    uint64_t ell = uint64_t(std::ceil(budget));

    for (uint32_t round = 0; round < kMaxRounds; ++round) {
        Rng rng(seed.child(round));
        std::vector<Block> blocks;
        blocks.reserve(ell);
        std::vector<uint32_t> scratch(n);
        for (uint32_t i = 0; i < n; ++i) scratch[i] = i;
        for (uint64_t t = 0; t < ell; ++t) {
            // Partial Fisher-Yates for a uniform r-subset.
            for (uint32_t i = 0; i < r; ++i) {
                uint32_t j = i + uint32_t(rng.below(n - i));
                std::swap(scratch[i], scratch[j]);
            }
            Block blk(scratch.begin(), scratch.begin() + r);
            std::sort(blk.begin(), blk.end());
            blocks.push_back(std::move(blk));
        }
        std::sort(blocks.begin(), blocks.end());
        blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
        sys.base_blocks_ = std::move(blocks);
        if (verify_system(sys, n, k)) {
            return sys;
        }
    }
    throw construction_error("base system: retry cap exceeded (n=" + std::to_string(n) +
                             " k=" + std::to_string(k) + " r=" + std::to_string(r) + ")");
}

TuranSystem splitter_scale(TuranSystem sys, uint32_t b) {
    if (b == 0) throw parameter_error("splitter_scale: b = 0");
    if (b == 1) return sys; // identity transformation

    TuranSystem out;
    out.stage_ = TuranSystem::Stage::splitter_scaled;
    out.n_ = b * sys.n_;
    out.k_ = b * sys.k_;
    out.r_ = b * sys.r_;
    out.scale_b_ = b;
    out.splitter_ = build_splitter(out.n_, b);
    out.inner_ = std::make_unique<TuranSystem>(std::move(sys));

    const uint32_t words = (out.n_ + 63) / 64;
    out.part_masks_.resize(out.splitter_.size());
    out.part_coords_.resize(out.splitter_.size() * b);
    for (size_t fn = 0; fn < out.splitter_.size(); ++fn) {
        out.part_masks_[fn].assign(size_t(b) * words, 0);
        for (uint32_t j = 0; j < b; ++j) {
            auto coords = out.splitter_.part_indices(fn, uint8_t(j));
            for (uint32_t e : coords)
                out.part_masks_[fn][size_t(j) * words + (e >> 6)] |= 1ULL << (e & 63);
            out.part_coords_[fn * b + j] = std::move(coords);
        }
    }
    return out;
}

TuranSystem hash_extend(TuranSystem sys, uint32_t new_universe, PerfectHashFamily phf,
                        const Seed& seed) {
    if (phf.range != sys.universe())
        throw parameter_error("hash_extend: phf range must equal inner universe");
    if (phf.domain != new_universe)
        throw parameter_error("hash_extend: phf domain must equal new universe");

    TuranSystem out;
    out.stage_ = TuranSystem::Stage::hash_extended;
    out.n_ = new_universe;
    out.k_ = sys.k_;
    out.r_ = sys.r_;
    out.phf_ = std::move(phf);
    out.inner_ = std::make_unique<TuranSystem>(std::move(sys));

    out.hash_perm_.resize(out.phf_.range);
    for (uint32_t i = 0; i < out.phf_.range; ++i) out.hash_perm_[i] = i;
    Rng rng(seed.child(seed_path::kPermutation));
    rng.shuffle(out.hash_perm_);
    return out;
}

TuranSystem partition_extend(TuranSystem sys, uint32_t a, const Seed& seed) {
    if (a == 0) throw parameter_error("partition_extend: a = 0");
    if (a == 1) return sys;

    TuranSystem out;
    out.stage_ = TuranSystem::Stage::partition_extended;
    out.n_ = a * sys.n_;
    out.k_ = a * sys.k_;
    out.r_ = sys.r_;
    out.parts_a_ = a;
    out.inner_ = std::make_unique<TuranSystem>(std::move(sys));

    out.universe_perm_.resize(out.n_);
    for (uint32_t i = 0; i < out.n_; ++i) out.universe_perm_[i] = i;
    Rng rng(seed.child(seed_path::kPermutation));
    rng.shuffle(out.universe_perm_);
    out.universe_inv_.resize(out.n_);
    for (uint32_t i = 0; i < out.n_; ++i) out.universe_inv_[out.universe_perm_[i]] = i;
    return out;
}

TuranParams plan_turan_params(uint32_t n, uint32_t k, uint32_t r) {
    TuranParams p;
    p.n = n;
    p.k = k;
    p.r = r;
    uint32_t b = uint32_t(std::ceil(std::sqrt(double(r)) - 1e-9));
    p.r_adj = b * b;
    if (p.r_adj < 4) { b = 2; p.r_adj = 4; }
    p.b = b;
    if (p.r_adj != r)
        p.trace.push_back("r " + std::to_string(r) + " -> " + std::to_string(p.r_adj) +
                          " (next perfect square; larger blocks remain valid)");
    double c0_real = double(p.r_adj) / std::log(std::pow(double(p.r_adj), 1.5));
    p.c0 = std::max<uint32_t>(b, uint32_t(std::llround(c0_real)));
    p.trace.push_back("r/log(r^{3/2}) = " + std::to_string(c0_real) + " -> c0 = " +
                      std::to_string(p.c0));
    uint32_t k_unit = p.c0 * b;
    p.a = k / k_unit;
    if (p.a == 0)
        throw parameter_error("turan pipeline: k=" + std::to_string(k) +
                              " below stage unit k/a=" + std::to_string(k_unit) +
                              "; use all-subsets or self-concatenation");
    p.k_adj = p.a * k_unit;
    if (p.k_adj != k)
        p.trace.push_back("k " + std::to_string(k) + " -> " + std::to_string(p.k_adj) +
                          " (round down to multiple of k/a; still covers the requested k)");
    p.n_pad = (n + p.a - 1) / p.a * p.a;
    if (p.n_pad != n)
        p.trace.push_back("n " + std::to_string(n) + " -> " + std::to_string(p.n_pad) +
                          " (pad to multiple of a with unused elements)");
    return p;
}

TuranSystem build_turan(uint32_t n, uint32_t k, uint32_t r, const Seed& seed) {
    if (!(n >= k && k >= r && r >= 1))
        throw parameter_error("build_turan: requires n >= k >= r >= 1");

    // Direct single-stage regime: enumeration and sampling both cheap.
    if (log_binom(n, k) <= std::log(kEnumGuard)) {
        double budget = std::exp(log_binom(n, r) - log_binom(k, r)) * (1.0 + log_binom(n, k));
        if (k == r || budget <= 1e5) {
            TuranSystem sys = build_base_system(n, k, r, seed);
            sys.params_.n = n;
            sys.params_.k = k;
            sys.params_.r = r;
            sys.params_.n_pad = n;
            sys.params_.k_adj = k;
            sys.params_.r_adj = r;
            sys.params_.a = 1;
            sys.params_.trace.push_back("direct base system (enumerable regime)");
            return sys;
        }
    }

    TuranParams params = plan_turan_params(n, k, r);
    const uint32_t b = params.b, c0 = params.c0, a = params.a;

    TuranSystem base = build_base_system(c0 * c0 * b, c0, b, seed.child(seed_path::kTuran));
    TuranSystem scaled = splitter_scale(std::move(base), b);
    // scaled is a ((c0 b)^2, c0 b, r_adj) system.
    uint32_t univ_a = params.n_pad / a;
    PerfectHashFamily phf = build_perfect_hash_family(univ_a, scaled.universe(), c0 * b,
                                                      seed.child(seed_path::kTuran).child(1));
    TuranSystem hashed = hash_extend(std::move(scaled), univ_a, std::move(phf),
                                     seed.child(seed_path::kTuran).child(2));
    TuranSystem full = partition_extend(std::move(hashed), a,
                                        seed.child(seed_path::kTuran).child(3));
    full.params_ = params;

    if (log_binom(full.universe(), full.covers_k()) <= std::log(kEnumGuard)) {
        if (!verify_system(full, full.universe(), full.covers_k()))
            throw verification_error("build_turan: staged system failed exhaustive verification");
    }
    return full;
}

// ---- verification -----------------------------------------------------------

bool verify_system_serial(const TuranSystem& sys, uint32_t n, uint32_t k) {
    if (log_binom(n, k) > std::log(kEnumGuard))
        throw cost_guard_error("verify_system: C(n,k) beyond cost guard");
    if (n > sys.universe())
        throw parameter_error("verify_system: n exceeds system universe");
    for (ComboIter it(n, k); !it.done; it.next())
        if (!sys.contains_block(it.c)) return false;
    return true;
}

bool verify_system(const TuranSystem& sys, uint32_t n, uint32_t k) {
    if (log_binom(n, k) > std::log(kEnumGuard))
        throw cost_guard_error("verify_system: C(n,k) beyond cost guard");
    if (n > sys.universe())
        throw parameter_error("verify_system: n exceeds system universe");
    constexpr size_t kBatch = 4096;
    std::vector<std::vector<uint32_t>> batch;
    batch.reserve(kBatch);
    ComboIter it(n, k);
    while (!it.done) {
        batch.clear();
        while (!it.done && batch.size() < kBatch) {
            batch.push_back(it.c);
            it.next();
        }
        bool ok = true;
        const int64_t m = int64_t(batch.size());
#pragma omp parallel for schedule(dynamic, 32) reduction(&& : ok)
        for (int64_t i = 0; i < m; ++i)
            ok = ok && sys.contains_block(batch[size_t(i)]);
        if (!ok) return false;
    }
    return true;
}

// ---- serialization ----------------------------------------------------------

struct TuranSerde {
    static void write(Writer& w, const TuranSystem& s) {
        w.u8(uint8_t(s.stage_));
        w.u32(s.n_);
        w.u32(s.k_);
        w.u32(s.r_);
        w.u32(s.params_.n);
        w.u32(s.params_.k);
        w.u32(s.params_.r);
        w.u32(s.params_.n_pad);
        w.u32(s.params_.k_adj);
        w.u32(s.params_.r_adj);
        w.u32(s.params_.b);
        w.u32(s.params_.c0);
        w.u32(s.params_.a);
        w.u64(s.params_.trace.size());
        for (const auto& t : s.params_.trace) w.str(t);
        switch (s.stage_) {
            case TuranSystem::Stage::base:
                w.u8(s.base_all_subsets_ ? 1 : 0);
                w.u64(s.base_blocks_.size());
                for (const auto& blk : s.base_blocks_) w.vec_u(blk);
                break;
            case TuranSystem::Stage::splitter_scaled:
                w.u32(s.scale_b_);
                write(w, *s.inner_);
                break;
            case TuranSystem::Stage::hash_extended:
                w.u8(uint8_t(s.phf_.mode));
                w.u32(s.phf_.domain);
                w.u32(s.phf_.range);
                w.u32(s.phf_.k);
                w.u32(s.phf_.prime);
                w.u32(s.phf_.collision_count);
                w.vec_u(s.phf_.multipliers);
                w.u64(s.phf_.fns.size());
                for (const auto& f : s.phf_.fns) w.vec_u(f);
                w.vec_u(s.hash_perm_);
                write(w, *s.inner_);
                break;
            case TuranSystem::Stage::partition_extended:
                w.u32(s.parts_a_);
                w.vec_u(s.universe_perm_);
                write(w, *s.inner_);
                break;
        }
    }

    static TuranSystem read(Reader& rd) {
        TuranSystem s;
        s.stage_ = TuranSystem::Stage(rd.u8());
        s.n_ = rd.u32();
        s.k_ = rd.u32();
        s.r_ = rd.u32();
        s.params_.n = rd.u32();
        s.params_.k = rd.u32();
        s.params_.r = rd.u32();
        s.params_.n_pad = rd.u32();
        s.params_.k_adj = rd.u32();
        s.params_.r_adj = rd.u32();
        s.params_.b = rd.u32();
        s.params_.c0 = rd.u32();
        s.params_.a = rd.u32();
        size_t nt = size_t(rd.u64());
        for (size_t i = 0; i < nt; ++i) s.params_.trace.push_back(rd.str());
        switch (s.stage_) {
            case TuranSystem::Stage::base: {
                s.base_all_subsets_ = rd.u8() != 0;
                size_t nb = size_t(rd.u64());
                s.base_blocks_.resize(nb);
                for (auto& blk : s.base_blocks_) blk = rd.vec_u<uint32_t>();
                break;
            }
            case TuranSystem::Stage::splitter_scaled: {
                uint32_t b = rd.u32();
                TuranSystem inner = read(rd);
                uint32_t want_n = s.n_, want_k = s.k_, want_r = s.r_;
                TuranParams keep = s.params_;
                s = splitter_scale(std::move(inner), b);
                s.params_ = keep;
                if (s.n_ != want_n || s.k_ != want_k || s.r_ != want_r)
                    throw parameter_error("turan deserialize: inconsistent scaled stage");
                break;
            }
            case TuranSystem::Stage::hash_extended: {
                s.phf_.mode = PerfectHashFamily::Mode(rd.u8());
                s.phf_.domain = rd.u32();
                s.phf_.range = rd.u32();
                s.phf_.k = rd.u32();
                s.phf_.prime = rd.u32();
                s.phf_.collision_count = rd.u32();
                s.phf_.multipliers = rd.vec_u<uint32_t>();
                size_t nf = size_t(rd.u64());
                s.phf_.fns.resize(nf);
                for (auto& f : s.phf_.fns) f = rd.vec_u<uint32_t>();
                s.hash_perm_ = rd.vec_u<uint32_t>();
                s.inner_ = std::make_unique<TuranSystem>(read(rd));
                break;
            }
            case TuranSystem::Stage::partition_extended: {
                s.parts_a_ = rd.u32();
                s.universe_perm_ = rd.vec_u<uint32_t>();
                s.universe_inv_.resize(s.universe_perm_.size());
                for (uint32_t i = 0; i < s.universe_perm_.size(); ++i)
                    s.universe_inv_[s.universe_perm_[i]] = i;
                s.inner_ = std::make_unique<TuranSystem>(read(rd));
                break;
            }
        }
        return s;
    }
};

void write_turan(Writer& w, const TuranSystem& sys) { TuranSerde::write(w, sys); }
TuranSystem read_turan(Reader& rd) { return TuranSerde::read(rd); }

void dump_turan(std::ostream& out, const TuranSystem& sys) {
    std::vector<uint32_t> universe(sys.universe());
    for (uint32_t i = 0; i < sys.universe(); ++i) universe[i] = i;
    auto blocks = sys.decode(universe);
    out << "turan n=" << sys.universe() << " k=" << sys.covers_k()
        << " r=" << sys.block_size() << "\n";
    for (const auto& blk : blocks) {
        for (size_t i = 0; i < blk.size(); ++i)
            out << (i ? " " : "") << blk[i];
        out << "\n";
    }
}

} // namespace lvlsf
