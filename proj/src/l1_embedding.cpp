#include "lvlsf/l1_embedding.hpp"

#include <algorithm>
#include <cmath>

#include "lvlsf/errors.hpp"
#include "lvlsf/serialize.hpp"

namespace lvlsf {

namespace {

// Offset placing grid boundaries in the middle of the largest cyclic gap of
// the point coordinates mod side. With at most n points on a cycle of
// length 2rn the largest gap is >= 2r, so every point ends up at distance
// >= r from the nearest boundary.
double sweep_offset(const std::vector<std::vector<double>>& points, uint32_t dim, double side) {
    std::vector<double> mods;
    mods.reserve(points.size());
    for (const auto& p : points) {
        double m = std::fmod(p[dim], side);
        if (m < 0) m += side;
        mods.push_back(m);
    }
    std::sort(mods.begin(), mods.end());
    double best_gap = side - mods.back() + mods.front(); // wrap-around gap
    double best_mid = std::fmod(mods.back() + best_gap / 2.0, side);
    for (size_t i = 0; i + 1 < mods.size(); ++i) {
        double gap = mods[i + 1] - mods[i];
        if (gap > best_gap) {
            best_gap = gap;
            best_mid = mods[i] + gap / 2.0;
        }
    }
    return best_mid;
}

// All pairwise hamming distances of `code` within [lo, hi]; restricted to
// the lower side when hi == 0.
bool verify_code(const std::vector<BitVector>& code, uint32_t lo, uint32_t hi) {
    for (size_t i = 0; i < code.size(); ++i)
        for (size_t j = i + 1; j < code.size(); ++j) {
            uint32_t dist = hamming_distance(code[i], code[j]);
            if (dist < lo || (hi > 0 && dist > hi)) return false;
        }
    return true;
}

std::vector<BitVector> build_verified_code(size_t count, uint32_t bits, uint32_t lo, uint32_t hi,
                                           const Seed& seed) {
    for (uint32_t round = 0; round < 64; ++round) {
        Rng rng(seed.child(round));
        std::vector<BitVector> code;
        code.reserve(count);
        for (size_t v = 0; v < count; ++v) {
            BitVector w(bits);
            for (uint32_t word = 0; word < (bits + 63) / 64; ++word)
                w.data()[word] = rng.next_u64();
            w.mask_tail();
            code.push_back(std::move(w));
        }
        if (verify_code(code, lo, hi)) return code;
    }
    throw construction_error("l1 embedding: distance code rejection-sampling cap exceeded");
}

} // namespace

std::vector<uint64_t> L1Embedding::staircase(uint64_t v, uint64_t R) {
    std::vector<uint64_t> symbols(static_cast<size_t>(R), 0);
    for (uint64_t i = 0; i < R; ++i) symbols[size_t(i)] = (v + i) / R;
    return symbols;
}

std::vector<int64_t> L1Embedding::cell_of(const std::vector<double>& x) const {
    std::vector<int64_t> cell(d_);
    for (uint32_t i = 0; i < d_; ++i)
        cell[i] = int64_t(std::floor((x[i] - offsets_[i]) / side_));
    return cell;
}

L1Embedding::Embedded L1Embedding::embed_point(const std::vector<double>& x) const {
    if (x.size() != d_)
        throw dimension_error("l1 embed: point dim mismatch");
    Embedded out;
    auto cell = cell_of(x);
    uint32_t nbits = out_bits_;
    out.bits = BitVector(nbits);
    uint32_t at = 0;
    if (prefix_mode_) {
        auto it = cell_ids_.find(cell);
        if (it == cell_ids_.end())
            throw parameter_error("l1 embed: point falls in a cell unseen at build "
                                  "(prefix mode embeds known cells only)");
        const BitVector& pc = cell_code_[it->second];
        for (uint32_t i = 0; i < prefix_bits_; ++i)
            if (pc.get(i)) out.bits.set(at + i);
        at += prefix_bits_;
    } else {
        out.cell = cell;
    }
    const uint64_t vmax = M_ + R_;
    for (uint32_t dim = 0; dim < d_; ++dim) {
        double corner = offsets_[dim] + double(cell[dim]) * side_;
        double local = x[dim] - corner;
        int64_t scaled = llround(local * scale_);
        uint64_t v = uint64_t(std::clamp<int64_t>(scaled, 0, int64_t(vmax)));
        for (uint64_t i = 0; i < R_; ++i) {
            uint64_t sym = (v + i) / R_;
            const BitVector& w = symbol_code_[size_t(sym)];
            for (uint32_t bbit = 0; bbit < kappa_; ++bbit)
                if (w.get(bbit)) out.bits.set(at + bbit);
            at += kappa_;
        }
    }
    return out;
}

L1Embedding build_l1_embedding(const std::vector<std::vector<double>>& points,
                               uint32_t d, double r, double c, double eps,
                               const Seed& seed, bool prefix_mode) {
    if (points.empty())
        throw parameter_error("l1 embedding: empty point set");
    if (!(r > 0) || !(c >= 1) || !(eps > 0) || eps > 1)
        throw parameter_error("l1 embedding: need r > 0, c >= 1, eps in (0,1]");
    for (const auto& p : points)
        if (p.size() != d)
            throw dimension_error("l1 embedding: point dim mismatch");

    L1Embedding emb;
    emb.d_ = d;
    emb.r_ = r;
    emb.c_ = c;
    emb.eps_ = eps;
    // Internal split so the composed near/far distortion stays within
    // (1 +- eps): rounding slack is (1 + 2*eps_eff) and the code contributes
    // (1 +- eps_code). For eps <= 1/2, (1+eps/2)(1+2*eps/5) <= 1+eps and the
    // lighter code-side split keeps the output length down; otherwise fall
    // back to the symmetric quarter split, valid up to eps = 1.
    if (eps <= 0.5) {
        emb.eps_eff_ = eps / 5.0;
        emb.eps_code_ = eps / 2.0;
    } else {
        emb.eps_eff_ = eps / 4.0;
        emb.eps_code_ = eps / 4.0;
    }
    const size_t n = points.size();
    emb.side_ = 2.0 * r * double(n);
    emb.offsets_.resize(d);
    for (uint32_t dim = 0; dim < d; ++dim)
        emb.offsets_[dim] = sweep_offset(points, dim, emb.side_);

    emb.scale_ = double(d) / (2.0 * emb.eps_eff_ * r);
    emb.R_ = std::max<uint64_t>(1, uint64_t(llround(emb.scale_ * c * r)));

    // Max rounded coordinate over the build points (data-driven rather than
    // the dn/eps worst case).
    uint64_t M = 0;
    for (const auto& p : points) {
        auto cell = emb.cell_of(p);
        for (uint32_t dim = 0; dim < d; ++dim) {
            double corner = emb.offsets_[dim] + double(cell[dim]) * emb.side_;
            int64_t scaled = llround((p[dim] - corner) * emb.scale_);
            if (scaled > 0) M = std::max(M, uint64_t(scaled));
        }
    }
    emb.M_ = M;

    double ln4n = std::log(4.0 * double(std::max<size_t>(n, 2)));
    emb.kappa_ = uint32_t(std::ceil(4.0 / (emb.eps_code_ * emb.eps_code_) * ln4n));
    const uint64_t vmax = emb.M_ + emb.R_;
    emb.symbols_ = uint32_t((vmax + emb.R_ - 1) / emb.R_ + 1);
    if (uint64_t(emb.symbols_) * emb.kappa_ > (1ULL << 34))
        throw cost_guard_error("l1 embedding: distance code too large");

    uint32_t lo = uint32_t(std::floor((1.0 - emb.eps_code_) * emb.kappa_ / 2.0));
    uint32_t hi = uint32_t(std::ceil((1.0 + emb.eps_code_) * emb.kappa_ / 2.0));
    emb.symbol_code_ = build_verified_code(emb.symbols_, emb.kappa_, lo, hi,
                                           seed.child(seed_path::kDistanceCode));

    uint64_t body_bits = uint64_t(d) * emb.R_ * emb.kappa_;
    if (body_bits > (1ULL << 27))
        throw cost_guard_error("l1 embedding: output length exceeds guard");

    // Cell table (deterministic ids in cell-key order).
    std::map<std::vector<int64_t>, uint32_t> cells;
    for (const auto& p : points) cells.emplace(emb.cell_of(p), 0);
    uint32_t next = 0;
    for (auto& kv : cells) kv.second = next++;
    emb.cell_ids_ = std::move(cells);

    emb.prefix_mode_ = prefix_mode;
    if (prefix_mode) {
        double sr_bits = emb.bits_per_unit() * r;
        uint32_t P = uint32_t(std::ceil(2.0 * (1.0 + eps) * c * sr_bits /
                                        (1.0 - emb.eps_code_))) + 1;
        emb.prefix_bits_ = P;
        uint32_t plo = uint32_t(std::ceil((1.0 - emb.eps_code_) * P / 2.0));
        if (emb.cell_ids_.size() > 1) {
            emb.cell_code_ = build_verified_code(emb.cell_ids_.size(), P, plo, 0,
                                                 seed.child(seed_path::kDistanceCode).child(999));
        } else {
            emb.cell_code_.assign(1, BitVector(P));
        }
    }
    emb.out_bits_ = uint32_t(body_bits) + emb.prefix_bits_;
    return emb;
}

namespace {
void write_bits(Writer& w, const BitVector& v) {
    w.u32(v.dim());
    for (uint64_t word : v.words()) w.u64(word);
}
BitVector read_bits(Reader& rd) {
    BitVector v(rd.u32());
    for (size_t i = 0; i < v.word_count(); ++i) v.data()[i] = rd.u64();
    v.mask_tail();
    return v;
}
} // namespace

void L1Embedding::save(std::ostream& out) const {
    Writer w{out};
    w.u32(d_);
    w.f64(r_);
    w.f64(c_);
    w.f64(eps_);
    w.f64(eps_eff_);
    w.f64(eps_code_);
    w.f64(side_);
    w.u64(offsets_.size());
    for (double o : offsets_) w.f64(o);
    w.f64(scale_);
    w.u64(M_);
    w.u64(R_);
    w.u32(kappa_);
    w.u32(symbols_);
    w.u32(out_bits_);
    w.u64(symbol_code_.size());
    for (const auto& v : symbol_code_) write_bits(w, v);
    w.u8(prefix_mode_ ? 1 : 0);
    w.u32(prefix_bits_);
    w.u64(cell_ids_.size());
    for (const auto& [key, id] : cell_ids_) {
        w.u64(key.size());
        for (int64_t v : key) w.u64(uint64_t(v));
        w.u32(id);
    }
    w.u64(cell_code_.size());
    for (const auto& v : cell_code_) write_bits(w, v);
}

L1Embedding L1Embedding::load(std::istream& in) {
    Reader rd{in};
    L1Embedding e;
    e.d_ = rd.u32();
    e.r_ = rd.f64();
    e.c_ = rd.f64();
    e.eps_ = rd.f64();
    e.eps_eff_ = rd.f64();
    e.eps_code_ = rd.f64();
    e.side_ = rd.f64();
    size_t no = size_t(rd.u64());
    e.offsets_.resize(no);
    for (auto& o : e.offsets_) o = rd.f64();
    e.scale_ = rd.f64();
    e.M_ = rd.u64();
    e.R_ = rd.u64();
    e.kappa_ = rd.u32();
    e.symbols_ = rd.u32();
    e.out_bits_ = rd.u32();
    size_t ns = size_t(rd.u64());
    e.symbol_code_.reserve(ns);
    for (size_t i = 0; i < ns; ++i) e.symbol_code_.push_back(read_bits(rd));
    e.prefix_mode_ = rd.u8() != 0;
    e.prefix_bits_ = rd.u32();
    size_t nc = size_t(rd.u64());
    for (size_t i = 0; i < nc; ++i) {
        size_t klen = size_t(rd.u64());
        std::vector<int64_t> key(klen);
        for (auto& v : key) v = int64_t(rd.u64());
        uint32_t id = rd.u32();
        e.cell_ids_.emplace(std::move(key), id);
    }
    size_t ncc = size_t(rd.u64());
    e.cell_code_.reserve(ncc);
    for (size_t i = 0; i < ncc; ++i) e.cell_code_.push_back(read_bits(rd));
    return e;
}

} // namespace lvlsf
