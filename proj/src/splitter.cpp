#include "lvlsf/splitter.hpp"

#include <algorithm>
#include <cmath>

#include "lvlsf/errors.hpp"

namespace lvlsf {

namespace {

using Labels = std::vector<uint8_t>;

uint32_t smallest_prime_factor(uint32_t n) {
    for (uint32_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

std::vector<Labels> build_functions(uint32_t B, uint32_t l);

// Balanced partitions of [B] into p parts such that any S is split with one
// part receiving exactly floor(|S|/p) (window part) and the rest within the
// floor/ceil band. For p = 2 the B/2+1 cyclic windows suffice by an
// intermediate-value argument; for odd p we take width-B/p windows at all B
// offsets and split the complement into p-1 parts recursively.
std::vector<Labels> prime_partitions(uint32_t B, uint32_t p) {
    std::vector<Labels> out;
    const uint32_t w = B / p;
    if (p == 2) {
        for (uint32_t t = 0; t <= w; ++t) {
            Labels f(B, 1);
            for (uint32_t i = 0; i < w; ++i) f[(t + i) % B] = 0;
            out.push_back(std::move(f));
        }
        return out;
    }
    std::vector<Labels> rest = build_functions(B - w, p - 1);
    for (uint32_t t = 0; t < B; ++t) {
        std::vector<uint8_t> in_window(B, 0);
        for (uint32_t i = 0; i < w; ++i) in_window[(t + i) % B] = 1;
        for (const Labels& g : rest) {
            Labels f(B);
            uint32_t rank = 0;
            for (uint32_t i = 0; i < B; ++i)
                f[i] = in_window[i] ? 0 : uint8_t(1 + g[rank++]);
            out.push_back(std::move(f));
        }
    }
    return out;
}

std::vector<Labels> build_functions(uint32_t B, uint32_t l) {
    if (l == 1) return {Labels(B, 0)};
    const uint32_t p = smallest_prime_factor(l);
    const uint32_t q = l / p;
    std::vector<Labels> top = prime_partitions(B, p);
    if (q == 1) return top;

    std::vector<Labels> sub = build_functions(B / p, q);
    std::vector<Labels> out;
    out.reserve(top.size() * size_t(std::pow(double(sub.size()), double(p))));
    // Enumerate all assignments of a sub-function to each of the p parts.
    std::vector<size_t> pick(p, 0);
    for (const Labels& h : top) {
        // Rank of each coordinate inside its part, in index order.
        std::vector<uint32_t> rank(B);
        std::vector<uint32_t> seen(p, 0);
        for (uint32_t i = 0; i < B; ++i) rank[i] = seen[h[i]]++;

        std::fill(pick.begin(), pick.end(), 0);
        for (;;) {
            Labels f(B);
            for (uint32_t i = 0; i < B; ++i)
                f[i] = uint8_t(h[i] * q + sub[pick[h[i]]][rank[i]]);
            out.push_back(std::move(f));
            uint32_t j = 0;
            while (j < p && ++pick[j] == sub.size()) pick[j++] = 0;
            if (j == p) break;
        }
    }
    return out;
}

} // namespace

std::vector<uint32_t> SplitterFamily::part_indices(size_t fn, uint8_t j) const {
    std::vector<uint32_t> idx;
    idx.reserve(part_size());
    const auto& f = functions_[fn];
    for (uint32_t i = 0; i < B_; ++i)
        if (f[i] == j) idx.push_back(i);
    return idx;
}

bool SplitterFamily::splits_evenly(size_t fn, std::span<const uint32_t> S) const {
    const auto& f = functions_[fn];
    std::vector<uint32_t> count(l_, 0);
    for (uint32_t i : S) ++count[f[i]];
    uint32_t lo = uint32_t(S.size()) / l_;
    uint32_t hi = lo + (S.size() % l_ != 0);
    for (uint32_t c : count)
        if (c < lo || c > hi) return false;
    return true;
}

SplitterFamily build_splitter(uint32_t B, uint32_t l) {
    if (l < 1 || l > B)
        throw parameter_error("build_splitter: need 1 <= l <= B, got l=" + std::to_string(l) +
                              " B=" + std::to_string(B));
    if (B % l != 0)
        throw parameter_error("build_splitter: l=" + std::to_string(l) +
                              " does not divide B=" + std::to_string(B));
    if (l > 255)
        throw parameter_error("build_splitter: l > 255 unsupported");

    SplitterFamily fam;
    fam.B_ = B;
    fam.l_ = l;
    fam.functions_ = build_functions(B, l);
    std::sort(fam.functions_.begin(), fam.functions_.end());
    fam.functions_.erase(std::unique(fam.functions_.begin(), fam.functions_.end()),
                         fam.functions_.end());

    // Balance is structural; verify anyway, it is cheap relative to the build.
    const uint32_t want = B / l;
    std::vector<uint32_t> count(l);
    for (const auto& f : fam.functions_) {
        std::fill(count.begin(), count.end(), 0);
        for (uint8_t lab : f) ++count[lab];
        for (uint32_t c : count)
            if (c != want)
                throw construction_error("build_splitter: unbalanced member");
    }
    return fam;
}

size_t find_split(const SplitterFamily& fam, std::span<const uint32_t> S) {
    for (size_t i = 0; i < fam.size(); ++i)
        if (fam.splits_evenly(i, S)) return i;
    throw construction_error("find_split: no member splits S (family invariant violated)");
}

} // namespace lvlsf
