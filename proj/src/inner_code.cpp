#include "lvlsf/inner_code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "lvlsf/errors.hpp"
#include "lvlsf/oracle.hpp"

namespace lvlsf {

namespace {

constexpr uint32_t kVerifyDimGuard = 16;
constexpr uint32_t kGreedyDimGuard = 10;
constexpr uint32_t kMaxRounds = 64;

uint64_t dim_mask(uint32_t b) { return b >= 64 ? ~0ULL : (1ULL << b) - 1; }

// Enumerates all masks of weight 1..t over b bits, invoking f(mask).
// Iterative combination walk; t is small everywhere this is used.
template <typename F>
void for_each_ball_offset(uint32_t b, uint32_t t, F&& f) {
    if (t == 0) return;
    std::vector<uint32_t> pos;
    for (uint32_t w = 1; w <= t && w <= b; ++w) {
        pos.assign(w, 0);
        for (uint32_t i = 0; i < w; ++i) pos[i] = i;
        for (;;) {
            uint64_t mask = 0;
            for (uint32_t p : pos) mask |= 1ULL << p;
            f(mask);
            // next combination
            int32_t i = int32_t(w) - 1;
            while (i >= 0 && pos[uint32_t(i)] == b - w + uint32_t(i)) --i;
            if (i < 0) break;
            ++pos[uint32_t(i)];
            for (uint32_t j = uint32_t(i) + 1; j < w; ++j) pos[j] = pos[j - 1] + 1;
        }
    }
}

} // namespace

double ball_volume(uint32_t b, uint32_t t) {
    double v = 0;
    for (uint32_t i = 0; i <= std::min(t, b); ++i) {
        double c = 1;
        for (uint32_t j = 0; j < i; ++j) c = c * double(b - j) / double(j + 1);
        v += c;
    }
    return v;
}

uint32_t InnerCode::index_bits() const {
    if (mode == InnerCodeMode::full_cube || mode == InnerCodeMode::parity) return b;
    uint64_t n = std::max<uint64_t>(words.size(), 1);
    uint32_t bits = 1;
    while ((1ULL << bits) < n) ++bits;
    return bits;
}

uint64_t InnerCode::word_value(uint64_t index) const {
    if (mode == InnerCodeMode::full_cube || mode == InnerCodeMode::parity) return index;
    return words[size_t(index)];
}

void InnerCode::decode_into(uint64_t x, std::vector<uint64_t>& out) const {
    x &= dim_mask(b);
    switch (mode) {
        case InnerCodeMode::full_cube:
            out.push_back(x);
            for_each_ball_offset(b, t_b, [&](uint64_t m) { out.push_back(x ^ m); });
            break;
        case InnerCodeMode::parity:
            if (std::popcount(x) % 2 == 0) out.push_back(x);
            for_each_ball_offset(b, t_b, [&](uint64_t m) {
                uint64_t y = x ^ m;
                if (std::popcount(y) % 2 == 0) out.push_back(y);
            });
            break;
        default:
            for (uint64_t i = 0; i < words.size(); ++i)
                if (uint32_t(std::popcount(words[size_t(i)] ^ x)) <= t_b) out.push_back(i);
            break;
    }
}

bool InnerCode::covers_pair(uint64_t x, uint64_t y) const {
    x &= dim_mask(b);
    y &= dim_mask(b);
    uint32_t e = uint32_t(std::popcount(x ^ y));
    switch (mode) {
        case InnerCodeMode::full_cube:
            return e <= 2 * t_b;
        case InnerCodeMode::parity: {
            if (e > 2 * t_b) return false;
            // Words within t_b of both live on the midpoint shell; with
            // t_b = 1 and e = 2 those are the two odd/even midpoints, which
            // are even exactly when x is odd.
            if (e < 2 * t_b) return true;
            if (t_b != 1) return true; // only t_b = 1 is constructed
            return std::popcount(x) % 2 == 1;
        }
        default:
            for (uint64_t w : words)
                if (uint32_t(std::popcount(w ^ x)) <= t_b &&
                    uint32_t(std::popcount(w ^ y)) <= t_b)
                    return true;
            return false;
    }
}

bool verify_inner_code_serial(const InnerCode& code, uint32_t b, uint32_t r_b, uint32_t t_b) {
    if (b > kVerifyDimGuard)
        throw cost_guard_error("verify_inner_code: b > 16");
    InnerCode probe = code;
    probe.t_b = t_b;
    const uint64_t n = 1ULL << b;
    for (uint64_t x = 0; x < n; ++x) {
        if (!probe.covers_pair(x, x)) return false;
        bool ok = true;
        for_each_ball_offset(b, r_b, [&](uint64_t m) {
            if (ok && !probe.covers_pair(x, x ^ m)) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

bool verify_inner_code(const InnerCode& code, uint32_t b, uint32_t r_b, uint32_t t_b) {
    if (b > kVerifyDimGuard)
        throw cost_guard_error("verify_inner_code: b > 16");
    InnerCode probe = code;
    probe.t_b = t_b;
    const int64_t n = int64_t(1) << b;
    bool all_ok = true;
#pragma omp parallel for schedule(dynamic, 64) reduction(&& : all_ok)
    for (int64_t x = 0; x < n; ++x) {
        bool ok = probe.covers_pair(uint64_t(x), uint64_t(x));
        if (ok) {
            for_each_ball_offset(b, r_b, [&](uint64_t m) {
                if (ok && !probe.covers_pair(uint64_t(x), uint64_t(x) ^ m)) ok = false;
            });
        }
        all_ok = all_ok && ok;
    }
    return all_ok;
}

namespace {

InnerCode build_greedy(uint32_t b, uint32_t r_b, uint32_t t_b) {
    if (b > kGreedyDimGuard)
        throw cost_guard_error("greedy inner code: b > 10");
    const uint64_t n = 1ULL << b;
    // Universe of unordered pairs (x, y) at distance <= r_b, x <= y.
    std::vector<std::pair<uint64_t, uint64_t>> pairs;
    for (uint64_t x = 0; x < n; ++x) {
        pairs.emplace_back(x, x);
        for_each_ball_offset(b, r_b, [&](uint64_t m) {
            if ((x ^ m) > x) pairs.emplace_back(x, x ^ m);
        });
    }
    std::vector<uint8_t> covered(pairs.size(), 0);
    size_t remaining = pairs.size();
    InnerCode code;
    code.mode = InnerCodeMode::greedy;
    code.b = b;
    code.r_b = r_b;
    code.t_b = t_b;
    code.s_prime = (double(b) - 2.0 * t_b) / std::sqrt(double(b));
    while (remaining > 0) {
        uint64_t best = 0;
        size_t best_gain = 0;
        for (uint64_t w = 0; w < n; ++w) {
            size_t gain = 0;
            for (size_t i = 0; i < pairs.size(); ++i) {
                if (covered[i]) continue;
                if (uint32_t(std::popcount(w ^ pairs[i].first)) <= t_b &&
                    uint32_t(std::popcount(w ^ pairs[i].second)) <= t_b)
                    ++gain;
            }
            if (gain > best_gain) { best_gain = gain; best = w; }
        }
        if (best_gain == 0)
            throw construction_error("greedy inner code: uncoverable pair (t_b too small)");
        code.words.push_back(best);
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (covered[i]) continue;
            if (uint32_t(std::popcount(best ^ pairs[i].first)) <= t_b &&
                uint32_t(std::popcount(best ^ pairs[i].second)) <= t_b) {
                covered[i] = 1;
                --remaining;
            }
        }
    }
    std::sort(code.words.begin(), code.words.end());
    code.sample_budget = code.words.size();
    code.rounds_used = 1;
    return code;
}

} // namespace

InnerCode build_inner_code_radius(uint32_t b, uint32_t r_b, uint32_t t_b, const Seed& seed,
                                  InnerCodeMode mode) {
    if (b == 0 || b > 63)
        throw parameter_error("inner code: b must be in [1, 63]");
    if (r_b > b)
        throw parameter_error("inner code: r_b > b");
    if (t_b < (r_b + 1) / 2)
        throw parameter_error("inner code: t_b < ceil(r_b/2), no word can cover a worst-case pair");

    InnerCode code;
    code.b = b;
    code.r_b = r_b;
    code.t_b = t_b;
    code.s_prime = (double(b) - 2.0 * t_b) / std::sqrt(double(b));

    switch (mode) {
        case InnerCodeMode::full_cube:
            code.mode = mode;
            return code;
        case InnerCodeMode::parity:
            if (r_b > 1 || t_b != 1)
                throw parameter_error("parity inner code: needs r_b <= 1, t_b = 1");
            code.mode = mode;
            return code;
        case InnerCodeMode::greedy:
            return build_greedy(b, r_b, t_b);
        case InnerCodeMode::sampled:
            break;
    }

    code.mode = InnerCodeMode::sampled;
    double p = oracle::ball_intersection_lower(b, r_b, std::max(code.s_prime, 0.0));
    p = std::clamp(p, 1e-12, 1.0);
    double budget = std::ceil(double(b) * std::log(2.0) / p);
    code.sample_budget = uint64_t(std::min(budget, 1e9));

    const uint64_t mask = dim_mask(b);
    if (code.sample_budget >= (1ULL << b)) {
        // The budget admits the whole cube, which verifies by the midpoint
        // argument; skip sampling.
        code.words.resize(size_t(1) << b);
        for (uint64_t w = 0; w < code.words.size(); ++w) code.words[size_t(w)] = w;
        code.rounds_used = 1;
        return code;
    }
    if (b > kVerifyDimGuard)
        throw cost_guard_error("sampled inner code: b > 16 cannot be verified");

    for (uint32_t round = 0; round < kMaxRounds; ++round) {
        Rng rng(seed.child(round));
        std::vector<uint64_t> words(size_t(code.sample_budget));
        for (auto& w : words) w = rng.next_u64() & mask;
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
        code.words = std::move(words);
        if (verify_inner_code(code, b, r_b, t_b)) {
            code.rounds_used = round + 1;
            return code;
        }
    }
    throw construction_error("sampled inner code: retry cap exceeded (b=" + std::to_string(b) +
                             " r_b=" + std::to_string(r_b) + " t_b=" + std::to_string(t_b) +
                             "), parameters likely infeasible");
}

InnerCode build_inner_code(uint32_t b, uint32_t r_b, double s_prime, const Seed& seed) {
    double t_real = double(b) / 2.0 - s_prime * std::sqrt(double(b)) / 2.0;
    double t_ceil = std::ceil(t_real - 1e-12);
    if (t_ceil < 0)
        throw parameter_error("inner code: s' yields negative radius");
    return build_inner_code_radius(b, r_b, uint32_t(t_ceil), seed, InnerCodeMode::sampled);
}

} // namespace lvlsf
