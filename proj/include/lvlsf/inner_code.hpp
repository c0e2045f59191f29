#pragma once

#include <cstdint>
#include <vector>

#include "lvlsf/rng.hpp"

namespace lvlsf {

/// How the inner word set A is obtained.
enum class InnerCodeMode : uint8_t {
    sampled = 0,   // random words, exhaustively verified (expected O(1) rounds)
    greedy = 1,    // deterministic greedy set cover over the pair universe
    full_cube = 2, // A = {0,1}^b, valid whenever t_b >= ceil(r_b/2)
    parity = 3,    // A = even-weight class, valid for r_b <= 1, t_b = 1
};

/// Inner covering code on {0,1}^b: for every pair x,y with dist(x,y) <= r_b
/// there is a word within distance t_b of both. Structured modes keep A
/// implicit; sampled/greedy materialize the word list.
struct InnerCode {
    InnerCodeMode mode = InnerCodeMode::full_cube;
    uint32_t b = 0;
    uint32_t r_b = 0;
    uint32_t t_b = 0;
    double s_prime = 0;        // t_b = b/2 - s'*sqrt(b)/2 (ceil applied)
    std::vector<uint64_t> words; // sampled/greedy only, sorted unique
    uint64_t sample_budget = 0;  // ceil(p^-1 b ln 2); invariant |words| <= budget
    uint32_t rounds_used = 0;

    uint64_t size() const {
        switch (mode) {
            case InnerCodeMode::full_cube: return 1ULL << b;
            case InnerCodeMode::parity: return 1ULL << (b - 1);
            default: return words.size();
        }
    }
    /// Bits needed to address a word in a FilterId.
    uint32_t index_bits() const;
    /// Word value by index (structured modes: index == word value).
    uint64_t word_value(uint64_t index) const;

    /// Indices of all words within distance t_b of x (x given as low b bits).
    /// Structured modes enumerate the ball; materialized modes scan A.
    void decode_into(uint64_t x, std::vector<uint64_t>& out) const;

    /// True if some word lies within t_b of both x and y.
    bool covers_pair(uint64_t x, uint64_t y) const;
};

/// Sampled construction per radius: budget ceil(p^-1 b ln2) words per round
/// with p the analytic pair-capture lower bound, up to 64 derived-seed
/// rounds, each verified exhaustively. Falls back to the full cube when the
/// budget reaches 2^b. Requires t_b >= ceil(r_b/2) (feasibility) and b <= 16
/// for verification.
InnerCode build_inner_code_radius(uint32_t b, uint32_t r_b, uint32_t t_b, const Seed& seed,
                                  InnerCodeMode mode = InnerCodeMode::sampled);

/// Spec-surface wrapper: decoding radius from s', t_b = ceil(b/2 - s'*sqrt(b)/2).
InnerCode build_inner_code(uint32_t b, uint32_t r_b, double s_prime, const Seed& seed);

/// Exhaustive covering check over every pair at distance <= r_b
/// (enumerating balls around each x rather than all 4^b pairs).
/// Cost guard: b <= 16.
bool verify_inner_code(const InnerCode& code, uint32_t b, uint32_t r_b, uint32_t t_b);
bool verify_inner_code_serial(const InnerCode& code, uint32_t b, uint32_t r_b, uint32_t t_b);

/// Ball volume sum_{i<=t} C(b,i) as double (guarded).
double ball_volume(uint32_t b, uint32_t t);

} // namespace lvlsf
