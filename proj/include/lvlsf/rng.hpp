#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace lvlsf {

// All randomness in the library flows through this header. A build owns one
// root Seed; every stochastic sub-procedure derives its stream from
// (root value, fixed path), so retries and parallel builds reproduce
// byte-identical structures. We deliberately avoid <random> distributions:
// their output is implementation-defined, which would break cross-platform
// determinism of serialized indexes.

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Seed {
    uint64_t value = 0;
    std::vector<uint64_t> path;

    Seed() = default;
    explicit Seed(uint64_t v) : value(v) {}
    Seed(uint64_t v, std::initializer_list<uint64_t> p) : value(v), path(p) {}

    // Sub-seed for a named child stream. Appending to the path never
    // collides with sibling streams.
    Seed child(uint64_t step) const {
        Seed s = *this;
        s.path.push_back(step);
        return s;
    }

    // Mix value and path into a single 64-bit stream key.
    uint64_t mixed() const {
        uint64_t h = 0x6a09e667f3bcc909ULL ^ value;
        splitmix64(h);
        for (uint64_t p : path) {
            h ^= p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            splitmix64(h);
        }
        return h;
    }
};

// Small deterministic generator (xoshiro256** seeded via splitmix64).
class Rng {
public:
    explicit Rng(const Seed& seed) {
        uint64_t sm = seed.mixed();
        for (auto& w : s_) w = splitmix64(sm);
    }
    explicit Rng(uint64_t raw) {
        uint64_t sm = raw;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, n) by rejection; exact and platform-independent.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    bool coin() { return next_u64() >> 63; }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = size_t(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Fixed path constants for the top-level build streams.
namespace seed_path {
constexpr uint64_t kReduction = 1;
constexpr uint64_t kInnerCode = 2;
constexpr uint64_t kTuran = 3;
constexpr uint64_t kPermutation = 4;
constexpr uint64_t kDistanceCode = 5;
constexpr uint64_t kGen = 6;
} // namespace seed_path

} // namespace lvlsf
