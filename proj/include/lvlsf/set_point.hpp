#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "lvlsf/errors.hpp"

namespace lvlsf {

/// Exact nonnegative rational, used where the contract promises exact
/// similarity values.
struct Rational {
    uint64_t num = 0;
    uint64_t den = 1;

    Rational() = default;
    Rational(uint64_t n, uint64_t d) : num(n), den(d) {
        uint64_t g = std::gcd(num == 0 ? den : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    double value() const { return double(num) / double(den); }
    bool operator==(const Rational&) const = default;
};

/// Sorted integer subset of a universe [0, d). Braun-Blanquet element and
/// Turán block.
class SetPoint {
public:
    SetPoint() = default;
    SetPoint(std::vector<uint32_t> elements, uint32_t universe);

    uint32_t universe() const { return universe_; }
    uint32_t weight() const { return uint32_t(elements_.size()); }
    const std::vector<uint32_t>& elements() const { return elements_; }
    bool contains(uint32_t e) const;

    bool operator==(const SetPoint&) const = default;

private:
    std::vector<uint32_t> elements_;
    uint32_t universe_ = 0;
};

/// |x ∩ y| for sorted element lists.
uint32_t intersection_size(std::span<const uint32_t> x, std::span<const uint32_t> y);
uint32_t intersection_size(const SetPoint& x, const SetPoint& y);

/// Braun-Blanquet similarity |x∩y| / max(|x|,|y|), exact. Requires the same
/// universe; throws if both sets are empty (similarity undefined).
Rational braun_blanquet(const SetPoint& x, const SetPoint& y);

} // namespace lvlsf
