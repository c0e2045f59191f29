#include "lvlsf/set_point.hpp"

#include <algorithm>

namespace lvlsf {

SetPoint::SetPoint(std::vector<uint32_t> elements, uint32_t universe)
    : elements_(std::move(elements)), universe_(universe) {
    std::sort(elements_.begin(), elements_.end());
    for (size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i] >= universe_)
            throw dimension_error("SetPoint: element " + std::to_string(elements_[i]) +
                                  " outside universe " + std::to_string(universe_));
        if (i > 0 && elements_[i] == elements_[i - 1])
            throw parameter_error("SetPoint: duplicate element " + std::to_string(elements_[i]));
    }
}

bool SetPoint::contains(uint32_t e) const {
    return std::binary_search(elements_.begin(), elements_.end(), e);
}

uint32_t intersection_size(std::span<const uint32_t> x, std::span<const uint32_t> y) {
    uint32_t count = 0;
    size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] < y[j]) ++i;
        else if (x[i] > y[j]) ++j;
        else { ++count; ++i; ++j; }
    }
    return count;
}

uint32_t intersection_size(const SetPoint& x, const SetPoint& y) {
    return intersection_size(x.elements(), y.elements());
}

Rational braun_blanquet(const SetPoint& x, const SetPoint& y) {
    if (x.universe() != y.universe())
        throw dimension_error("braun_blanquet: universes differ");
    uint32_t mx = std::max(x.weight(), y.weight());
    if (mx == 0)
        throw parameter_error("braun_blanquet: similarity of two empty sets is undefined");
    return Rational(intersection_size(x, y), mx);
}

} // namespace lvlsf
