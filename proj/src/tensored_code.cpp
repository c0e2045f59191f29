#include "lvlsf/tensored_code.hpp"

#include <cmath>

#include "lvlsf/errors.hpp"

namespace lvlsf {

TensoredCode build_tensored_code(InnerCode inner, uint32_t B) {
    if (B == 0) throw parameter_error("tensored code: B = 0");
    TensoredCode code;
    code.B_ = B;
    uint32_t b = inner.b;
    code.B_pad_ = (B + b - 1) / b * b;
    code.l_ = code.B_pad_ / b;
    code.word_bits_ = inner.index_bits();
    if (uint64_t(code.word_bits_) * code.l_ > 64)
        throw parameter_error("tensored code: FilterId tuple exceeds 64 bits (l too large)");
    code.inner_ = std::move(inner);
    code.splitter_ = build_splitter(code.B_pad_, code.l_);
    code.part_coords_.resize(code.splitter_.size() * code.l_);
    for (size_t fn = 0; fn < code.splitter_.size(); ++fn)
        for (uint32_t j = 0; j < code.l_; ++j)
            code.part_coords_[fn * code.l_ + j] = code.splitter_.part_indices(fn, uint8_t(j));
    return code;
}

double TensoredCode::log_size() const {
    return std::log(double(splitter_.size())) + double(l_) * std::log(double(inner_.size()));
}

uint64_t TensoredCode::project_part(const BitVector& x, size_t fn, uint32_t j) const {
    const auto& coords = part_coords_[fn * l_ + j];
    uint64_t v = 0;
    for (size_t k = 0; k < coords.size(); ++k) {
        uint32_t c = coords[k];
        if (c < x.dim() && x.get(c)) v |= 1ULL << k;
    }
    return v;
}

void TensoredCode::decode(const BitVector& x, std::vector<FilterKey>& out,
                          size_t max_out) const {
    if (x.dim() != B_)
        throw dimension_error("tensored decode: vector dim " + std::to_string(x.dim()) +
                              " != B " + std::to_string(B_));
    std::vector<std::vector<uint64_t>> part_words(l_);
    std::vector<uint64_t> tuple(l_);
    for (size_t fn = 0; fn < splitter_.size(); ++fn) {
        bool nonempty = true;
        for (uint32_t j = 0; j < l_ && nonempty; ++j) {
            part_words[j].clear();
            inner_.decode_into(project_part(x, fn, j), part_words[j]);
            nonempty = !part_words[j].empty();
        }
        if (!nonempty) continue;
        // Emit the full product over parts.
        std::vector<size_t> pick(l_, 0);
        for (;;) {
            uint64_t lo = 0;
            for (uint32_t j = 0; j < l_; ++j) {
                tuple[j] = part_words[j][pick[j]];
                lo |= tuple[j] << (j * word_bits_);
            }
            out.push_back(FilterKey{uint64_t(fn), lo});
            if (out.size() > max_out)
                throw cost_guard_error("tensored decode: output exceeds cap");
            uint32_t j = 0;
            while (j < l_ && ++pick[j] == part_words[j].size()) pick[j++] = 0;
            if (j == l_) break;
        }
    }
}

bool TensoredCode::shares_filter(const BitVector& x, const BitVector& y) const {
    if (x.dim() != B_ || y.dim() != B_)
        throw dimension_error("shares_filter: dimension mismatch");
    // Ids factor per pi, so the intersection is nonempty iff for some pi
    // every part has a word covering both projections.
    for (size_t fn = 0; fn < splitter_.size(); ++fn) {
        bool ok = true;
        for (uint32_t j = 0; j < l_ && ok; ++j)
            ok = inner_.covers_pair(project_part(x, fn, j), project_part(y, fn, j));
        if (ok) return true;
    }
    return false;
}

std::vector<std::pair<FilterKey, BitVector>> TensoredCode::materialize(size_t limit) const {
    double ls = log_size();
    if (ls > std::log(double(limit)))
        throw cost_guard_error("tensored materialize: code too large");
    std::vector<std::pair<FilterKey, BitVector>> out;
    const uint64_t inner_size = inner_.size();
    for (size_t fn = 0; fn < splitter_.size(); ++fn) {
        std::vector<uint64_t> tuple(l_, 0);
        for (;;) {
            BitVector c(B_pad_);
            uint64_t lo = 0;
            for (uint32_t j = 0; j < l_; ++j) {
                uint64_t w = inner_.word_value(tuple[j]);
                const auto& coords = part_coords_[fn * l_ + j];
                for (size_t k = 0; k < coords.size(); ++k)
                    if ((w >> k) & 1) c.set(coords[k]);
                lo |= tuple[j] << (j * word_bits_);
            }
            out.emplace_back(FilterKey{uint64_t(fn), lo}, std::move(c));
            uint32_t j = 0;
            while (j < l_ && ++tuple[j] == inner_size) tuple[j++] = 0;
            if (j == l_) break;
        }
    }
    return out;
}

} // namespace lvlsf
