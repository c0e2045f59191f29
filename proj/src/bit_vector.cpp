#include "lvlsf/bit_vector.hpp"

namespace lvlsf {

uint32_t hamming_distance(const BitVector& x, const BitVector& y) {
    if (x.dim() != y.dim())
        throw dimension_error("hamming_distance: dim " + std::to_string(x.dim()) +
                              " vs " + std::to_string(y.dim()));
    uint32_t d = 0;
    const uint64_t* a = x.data();
    const uint64_t* b = y.data();
    for (size_t i = 0; i < x.word_count(); ++i)
        d += uint32_t(std::popcount(a[i] ^ b[i]));
    return d;
}

BitVector project(const BitVector& x, std::span<const uint32_t> indices) {
    BitVector out(uint32_t(indices.size()));
    for (size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= x.dim())
            throw dimension_error("project: index " + std::to_string(indices[k]) +
                                  " out of range for dim " + std::to_string(x.dim()));
        if (x.get(indices[k])) out.set(uint32_t(k));
    }
    return out;
}

std::string BitVector::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    uint32_t ndigits = (dim_ + 3) / 4;
    s.reserve(ndigits);
    for (uint32_t j = 0; j < ndigits; ++j) {
        uint32_t nibble = 0;
        for (uint32_t i = 0; i < 4; ++i) {
            uint32_t bit = 4 * j + i;
            if (bit < dim_ && get(bit)) nibble |= 1u << i;
        }
        s.push_back(digits[nibble]);
    }
    return s;
}

BitVector BitVector::from_hex(const std::string& hex, uint32_t dim) {
    uint32_t ndigits = (dim + 3) / 4;
    if (hex.size() != ndigits)
        throw dimension_error("from_hex: expected " + std::to_string(ndigits) +
                              " digits for dim " + std::to_string(dim) + ", got " +
                              std::to_string(hex.size()));
    BitVector v(dim);
    for (uint32_t j = 0; j < ndigits; ++j) {
        char c = hex[j];
        uint32_t nibble;
        if (c >= '0' && c <= '9') nibble = uint32_t(c - '0');
        else if (c >= 'a' && c <= 'f') nibble = uint32_t(c - 'a') + 10;
        else if (c >= 'A' && c <= 'F') nibble = uint32_t(c - 'A') + 10;
        else throw parameter_error("from_hex: invalid hex digit");
        for (uint32_t i = 0; i < 4; ++i) {
            uint32_t bit = 4 * j + i;
            if (nibble & (1u << i)) {
                if (bit >= dim)
                    throw dimension_error("from_hex: set bit beyond dim");
                v.set(bit);
            }
        }
    }
    return v;
}

} // namespace lvlsf
