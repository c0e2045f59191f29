#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lvlsf/errors.hpp"

namespace lvlsf {

/// Fixed-length binary point. Coordinate 0 is the least significant bit of
/// the first 64-bit word; the hex serialization puts coordinate 0 in the low
/// bit of the first hex digit, so round-trips are unambiguous.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(uint32_t dim) : dim_(dim), words_((dim + 63) / 64, 0) {}

    uint32_t dim() const { return dim_; }
    size_t word_count() const { return words_.size(); }

    bool get(uint32_t i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(uint32_t i, bool v = true) {
        check_index(i);
        uint64_t m = 1ULL << (i & 63);
        if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
    }
    void flip(uint32_t i) {
        check_index(i);
        words_[i >> 6] ^= 1ULL << (i & 63);
    }

    uint32_t weight() const {
        uint32_t w = 0;
        for (uint64_t x : words_) w += uint32_t(std::popcount(x));
        return w;
    }

    const uint64_t* data() const { return words_.data(); }
    uint64_t* data() { return words_.data(); }
    std::span<const uint64_t> words() const { return words_; }

    // Clears any bits beyond dim in the last word. Needed after raw word
    // writes so equality and weight stay exact.
    void mask_tail() {
        if (dim_ % 64 != 0 && !words_.empty())
            words_.back() &= (1ULL << (dim_ % 64)) - 1;
    }

    bool operator==(const BitVector& o) const {
        return dim_ == o.dim_ && words_ == o.words_;
    }
    bool operator<(const BitVector& o) const {
        if (dim_ != o.dim_) return dim_ < o.dim_;
        for (size_t i = words_.size(); i-- > 0;)
            if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
        return false;
    }

    std::string to_hex() const;
    static BitVector from_hex(const std::string& hex, uint32_t dim);

    // Low b bits as an integer; used for enumerating tiny cubes.
    static BitVector from_bits(uint64_t bits, uint32_t dim) {
        BitVector v(dim);
        if (dim > 0) {
            v.words_[0] = dim >= 64 ? bits : (bits & ((dim == 64) ? ~0ULL : ((1ULL << dim) - 1)));
        }
        return v;
    }
    uint64_t low_bits() const { return words_.empty() ? 0 : words_[0]; }

private:
    void check_index(uint32_t i) const {
        if (i >= dim_) throw dimension_error("BitVector: coordinate " + std::to_string(i) +
                                             " out of range for dim " + std::to_string(dim_));
    }
    uint32_t dim_ = 0;
    std::vector<uint64_t> words_;
};

/// Hamming distance |{i : x_i != y_i}|. Throws dimension_error on length
/// mismatch.
uint32_t hamming_distance(const BitVector& x, const BitVector& y);

/// Projection of x onto the index set S (coordinates in increasing index
/// order). All indices must be < x.dim().
BitVector project(const BitVector& x, std::span<const uint32_t> indices);

} // namespace lvlsf
