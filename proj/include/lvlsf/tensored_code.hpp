#pragma once

#include <cstdint>
#include <vector>

#include "lvlsf/bit_vector.hpp"
#include "lvlsf/inner_code.hpp"
#include "lvlsf/serialize.hpp"
#include "lvlsf/splitter.hpp"

namespace lvlsf {

/// Splitter-tensored code on {0,1}^B built from an inner code on {0,1}^b.
/// A codeword is (pi, j_1..j_l): the vector whose restriction to part k of
/// splitter member pi equals inner word j_k. The code is implicit
/// (|C| = |Pi| * |A|^l, never materialized); decode(x) returns, per pi, the
/// full product of per-part inner decodings. FilterIds pack (pi, tuple)
/// injectively into 128 bits.
class TensoredCode {
public:
    TensoredCode() = default;

    uint32_t outer_dim() const { return B_; }
    uint32_t padded_dim() const { return B_pad_; }
    uint32_t parts() const { return l_; }
    const InnerCode& inner() const { return inner_; }
    const SplitterFamily& splitter() const { return splitter_; }

    double log_size() const; // ln |C| = ln|Pi| + l * ln|A|

    /// All FilterIds of x (length-B vector). Guarantee: any y with
    /// dist(x,y) <= r (the pair budget the inner code was built for, scaled
    /// by the splitter) shares at least one id with x.
    void decode(const BitVector& x, std::vector<FilterKey>& out,
                size_t max_out = size_t(1) << 24) const;

    /// Existence version of decode(x) ∩ decode(y) != ∅ without
    /// materializing either side.
    bool shares_filter(const BitVector& x, const BitVector& y) const;

    /// Every codeword as (id, vector) for tiny parameter sets.
    std::vector<std::pair<FilterKey, BitVector>> materialize(size_t limit = 1u << 20) const;

    friend TensoredCode build_tensored_code(InnerCode inner, uint32_t B);

private:
    uint64_t project_part(const BitVector& x, size_t fn, uint32_t j) const;

    InnerCode inner_;
    SplitterFamily splitter_;
    uint32_t B_ = 0;
    uint32_t B_pad_ = 0;
    uint32_t l_ = 0;
    uint32_t word_bits_ = 0;
    // part_coords_[fn * l + j] lists the coordinates of part j under fn.
    std::vector<std::vector<uint32_t>> part_coords_;
};

/// Tensors `inner` up to dimension B. B is padded to the next multiple of
/// inner.b with dummy zero coordinates (recorded; decode pads inputs).
TensoredCode build_tensored_code(InnerCode inner, uint32_t B);

} // namespace lvlsf
