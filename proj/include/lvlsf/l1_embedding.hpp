#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lvlsf/bit_vector.hpp"
#include "lvlsf/rng.hpp"

namespace lvlsf {

/// Deterministic-guarantee l1 -> Hamming embedding. Pipeline per point:
/// grid-localize (cell corner subtracted), scale by d/(2*eps_eff*r) and
/// round, map each coordinate through the staircase map
///   h(v) = < floor(v/R), floor((v+1)/R), ..., floor((v+R-1)/R) >
/// whose symbol strings satisfy dist(h(v1),h(v2)) = min(|v1-v2|, R) exactly,
/// then replace symbols by verified distance-code words of kappa bits.
/// The internal (eps_eff, eps_code) split composes so that the guarantees
/// against build points are:
///   near:  ||x-y||_1 <= r   =>  embedded <= (1+eps) * S * r
///   far:   ||x-y||_1 >= cr  =>  embedded >= (1-eps) * c * S * r  (same cell)
/// where S = bits_per_unit(). In independent-cell mode (default), pairs in
/// different cells are > r apart by grid clearance and are handled by
/// per-cell dispatch; prefix mode instead prepends per-cell code words that
/// push different-cell pairs past the far threshold.
class L1Embedding {
public:
    struct Embedded {
        std::vector<int64_t> cell; // grid cell key (empty in prefix mode)
        BitVector bits;
    };

    uint32_t dim() const { return d_; }
    uint64_t saturation() const { return R_; }
    uint32_t code_bits() const { return kappa_; }
    uint64_t max_coord() const { return M_; }
    uint32_t output_bits() const { return out_bits_; }
    double scale() const { return scale_; }
    /// Embedded bits per unit l1 distance (the scale factor S above, = S*r/r).
    double bits_per_unit() const { return double(kappa_) / 2.0 * scale_; }
    bool prefix_mode() const { return prefix_mode_; }
    size_t cell_count() const { return cell_ids_.size(); }

    Embedded embed_point(const std::vector<double>& x) const;

    /// The symbol string of a scaled coordinate (exposed for the exactness
    /// tests of the staircase map).
    static std::vector<uint64_t> staircase(uint64_t v, uint64_t R);

    void save(std::ostream& out) const;
    static L1Embedding load(std::istream& in);

    friend L1Embedding build_l1_embedding(const std::vector<std::vector<double>>& points,
                                          uint32_t d, double r, double c, double eps,
                                          const Seed& seed, bool prefix_mode);

private:
    std::vector<int64_t> cell_of(const std::vector<double>& x) const;

    uint32_t d_ = 0;
    double r_ = 0, c_ = 0, eps_ = 0;
    double eps_eff_ = 0, eps_code_ = 0;
    double side_ = 0;              // grid side length 2rn
    std::vector<double> offsets_;  // per-dimension grid offsets
    double scale_ = 0;             // d / (2 eps_eff r)
    uint64_t M_ = 0;               // max rounded build coordinate
    uint64_t R_ = 0;               // dc/(2 eps_eff), saturation in grid units
    uint32_t kappa_ = 0;           // distance-code word length
    uint32_t symbols_ = 0;         // distance-code alphabet size
    uint32_t out_bits_ = 0;        // d * R * kappa (+ prefix)
    std::vector<BitVector> symbol_code_;
    bool prefix_mode_ = false;
    uint32_t prefix_bits_ = 0;
    std::map<std::vector<int64_t>, uint32_t> cell_ids_;
    std::vector<BitVector> cell_code_;
};

L1Embedding build_l1_embedding(const std::vector<std::vector<double>>& points,
                               uint32_t d, double r, double c, double eps,
                               const Seed& seed, bool prefix_mode = false);

} // namespace lvlsf
