#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "lvlsf/bit_vector.hpp"
#include "lvlsf/set_point.hpp"

namespace lvlsf {

// Text point-file formats:
//   hamming d=<d> n=<n>   followed by n lines of hex
//   sets d=<d> n=<n>      followed by n lines of space-separated sorted ints
//   l1 d=<d> n=<n>        followed by n lines of d decimal reals
// Turán system dumps:
//   turan n=<n> k=<k> r=<r>  followed by one block per line as sorted ints
// Planted-truth sidecar (CSV): header `query,planted_id,value` then rows.

struct HammingDataset {
    uint32_t dim = 0;
    std::vector<BitVector> points;
};

struct SetDataset {
    uint32_t universe = 0;
    std::vector<SetPoint> points;
};

struct L1Dataset {
    uint32_t dim = 0;
    std::vector<std::vector<double>> points;
};

struct TruthEntry {
    uint32_t query = 0;
    uint32_t planted_id = 0;
    double value = 0; // planted distance (hamming/l1) or similarity (sets)
};

void write_hamming(std::ostream& out, const HammingDataset& ds);
HammingDataset read_hamming(std::istream& in);

void write_sets(std::ostream& out, const SetDataset& ds);
SetDataset read_sets(std::istream& in);

void write_l1(std::ostream& out, const L1Dataset& ds);
L1Dataset read_l1(std::istream& in);

void write_truth(std::ostream& out, const std::vector<TruthEntry>& truth);
std::vector<TruthEntry> read_truth(std::istream& in);

// Generic "which format is this file" probe on the header token.
std::string peek_format(std::istream& in);

} // namespace lvlsf
