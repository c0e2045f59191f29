#include "lvlsf/io.hpp"

#include <charconv>
#include <sstream>

#include "lvlsf/errors.hpp"

namespace lvlsf {

namespace {

// Parses "key=<uint>" pairs from a header line after the format token.
uint64_t header_field(std::istringstream& line, const std::string& key) {
    std::string tok;
    if (!(line >> tok) || tok.rfind(key + "=", 0) != 0)
        throw parameter_error("point file: expected header field " + key + "=");
    uint64_t v = 0;
    const char* b = tok.data() + key.size() + 1;
    auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw parameter_error("point file: bad value for " + key);
    return v;
}

std::istringstream read_header(std::istream& in, const std::string& expect) {
    std::string line;
    if (!std::getline(in, line))
        throw parameter_error("point file: missing header");
    std::istringstream ss(line);
    std::string fmt;
    ss >> fmt;
    if (fmt != expect)
        throw parameter_error("point file: expected format '" + expect + "', got '" + fmt + "'");
    return ss;
}

} // namespace

void write_hamming(std::ostream& out, const HammingDataset& ds) {
    out << "hamming d=" << ds.dim << " n=" << ds.points.size() << "\n";
    for (const auto& p : ds.points) out << p.to_hex() << "\n";
}

HammingDataset read_hamming(std::istream& in) {
    auto ss = read_header(in, "hamming");
    HammingDataset ds;
    ds.dim = uint32_t(header_field(ss, "d"));
    uint64_t n = header_field(ss, "n");
    ds.points.reserve(n);
    std::string line;
    for (uint64_t i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw parameter_error("point file: truncated after " + std::to_string(i) + " points");
        ds.points.push_back(BitVector::from_hex(line, ds.dim));
    }
    return ds;
}

void write_sets(std::ostream& out, const SetDataset& ds) {
    out << "sets d=" << ds.universe << " n=" << ds.points.size() << "\n";
    for (const auto& p : ds.points) {
        const auto& es = p.elements();
        for (size_t i = 0; i < es.size(); ++i)
            out << (i ? " " : "") << es[i];
        out << "\n";
    }
}

SetDataset read_sets(std::istream& in) {
    auto ss = read_header(in, "sets");
    SetDataset ds;
    ds.universe = uint32_t(header_field(ss, "d"));
    uint64_t n = header_field(ss, "n");
    ds.points.reserve(n);
    std::string line;
    for (uint64_t i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw parameter_error("point file: truncated after " + std::to_string(i) + " points");
        std::istringstream ls(line);
        std::vector<uint32_t> es;
        uint32_t e;
        while (ls >> e) es.push_back(e);
        ds.points.emplace_back(std::move(es), ds.universe);
    }
    return ds;
}

void write_l1(std::ostream& out, const L1Dataset& ds) {
    out.precision(17);
    out << "l1 d=" << ds.dim << " n=" << ds.points.size() << "\n";
    for (const auto& p : ds.points) {
        for (size_t i = 0; i < p.size(); ++i)
            out << (i ? " " : "") << p[i];
        out << "\n";
    }
}

L1Dataset read_l1(std::istream& in) {
    auto ss = read_header(in, "l1");
    L1Dataset ds;
    ds.dim = uint32_t(header_field(ss, "d"));
    uint64_t n = header_field(ss, "n");
    ds.points.reserve(n);
    std::string line;
    for (uint64_t i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw parameter_error("point file: truncated after " + std::to_string(i) + " points");
        std::istringstream ls(line);
        std::vector<double> coords;
        double v;
        while (ls >> v) coords.push_back(v);
        if (coords.size() != ds.dim)
            throw dimension_error("l1 point " + std::to_string(i) + ": expected " +
                                  std::to_string(ds.dim) + " coords, got " +
                                  std::to_string(coords.size()));
        ds.points.push_back(std::move(coords));
    }
    return ds;
}

void write_truth(std::ostream& out, const std::vector<TruthEntry>& truth) {
    out.precision(17);
    out << "query,planted_id,value\n";
    for (const auto& t : truth)
        out << t.query << "," << t.planted_id << "," << t.value << "\n";
}

std::vector<TruthEntry> read_truth(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "query,planted_id,value")
        throw parameter_error("truth file: bad header");
    std::vector<TruthEntry> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TruthEntry t;
        std::istringstream ls(line);
        char c1, c2;
        if (!(ls >> t.query >> c1 >> t.planted_id >> c2 >> t.value) || c1 != ',' || c2 != ',')
            throw parameter_error("truth file: bad row '" + line + "'");
        out.push_back(t);
    }
    return out;
}

std::string peek_format(std::istream& in) {
    auto pos = in.tellg();
    std::string fmt;
    in >> fmt;
    in.seekg(pos);
    return fmt;
}

} // namespace lvlsf
