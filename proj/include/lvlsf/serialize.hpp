#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "lvlsf/errors.hpp"

namespace lvlsf {

// Little-endian fixed-width binary encoding. Index containers must
// round-trip byte-exactly, so every field goes through these helpers and no
// container is ever iterated in hash order during writes.

struct Writer {
    std::ostream& out;

    void bytes(const void* p, size_t n) { out.write(static_cast<const char*>(p), std::streamsize(n)); }
    void u8(uint8_t v) { bytes(&v, 1); }
    void u16(uint16_t v) { put_int(v); }
    void u32(uint32_t v) { put_int(v); }
    void u64(uint64_t v) { put_int(v); }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
    void str(const std::string& s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
    template <typename T>
    void vec_u(const std::vector<T>& v) {
        u64(v.size());
        for (const T& x : v) put_int(x);
    }

private:
    template <typename T>
    void put_int(T v) {
        uint8_t buf[sizeof(T)];
        for (size_t i = 0; i < sizeof(T); ++i) buf[i] = uint8_t(uint64_t(v) >> (8 * i));
        bytes(buf, sizeof(T));
    }
};

struct Reader {
    std::istream& in;

    void bytes(void* p, size_t n) {
        in.read(static_cast<char*>(p), std::streamsize(n));
        if (!in) throw parameter_error("deserialize: truncated input");
    }
    uint8_t u8() { uint8_t v; bytes(&v, 1); return v; }
    uint16_t u16() { return get_int<uint16_t>(); }
    uint32_t u32() { return get_int<uint32_t>(); }
    uint64_t u64() { return get_int<uint64_t>(); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        size_t n = size_t(u64());
        std::string s(n, '\0');
        bytes(s.data(), n);
        return s;
    }
    template <typename T>
    std::vector<T> vec_u() {
        size_t n = size_t(u64());
        std::vector<T> v(n);
        for (auto& x : v) x = get_int<T>();
        return v;
    }

private:
    template <typename T>
    T get_int() {
        uint8_t buf[sizeof(T)];
        bytes(buf, sizeof(T));
        uint64_t v = 0;
        for (size_t i = 0; i < sizeof(T); ++i) v |= uint64_t(buf[i]) << (8 * i);
        return T(v);
    }
};

// 128-bit bucket key. Hamming filters encode (splitter index, inner word
// indices) injectively; Turán filters hash block contents into it. A hash
// collision can only merge buckets, adding candidates that the distance
// check filters out, so it never costs correctness.
struct FilterKey {
    uint64_t hi = 0;
    uint64_t lo = 0;
    bool operator==(const FilterKey&) const = default;
    auto operator<=>(const FilterKey&) const = default;
};

struct FilterKeyHash {
    size_t operator()(const FilterKey& k) const {
        uint64_t x = k.hi * 0x9e3779b97f4a7c15ULL ^ k.lo;
        x ^= x >> 32;
        x *= 0xd6e8feb86659fd93ULL;
        x ^= x >> 32;
        return size_t(x);
    }
};

// Deterministic 128-bit mix of a u32 sequence (seed-free; stable across
// runs and platforms).
FilterKey mix128(const uint32_t* data, size_t n, uint64_t salt);

} // namespace lvlsf
