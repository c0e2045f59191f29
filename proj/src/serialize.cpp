#include "lvlsf/serialize.hpp"

namespace lvlsf {

FilterKey mix128(const uint32_t* data, size_t n, uint64_t salt) {
    // Two independently-keyed 64-bit mix lanes.
    uint64_t a = 0x9368e53c2f6af274ULL ^ salt;
    uint64_t b = 0xcb24d0a5c88c35b3ULL + (salt << 1 | 1);
    for (size_t i = 0; i < n; ++i) {
        uint64_t x = data[i] + 0x9e3779b97f4a7c15ULL;
        a = (a ^ x) * 0xff51afd7ed558ccdULL;
        a ^= a >> 33;
        b = (b + x) * 0xc4ceb9fe1a85ec53ULL;
        b ^= b >> 29;
    }
    a ^= uint64_t(n) * 0x2545f4914f6cdd1dULL;
    a ^= a >> 32;
    a *= 0xff51afd7ed558ccdULL;
    a ^= a >> 33;
    b ^= b >> 32;
    b *= 0xc4ceb9fe1a85ec53ULL;
    b ^= b >> 33;
    return FilterKey{a, b};
}

} // namespace lvlsf
