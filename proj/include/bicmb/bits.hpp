#pragma once

// Bit-sequence helpers shared across the coding and simulation modules.
// Bits are stored one per byte (0 or 1) so sequences stay cheap to slice
// and compare.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bicmb {

using Bits = std::vector<std::uint8_t>;

inline long long weight(const Bits& b) {
    long long w = 0;
    for (auto x : b) w += (x != 0);
    return w;
}

inline Bits xor_bits(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
    return r;
}

inline std::string to_bitstring(const Bits& b) {
    std::string s;
    s.reserve(b.size());
    for (auto x : b) s.push_back(x ? '1' : '0');
    return s;
}

inline Bits from_bitstring(const std::string& s) {
    Bits b;
    b.reserve(s.size());
    for (char c : s) {
        if (c == '0')
            b.push_back(0);
        else if (c == '1')
            b.push_back(1);
        else
            throw std::invalid_argument("from_bitstring: bad character '" + std::string(1, c) + "'");
    }
    return b;
}

}  // namespace bicmb
