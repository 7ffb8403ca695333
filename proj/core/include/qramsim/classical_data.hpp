#pragma once

#include <cstdint>
#include <vector>

namespace qramsim {

// Classical memory contents x_0 .. x_{N-1}, each a single bit. The seed is
// kept so result rows can name the dataset they were produced from.
struct ClassicalData {
    std::vector<uint8_t> bits;
    uint64_t seed = 0;

    size_t size() const { return bits.size(); }
    int bit(size_t i) const { return bits[i]; }
};

// 2^n independent fair bits drawn from SplitMix64(seed) (top bit of each
// output word). Same (n, seed) always yields the same data.
ClassicalData gen_dataset(int n, uint64_t seed);

ClassicalData data_from_bits(std::vector<uint8_t> bits);

}  // namespace qramsim
