#include "qramsim/classical_data.hpp"

#include <stdexcept>

#include "qramsim/rng.hpp"

namespace qramsim {

ClassicalData gen_dataset(int n, uint64_t seed) {
    if (n < 0 || n > 30) throw std::invalid_argument("gen_dataset: n out of range");
    ClassicalData data;
    data.seed = seed;
    data.bits.resize(static_cast<size_t>(1) << n);
    SplitMix64 sm(seed);
    for (auto& b : data.bits) b = static_cast<uint8_t>(sm.next() >> 63);
    return data;
}

ClassicalData data_from_bits(std::vector<uint8_t> bits) {
    if (bits.empty() || (bits.size() & (bits.size() - 1)) != 0)
        throw std::invalid_argument("classical data length must be a power of two");
    ClassicalData data;
    data.bits = std::move(bits);
    return data;
}

}  // namespace qramsim
