#pragma once

#include <complex>
#include <vector>

#include "qramsim/circuit.hpp"
#include "qramsim/layout.hpp"
#include "qramsim/sparse_state.hpp"

namespace qramsim::testing {

inline BasisLabel label_of(const WireLayout& lay, std::initializer_list<uint8_t> values) {
    BasisLabel l(lay.wire_count());
    uint32_t w = 0;
    for (uint8_t v : values) l.set(w++, v);
    return l;
}

inline std::vector<std::pair<uint64_t, Complex>> single_address(uint64_t i) {
    return {{i, Complex(1.0, 0.0)}};
}

// Noiseless run from the circuit's standard initial state.
inline SparseState run_noiseless(const Circuit& c,
                                 const std::vector<std::pair<uint64_t, Complex>>& amps) {
    SparseState state = initial_state(c, amps);
    run_circuit(c, state);
    return state;
}

}  // namespace qramsim::testing
