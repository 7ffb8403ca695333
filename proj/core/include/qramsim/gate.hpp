#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qramsim/layout.hpp"

namespace qramsim {

// Every gate kind is a basis permutation with a per-label sign: each label
// maps to exactly one label, and the only nontrivial phases are the -1 of the
// Z-type gates. All kinds are involutions, so uncompute blocks reuse the same
// gate objects in reverse order.
enum class GateKind : uint8_t {
    X,                // qubit flip |0><1| + |1><0|
    Z,                // -1 on the encoded |1> level (works for dim 2 and 3)
    Swap,             // exchange two same-dimension wires
    CSwap,            // swap targets iff control wire holds control_value
    CNot,             // flip target iff control holds control_value; the flip
                      // is X on qubit targets and XTilde on qutrit targets
    XTilde,           // |0><1| + |1><0| + |W><W| on a qutrit wire
    ClassicalZ,       // Z iff classical data bit is 1
    ClassicalXTilde,  // XTilde iff classical data bit is 1
    Mcx,              // flip target iff every control matches its pattern value
};

struct Gate {
    GateKind kind;
    // Wire meaning by kind:
    //   X/Z/XTilde/ClassicalZ/ClassicalXTilde: wires[0] = target
    //   Swap: wires[0], wires[1]
    //   CSwap: wires[0] = control, wires[1..2] = targets
    //   CNot: wires[0] = control, wires[1] = target
    //   Mcx: wires[0..k-1] = controls, wires[k] = target
    std::vector<uint32_t> wires;
    uint8_t control_value = 0;      // CSwap / CNot (encoded local value)
    uint8_t bit = 0;                // ClassicalZ / ClassicalXTilde
    std::vector<uint8_t> pattern;   // Mcx control pattern (encoded values)
    // Additional quantum controls added by the hybrid wrapper: the gate acts
    // only on labels where every listed wire holds the required value.
    std::vector<std::pair<uint32_t, uint8_t>> extra_controls;

    // Applies the permutation to `label` in place, returns the sign (+1/-1).
    int apply(BasisLabel& label, const WireLayout& layout) const;

    // All wires the gate can touch or read, including extra controls.
    std::vector<uint32_t> support() const;

    // Wires whose values the gate can rewrite. Controls and diagonal (Z-type)
    // targets are read-only: gates may share those within a layer.
    std::vector<uint32_t> modified_wires() const;

    // Validates wire ranges and kind/dimension compatibility.
    void validate(const WireLayout& layout) const;

    static const char* kind_name(GateKind k);
};

Gate make_x(uint32_t target);
Gate make_z(uint32_t target);
Gate make_swap(uint32_t a, uint32_t b);
Gate make_cswap(uint32_t control, uint8_t control_value, uint32_t a, uint32_t b);
Gate make_cnot(uint32_t control, uint8_t control_value, uint32_t target);
Gate make_xtilde(uint32_t target);
Gate make_classical_z(uint32_t target, int bit);
Gate make_classical_xtilde(uint32_t target, int bit);
Gate make_mcx(std::vector<uint32_t> controls, std::vector<uint8_t> pattern, uint32_t target);

}  // namespace qramsim
