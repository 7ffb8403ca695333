#include "qramsim/gate.hpp"

#include <stdexcept>

namespace qramsim {

namespace {

inline void flip_qubit_level(BasisLabel& label, uint32_t wire, const WireLayout& layout) {
    // X on qubit wires, XTilde on qutrit wires: swaps the two encoded qubit
    // levels and fixes |W>.
    const uint8_t v = label.get(wire);
    if (layout.wire_dim(wire) == 2) {
        label.set(wire, v ^ 1u);
    } else {
        if (v == 1)
            label.set(wire, 2);
        else if (v == 2)
            label.set(wire, 1);
    }
}

}  // namespace

int Gate::apply(BasisLabel& label, const WireLayout& layout) const {
    for (const auto& [cw, cv] : extra_controls) {
        if (label.get(cw) != cv) return 1;
    }
    switch (kind) {
        case GateKind::X: {
            label.set(wires[0], label.get(wires[0]) ^ 1u);
            return 1;
        }
        case GateKind::Z:
            return label.get(wires[0]) == layout.enc1() ? -1 : 1;
        case GateKind::Swap: {
            const uint8_t a = label.get(wires[0]);
            const uint8_t b = label.get(wires[1]);
            if (a != b) {
                label.set(wires[0], b);
                label.set(wires[1], a);
            }
            return 1;
        }
        case GateKind::CSwap: {
            if (label.get(wires[0]) != control_value) return 1;
            const uint8_t a = label.get(wires[1]);
            const uint8_t b = label.get(wires[2]);
            if (a != b) {
                label.set(wires[1], b);
                label.set(wires[2], a);
            }
            return 1;
        }
        case GateKind::CNot: {
            if (label.get(wires[0]) != control_value) return 1;
            flip_qubit_level(label, wires[1], layout);
            return 1;
        }
        case GateKind::XTilde: {
            flip_qubit_level(label, wires[0], layout);
            return 1;
        }
        case GateKind::ClassicalZ:
            if (bit == 0) return 1;
            return label.get(wires[0]) == layout.enc1() ? -1 : 1;
        case GateKind::ClassicalXTilde: {
            if (bit == 0) return 1;
            flip_qubit_level(label, wires[0], layout);
            return 1;
        }
        case GateKind::Mcx: {
            const size_t k = wires.size() - 1;
            for (size_t i = 0; i < k; ++i) {
                if (label.get(wires[i]) != pattern[i]) return 1;
            }
            flip_qubit_level(label, wires[k], layout);
            return 1;
        }
    }
    return 1;
}

std::vector<uint32_t> Gate::support() const {
    std::vector<uint32_t> s = wires;
    for (const auto& [cw, cv] : extra_controls) {
        (void)cv;
        s.push_back(cw);
    }
    return s;
}

std::vector<uint32_t> Gate::modified_wires() const {
    switch (kind) {
        case GateKind::Z:
        case GateKind::ClassicalZ:
            return {};
        case GateKind::X:
        case GateKind::XTilde:
        case GateKind::ClassicalXTilde:
            return {wires[0]};
        case GateKind::Swap:
            return {wires[0], wires[1]};
        case GateKind::CSwap:
            return {wires[1], wires[2]};
        case GateKind::CNot:
            return {wires[1]};
        case GateKind::Mcx:
            return {wires.back()};
    }
    return {};
}

void Gate::validate(const WireLayout& layout) const {
    for (uint32_t w : support()) {
        if (w >= layout.wire_count()) throw std::invalid_argument("gate wire out of range");
    }
    switch (kind) {
        case GateKind::X:
            if (layout.wire_dim(wires[0]) != 2)
                throw std::invalid_argument("X acts on qubit wires only; use XTilde on qutrits");
            break;
        case GateKind::XTilde:
        case GateKind::ClassicalXTilde:
            if (layout.wire_dim(wires[0]) != 3)
                throw std::invalid_argument("XTilde acts on qutrit wires only");
            break;
        case GateKind::Swap:
        case GateKind::CSwap: {
            const size_t a = kind == GateKind::Swap ? 0 : 1;
            if (layout.wire_dim(wires[a]) != layout.wire_dim(wires[a + 1]))
                throw std::invalid_argument("swap targets must share a dimension");
            break;
        }
        default:
            break;
    }
    if (kind == GateKind::Mcx && pattern.size() + 1 != wires.size())
        throw std::invalid_argument("Mcx pattern/wire count mismatch");
}

const char* Gate::kind_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::Swap: return "SWAP";
        case GateKind::CSwap: return "CSWAP";
        case GateKind::CNot: return "CNOT";
        case GateKind::XTilde: return "XTILDE";
        case GateKind::ClassicalZ: return "CLASSICAL_Z";
        case GateKind::ClassicalXTilde: return "CLASSICAL_XTILDE";
        case GateKind::Mcx: return "MCX";
    }
    return "?";
}

Gate make_x(uint32_t target) { return Gate{GateKind::X, {target}, 0, 0, {}, {}}; }
Gate make_z(uint32_t target) { return Gate{GateKind::Z, {target}, 0, 0, {}, {}}; }
Gate make_swap(uint32_t a, uint32_t b) { return Gate{GateKind::Swap, {a, b}, 0, 0, {}, {}}; }
Gate make_cswap(uint32_t control, uint8_t control_value, uint32_t a, uint32_t b) {
    return Gate{GateKind::CSwap, {control, a, b}, control_value, 0, {}, {}};
}
Gate make_cnot(uint32_t control, uint8_t control_value, uint32_t target) {
    return Gate{GateKind::CNot, {control, target}, control_value, 0, {}, {}};
}
Gate make_xtilde(uint32_t target) { return Gate{GateKind::XTilde, {target}, 0, 0, {}, {}}; }
Gate make_classical_z(uint32_t target, int bit) {
    return Gate{GateKind::ClassicalZ, {target}, 0, static_cast<uint8_t>(bit), {}, {}};
}
Gate make_classical_xtilde(uint32_t target, int bit) {
    return Gate{GateKind::ClassicalXTilde, {target}, 0, static_cast<uint8_t>(bit), {}, {}};
}
Gate make_mcx(std::vector<uint32_t> controls, std::vector<uint8_t> pattern, uint32_t target) {
    Gate g{GateKind::Mcx, std::move(controls), 0, 0, std::move(pattern), {}};
    g.wires.push_back(target);
    return g;
}

}  // namespace qramsim
