#include "qramsim/layout.hpp"

#include <stdexcept>

namespace qramsim {

std::shared_ptr<const WireLayout> WireLayout::tree(int n, int dim, bool with_copy_ancilla,
                                                   int address_bits) {
    if (n < 1 || n > 12) throw std::invalid_argument("tree depth n must be in [1, 12]");
    if (dim != 2 && dim != 3) throw std::invalid_argument("wire dimension must be 2 or 3");
    if (address_bits == 0) address_bits = n;
    if (address_bits < n) throw std::invalid_argument("address register smaller than tree depth");

    auto lay = std::make_shared<WireLayout>();
    const uint32_t routers = (1u << n) - 1;
    lay->dim_ = dim;
    lay->n_ = n;
    lay->address_bits_ = address_bits;

    uint32_t next = 0;
    auto add_register = [&](const char* name, RegisterKind kind, uint32_t count) {
        lay->registers_.push_back({name, kind, next, count});
        uint32_t first = next;
        next += count;
        return first;
    };
    lay->address_first_ =
        add_register("address", RegisterKind::Address, static_cast<uint32_t>(address_bits));
    lay->input_rail_ = add_register("input_rail", RegisterKind::InputRail, 1);
    lay->bus_ = add_register("bus", RegisterKind::Bus, 1);
    lay->router_first_ = add_register("router_internal", RegisterKind::RouterInternal, routers);
    lay->router_count_ = routers;
    lay->output_first_ = add_register("router_output", RegisterKind::RouterOutput, 2 * routers);
    if (with_copy_ancilla) {
        lay->copy_ancilla_ = add_register("copy_ancilla", RegisterKind::CopyAncilla, 1);
    }
    lay->wire_count_ = next;
    lay->wire_dims_.assign(next, static_cast<uint8_t>(dim));
    return lay;
}

std::shared_ptr<const WireLayout> WireLayout::qrom(int n) { return address_bus(n, 2); }

std::shared_ptr<const WireLayout> WireLayout::address_bus(int n, int dim) {
    if (n < 1 || n > 30) throw std::invalid_argument("address register size out of range");
    if (dim != 2 && dim != 3) throw std::invalid_argument("wire dimension must be 2 or 3");
    auto lay = std::make_shared<WireLayout>();
    lay->dim_ = dim;
    lay->n_ = 0;
    lay->address_bits_ = n;
    lay->address_first_ = 0;
    lay->registers_.push_back({"address", RegisterKind::Address, 0, static_cast<uint32_t>(n)});
    lay->bus_ = static_cast<uint32_t>(n);
    lay->registers_.push_back({"bus", RegisterKind::Bus, lay->bus_, 1});
    lay->wire_count_ = static_cast<uint32_t>(n) + 1;
    lay->wire_dims_.assign(lay->wire_count_, static_cast<uint8_t>(dim));
    return lay;
}

std::pair<int, uint32_t> WireLayout::router_level_pos(uint32_t wire) const {
    if (wire < router_first_ || wire >= router_first_ + router_count_)
        throw std::invalid_argument("wire is not a router");
    uint32_t idx = wire - router_first_;
    int level = 0;
    while ((2u << level) - 1 <= idx) ++level;
    return {level, idx - ((1u << level) - 1)};
}

std::vector<uint32_t> WireLayout::ancilla_wires() const {
    std::vector<uint32_t> out;
    out.reserve(wire_count_);
    for (const Register& reg : registers_) {
        if (reg.kind == RegisterKind::Address || reg.kind == RegisterKind::Bus) continue;
        for (uint32_t w = reg.first; w < reg.first + reg.count; ++w) out.push_back(w);
    }
    return out;
}

}  // namespace qramsim
