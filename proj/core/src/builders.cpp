#include "qramsim/builders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qramsim/rng.hpp"

namespace qramsim {

namespace {

// ---------------------------------------------------------------------------
// Tree schedule. One block per injected qubit (addresses in order, then the
// bus), each block holding one even-level pass and one odd-level pass so a
// qubit descends up to two levels per block; a final flush block carries the
// remaining passes. Route-in is therefore exactly depth+2 blocks when the bus
// participates (depth+1 for address-only prefixes), reproducing the 11-block
// schedule at n=3 and T = 2n+5 overall.
// ---------------------------------------------------------------------------

struct TreePlanner {
    const WireLayout& lay;
    int depth;
    int addr_offset;   // first address bit routed by this tree (hybrids)
    bool modified;     // unconditional-SWAP routing variant

    // Emits the two CSWAPs of the routing operation at every router of a
    // level. The two gates of one operation touch the same incident mode, so
    // they live in consecutive disjoint sub-layers.
    void routing_pass(int level, std::vector<Gate>& first, std::vector<Gate>& second) const {
        const uint8_t e0 = lay.enc0();
        const uint8_t e1 = lay.enc1();
        for (uint32_t k = 0; k < (1u << level); ++k) {
            const uint32_t r = lay.router_wire(level, k);
            const uint32_t inc = lay.incident_wire(level, k);
            const uint32_t left = lay.output_wire(level, k, 0);
            const uint32_t right = lay.output_wire(level, k, 1);
            if (modified) {
                first.push_back(make_cswap(r, e1, inc, right));
                second.push_back(make_swap(inc, left));
            } else {
                first.push_back(make_cswap(r, e0, inc, left));
                second.push_back(make_cswap(r, e1, inc, right));
            }
        }
    }

    // Address absorption: swap router and incident mode at every router of
    // the level. On the ideal path the router holds |W> (or the two-level
    // initial |0>), so the address installs itself and the displaced value
    // ascends; this also works when the tree starts in an arbitrary label.
    void absorb_pass(int level, std::vector<Gate>& layer) const {
        for (uint32_t k = 0; k < (1u << level); ++k) {
            layer.push_back(make_swap(lay.router_wire(level, k), lay.incident_wire(level, k)));
        }
    }

    struct Flight {
        int target;    // address index (absorbs at its level) or depth for the bus
        int crossed;   // levels crossed so far
        bool done = false;
    };

    std::vector<Layer> pass(std::vector<Flight>& flights, int parity) const {
        std::vector<Gate> first, second;
        for (Flight& f : flights) {
            if (f.done) continue;
            const int level = f.crossed;
            if (level >= depth || level % 2 != parity) continue;
            if (f.target < depth && level == f.target) {
                absorb_pass(level, first);
                f.done = true;
            } else {
                routing_pass(level, first, second);
                f.crossed++;
                if (f.target == depth && f.crossed == depth) f.done = true;
            }
        }
        std::vector<Layer> out;
        if (!first.empty()) out.push_back({std::move(first)});
        if (!second.empty()) out.push_back({std::move(second)});
        return out;
    }

    // with_bus=false produces the address-only prefix used for the state at
    // t*. inject_addresses=false produces the bus-only descent (fanout).
    std::vector<Block> route_in(bool with_bus, bool inject_addresses = true) const {
        std::vector<Flight> flights;
        std::vector<Block> blocks;
        auto run_pass = [&](Block& blk, int parity) {
            for (Layer& l : pass(flights, parity)) blk.layers.push_back(std::move(l));
        };

        std::vector<std::pair<uint32_t, int>> injections;  // (source wire, target)
        if (inject_addresses) {
            for (int j = 0; j < depth; ++j)
                injections.emplace_back(lay.address_wire(addr_offset + j), j);
        }
        if (with_bus) injections.emplace_back(lay.bus_wire(), depth);

        for (const auto& [src, target] : injections) {
            Block blk;
            blk.layers.push_back({{make_swap(src, lay.input_rail())}});
            flights.push_back({target, 0});
            run_pass(blk, 0);
            run_pass(blk, 1);
            blocks.push_back(std::move(blk));
        }

        Block flush;
        int parity = 0;
        int guard = 0;
        auto all_done = [&] {
            return std::all_of(flights.begin(), flights.end(),
                               [](const Flight& f) { return f.done; });
        };
        while (!all_done()) {
            run_pass(flush, parity);
            parity ^= 1;
            if (++guard > 4 * depth + 8) throw std::logic_error("tree schedule did not converge");
        }
        blocks.push_back(std::move(flush));
        return blocks;
    }
};

Block copy_block(const WireLayout& lay, int depth, const ClassicalData& data, size_t data_offset,
                 bool xtilde) {
    Layer layer;
    const uint32_t cells = 1u << depth;
    layer.gates.reserve(cells);
    for (uint32_t cell = 0; cell < cells; ++cell) {
        const uint32_t w = lay.bottom_output(cell);
        const int bit = data.bit(data_offset + cell);
        layer.gates.push_back(xtilde ? make_classical_xtilde(w, bit) : make_classical_z(w, bit));
    }
    Block blk;
    blk.layers.push_back(std::move(layer));
    return blk;
}

// Uncompute: reverse block order and layer order; every gate kind is an
// involution so the gates themselves are reused.
std::vector<Block> mirrored(const std::vector<Block>& blocks) {
    std::vector<Block> out;
    out.reserve(blocks.size());
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        Block blk;
        blk.noise_rounds = it->noise_rounds;
        blk.layers.assign(it->layers.rbegin(), it->layers.rend());
        out.push_back(std::move(blk));
    }
    return out;
}

std::vector<uint32_t> tree_noisy_wires(const WireLayout& lay, NoisePolicy policy,
                                       bool include_address_bus) {
    std::vector<uint32_t> wires;
    for (const Register& reg : lay.registers()) {
        const bool take =
            reg.kind == RegisterKind::RouterInternal ||
            (policy == NoisePolicy::RoutersAndOutputs && reg.kind == RegisterKind::RouterOutput) ||
            (include_address_bus &&
             (reg.kind == RegisterKind::Address || reg.kind == RegisterKind::Bus));
        if (!take) continue;
        for (uint32_t w = reg.first; w < reg.first + reg.count; ++w) wires.push_back(w);
    }
    return wires;
}

void set_bus_preparation(Circuit& c) {
    const WireLayout& lay = *c.layout;
    if (c.copy_variant == CopyVariant::PlusZ ||
        (c.copy_variant == CopyVariant::DoubleQuery && lay.dim() == 2)) {
        c.plus_wires.push_back(lay.bus_wire());
    } else {
        c.initial_values[lay.bus_wire()] = lay.enc0();
    }
}

std::vector<Block> fanout_cnot_blocks(const WireLayout& lay, int addr_offset) {
    std::vector<Block> blocks;
    for (int level = 0; level < lay.tree_depth(); ++level) {
        // One broadcast per level: the CNOTs share only their control wire.
        Layer layer;
        for (uint32_t k = 0; k < (1u << level); ++k) {
            layer.gates.push_back(make_cnot(lay.address_wire(addr_offset + level), lay.enc1(),
                                            lay.router_wire(level, k)));
        }
        Block blk;
        blk.layers.push_back(std::move(layer));
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

std::vector<Block> tree_query_blocks(const WireLayout& lay, Variant variant, int depth,
                                     int addr_offset, const ClassicalData& data,
                                     size_t data_offset) {
    const bool modified = variant == Variant::BB2Modified || variant == Variant::BB3Modified;
    const bool fanout = variant == Variant::Fanout;
    TreePlanner planner{lay, depth, addr_offset, modified};

    std::vector<Block> route_in;
    if (fanout) {
        route_in = fanout_cnot_blocks(lay, addr_offset);
        for (Block& b : planner.route_in(true, false)) route_in.push_back(std::move(b));
    } else {
        route_in = planner.route_in(true);
    }
    std::vector<Block> blocks = route_in;
    blocks.push_back(copy_block(lay, depth, data, data_offset, lay.dim() == 3));
    for (Block& b : mirrored(route_in)) blocks.push_back(std::move(b));
    return blocks;
}

void validate_tree_args(int n, const ClassicalData& data) {
    if (n < 1 || n > 12) throw std::invalid_argument("tree depth n must be in [1, 12]");
    if (data.size() != (1ull << n)) throw std::invalid_argument("data size must be 2^n");
}

}  // namespace

Circuit build_bb_circuit(int n, int levels, bool modified_routing, CopyVariant copy_variant,
                         const ClassicalData& data, NoisePolicy policy) {
    validate_tree_args(n, data);
    if (levels != 2 && levels != 3) throw std::invalid_argument("levels must be 2 or 3");
    if (copy_variant == CopyVariant::PlusZ && levels != 2)
        throw std::invalid_argument("PLUS_Z copy requires two-level routers");
    if (copy_variant == CopyVariant::ZeroXTilde && levels != 3)
        throw std::invalid_argument("ZERO_XTILDE copy requires three-level routers");
    if (copy_variant == CopyVariant::DoubleQuery)
        throw std::invalid_argument("use build_double_query_circuit for DOUBLE_QUERY");

    Circuit c;
    c.n = n;
    c.variant = levels == 3 ? (modified_routing ? Variant::BB3Modified : Variant::BB3)
                            : (modified_routing ? Variant::BB2Modified : Variant::BB2);
    c.copy_variant = copy_variant;
    c.layout = WireLayout::tree(n, levels);
    c.data = data;
    c.initial_values.assign(c.layout->wire_count(), 0);
    set_bus_preparation(c);
    c.blocks = tree_query_blocks(*c.layout, c.variant, n, 0, data, 0);
    c.noisy_wires = tree_noisy_wires(*c.layout, policy, false);
    return c;
}

Circuit build_fanout_circuit(int n, const ClassicalData& data, NoisePolicy policy) {
    validate_tree_args(n, data);
    Circuit c;
    c.n = n;
    c.variant = Variant::Fanout;
    c.copy_variant = CopyVariant::PlusZ;
    c.layout = WireLayout::tree(n, 2);
    c.data = data;
    c.initial_values.assign(c.layout->wire_count(), 0);
    set_bus_preparation(c);
    c.blocks = tree_query_blocks(*c.layout, Variant::Fanout, n, 0, data, 0);
    c.noisy_wires = tree_noisy_wires(*c.layout, policy, false);
    return c;
}

Circuit build_qrom_circuit(int n, const ClassicalData& data) {
    if (n < 1 || n > 8) throw std::invalid_argument("qrom depth n must be in [1, 8]");
    if (data.size() != (1ull << n)) throw std::invalid_argument("data size must be 2^n");
    Circuit c;
    c.n = n;
    c.variant = Variant::Qrom;
    c.copy_variant = CopyVariant::ZeroXTilde;
    c.layout = WireLayout::qrom(n);
    c.data = data;
    c.initial_values.assign(c.layout->wire_count(), 0);
    c.noisy_wires.resize(c.layout->wire_count());
    for (uint32_t w = 0; w < c.layout->wire_count(); ++w) c.noisy_wires[w] = w;

    // Each pattern block models a depth-ceil(log2 n)+1 multi-controlled X.
    const int rounds_per_block = static_cast<int>(std::ceil(std::log2(std::max(n, 1)))) + 1;
    const uint32_t cells = 1u << n;
    std::vector<uint32_t> controls(n);
    for (int b = 0; b < n; ++b) controls[b] = c.layout->address_wire(b);
    for (uint32_t j = 0; j < cells; ++j) {
        Block blk;
        blk.noise_rounds = rounds_per_block;
        if (data.bit(j)) {
            std::vector<uint8_t> pattern(n);
            for (int b = 0; b < n; ++b)
                pattern[b] = c.layout->encode_bit(static_cast<int>((j >> (n - 1 - b)) & 1u));
            blk.layers.push_back({{make_mcx(controls, pattern, c.layout->bus_wire())}});
        }
        c.blocks.push_back(std::move(blk));
    }
    return c;
}

Circuit build_hybrid_circuit(int n, int m, Variant subkind, const ClassicalData& data,
                             NoisePolicy policy) {
    if (n < 1 || n > 12) throw std::invalid_argument("hybrid n must be in [1, 12]");
    if (m < 0 || m > n) throw std::invalid_argument("hybrid m must be in [0, n]");
    if (data.size() != (1ull << n)) throw std::invalid_argument("data size must be 2^n");
    if (subkind != Variant::BB3 && subkind != Variant::BB2 && subkind != Variant::Fanout)
        throw std::invalid_argument("hybrid subkind must be FANOUT, BB2 or BB3");

    const int n_sub = n - m;
    const int dim = subkind == Variant::BB3 ? 3 : 2;
    Circuit c;
    c.n = n;
    c.m = m;
    c.variant = Variant::Hybrid;
    c.hybrid_subkind = subkind;
    c.copy_variant = subkind == Variant::BB3 ? CopyVariant::ZeroXTilde : CopyVariant::PlusZ;
    c.data = data;

    const int iterations = 1 << m;
    if (n_sub >= 1) {
        c.layout = WireLayout::tree(n_sub, dim, false, n);
        c.initial_values.assign(c.layout->wire_count(), 0);
        set_bus_preparation(c);
        const size_t sub_cells = 1ull << n_sub;
        for (int j = 0; j < iterations; ++j) {
            std::vector<Block> sub =
                tree_query_blocks(*c.layout, subkind, n_sub, m, data, j * sub_cells);
            std::vector<std::pair<uint32_t, uint8_t>> controls;
            for (int t = 0; t < m; ++t) {
                const int bit = (j >> (m - 1 - t)) & 1;
                controls.emplace_back(c.layout->address_wire(t), c.layout->encode_bit(bit));
            }
            for (Block& blk : sub) {
                for (Layer& layer : blk.layers)
                    for (Gate& g : layer.gates) g.extra_controls = controls;
                c.blocks.push_back(std::move(blk));
            }
        }
    } else {
        // m = n: every subtree is a single cell, the circuit degenerates to a
        // QROM-style iteration of controlled copy gates on the bus.
        c.layout = WireLayout::address_bus(n, dim);
        c.initial_values.assign(c.layout->wire_count(), 0);
        set_bus_preparation(c);
        for (int j = 0; j < iterations; ++j) {
            Block blk;
            Gate g = dim == 3 ? make_classical_xtilde(c.layout->bus_wire(), data.bit(j))
                              : make_classical_z(c.layout->bus_wire(), data.bit(j));
            for (int t = 0; t < m; ++t) {
                const int bit = (j >> (m - 1 - t)) & 1;
                g.extra_controls.emplace_back(c.layout->address_wire(t),
                                              c.layout->encode_bit(bit));
            }
            blk.layers.push_back({{std::move(g)}});
            c.blocks.push_back(std::move(blk));
        }
    }
    c.noisy_wires = tree_noisy_wires(*c.layout, policy, true);
    return c;
}

Circuit build_double_query_circuit(int n, int levels, const ClassicalData& data,
                                   std::optional<uint64_t> tree_init_seed, NoisePolicy policy) {
    validate_tree_args(n, data);
    if (levels != 2 && levels != 3) throw std::invalid_argument("levels must be 2 or 3");

    Circuit c;
    c.n = n;
    c.variant = levels == 3 ? Variant::BB3 : Variant::BB2;
    c.copy_variant = CopyVariant::DoubleQuery;
    c.layout = WireLayout::tree(n, levels, true);
    c.data = data;
    c.initial_values.assign(c.layout->wire_count(), 0);
    set_bus_preparation(c);

    const WireLayout& lay = *c.layout;
    const uint32_t anc = lay.copy_ancilla();
    if (levels == 3) {
        c.initial_values[anc] = lay.enc0();
    } else {
        c.plus_wires.push_back(anc);
    }
    if (tree_init_seed) {
        SplitMix64 sm(*tree_init_seed);
        for (const Register& reg : lay.registers()) {
            if (reg.kind != RegisterKind::InputRail && reg.kind != RegisterKind::RouterInternal &&
                reg.kind != RegisterKind::RouterOutput)
                continue;
            for (uint32_t w = reg.first; w < reg.first + reg.count; ++w)
                c.initial_values[w] = static_cast<uint8_t>(sm.next() % lay.dim());
        }
    }

    std::vector<Block> query = tree_query_blocks(lay, c.variant, n, 0, data, 0);
    c.blocks = query;
    // Copy the bus into the ancilla. Three-level data lives in the
    // computational basis (CNOT off the bus); two-level data lives in the
    // |+/-> basis and is copied by phase kickback (CNOT off the ancilla).
    Block copy_anc;
    if (levels == 3) {
        copy_anc.layers.push_back({{make_cnot(lay.bus_wire(), lay.enc1(), anc)}});
    } else {
        copy_anc.layers.push_back({{make_cnot(anc, lay.enc1(), lay.bus_wire())}});
    }
    c.blocks.push_back(std::move(copy_anc));
    for (Block& b : query) c.blocks.push_back(std::move(b));
    Block swap_back;
    swap_back.layers.push_back({{make_swap(anc, lay.bus_wire())}});
    c.blocks.push_back(std::move(swap_back));

    c.noisy_wires = tree_noisy_wires(lay, policy, false);
    return c;
}

Circuit build_address_prefix_circuit(int n, Variant variant) {
    if (n < 1 || n > 12) throw std::invalid_argument("tree depth n must be in [1, 12]");
    Circuit c;
    c.n = n;
    c.variant = variant;
    const int dim = (variant == Variant::BB3 || variant == Variant::BB3Modified) ? 3 : 2;
    c.copy_variant = dim == 3 ? CopyVariant::ZeroXTilde : CopyVariant::PlusZ;
    c.layout = WireLayout::tree(n, dim);
    c.data.bits.assign(1ull << n, 0);
    c.initial_values.assign(c.layout->wire_count(), 0);
    set_bus_preparation(c);
    if (variant == Variant::Fanout) {
        c.blocks = fanout_cnot_blocks(*c.layout, 0);
    } else {
        const bool modified = variant == Variant::BB2Modified || variant == Variant::BB3Modified;
        TreePlanner planner{*c.layout, n, 0, modified};
        c.blocks = planner.route_in(false);
    }
    c.noisy_wires = tree_noisy_wires(*c.layout, NoisePolicy::RoutersOnly, false);
    return c;
}

std::shared_ptr<const WireLayout> address_bus_layout(int n, int dim) {
    return WireLayout::address_bus(n, dim);
}

SparseState ideal_output(const std::vector<std::pair<uint64_t, Complex>>& address_amps,
                         const ClassicalData& data, CopyVariant copy_variant, int dim) {
    double total = 0.0;
    for (const auto& [i, amp] : address_amps) total += std::norm(amp);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("ideal_output: address amplitudes not normalized");
    const int n = static_cast<int>(std::llround(std::log2(static_cast<double>(data.size()))));
    auto lay = WireLayout::address_bus(n, dim);

    const bool plus_basis =
        copy_variant == CopyVariant::PlusZ || (copy_variant == CopyVariant::DoubleQuery && dim == 2);
    std::vector<std::pair<BasisLabel, Complex>> terms;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const auto& [i, amp] : address_amps) {
        BasisLabel base(lay->wire_count());
        for (int b = 0; b < n; ++b)
            base.set(lay->address_wire(b), lay->encode_bit(static_cast<int>((i >> (n - 1 - b)) & 1ull)));
        if (plus_basis) {
            BasisLabel l0 = base;
            l0.set(lay->bus_wire(), lay->enc0());
            terms.emplace_back(std::move(l0), amp * inv_sqrt2);
            BasisLabel l1 = base;
            l1.set(lay->bus_wire(), lay->enc1());
            terms.emplace_back(std::move(l1), (data.bit(i) ? -amp : amp) * inv_sqrt2);
        } else {
            base.set(lay->bus_wire(), lay->encode_bit(data.bit(i)));
            terms.emplace_back(std::move(base), amp);
        }
    }
    return make_state(lay, terms);
}

SparseState ideal_output_for(const Circuit& circuit,
                             const std::vector<std::pair<uint64_t, Complex>>& address_amps) {
    return ideal_output(address_amps, circuit.data, circuit.copy_variant, circuit.layout->dim());
}

}  // namespace qramsim
