#include "qramsim/circuit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qramsim {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Fanout: return "FANOUT";
        case Variant::BB3: return "BB3";
        case Variant::BB2: return "BB2";
        case Variant::BB2Modified: return "BB2_MODIFIED";
        case Variant::BB3Modified: return "BB3_MODIFIED";
        case Variant::Qrom: return "QROM";
        case Variant::Hybrid: return "HYBRID";
    }
    return "?";
}

const char* copy_variant_name(CopyVariant v) {
    switch (v) {
        case CopyVariant::PlusZ: return "PLUS_Z";
        case CopyVariant::ZeroXTilde: return "ZERO_XTILDE";
        case CopyVariant::DoubleQuery: return "DOUBLE_QUERY";
    }
    return "?";
}

std::map<std::string, size_t> Circuit::gate_counts_by_kind() const {
    std::map<std::string, size_t> counts;
    for (const Block& b : blocks)
        for (const Layer& l : b.layers)
            for (const Gate& g : l.gates) counts[Gate::kind_name(g.kind)]++;
    return counts;
}

std::vector<uint32_t> Circuit::branch_router_wires(uint64_t branch) const {
    if (!layout->is_tree()) return {};
    const int depth = layout->tree_depth();
    const int low_bits = depth;  // for hybrids the subtree covers the low n-m bits
    std::vector<uint32_t> wires;
    wires.reserve(depth);
    const uint64_t sub = branch & ((1ull << low_bits) - 1);
    for (int level = 0; level < depth; ++level) {
        const uint32_t pos = static_cast<uint32_t>(sub >> (low_bits - level)) &
                             ((1u << level) - 1);
        wires.push_back(layout->router_wire(level, pos));
    }
    return wires;
}

void Circuit::check_schedule_legality() const {
    // Within a layer a wire may be read (control, diagonal target) by any
    // number of gates, but a rewritten wire belongs to exactly one gate and
    // to nothing else.
    for (const Block& b : blocks) {
        for (const Layer& l : b.layers) {
            std::unordered_map<uint32_t, int> readers, writers;
            for (const Gate& g : l.gates) {
                g.validate(*layout);
                const auto modified = g.modified_wires();
                for (uint32_t w : g.support()) {
                    const bool writes = std::find(modified.begin(), modified.end(), w) !=
                                        modified.end();
                    (writes ? writers : readers)[w]++;
                }
            }
            for (const auto& [w, count] : writers) {
                if (count > 1 || readers.count(w))
                    throw std::runtime_error("schedule illegal: conflicting gates in a layer");
            }
        }
    }
}

std::string Circuit::summary_json() const {
    nlohmann::json j;
    j["variant"] = variant_name(variant);
    if (variant == Variant::Hybrid) j["subkind"] = variant_name(hybrid_subkind);
    j["copy_variant"] = copy_variant_name(copy_variant);
    j["n"] = n;
    j["M"] = M();
    j["T"] = T();
    j["wire_count"] = layout->wire_count();
    j["block_count"] = blocks.size();
    j["gate_count"] = gate_count();
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [k, v] : gate_counts_by_kind()) counts[k] = v;
    j["gate_counts"] = counts;
    return j.dump();
}

SparseState initial_state(const Circuit& circuit,
                          const std::vector<std::pair<uint64_t, Complex>>& address_amps) {
    const WireLayout& lay = *circuit.layout;
    if (address_amps.empty()) throw std::invalid_argument("initial_state: no address amplitudes");
    double total = 0.0;
    for (const auto& [i, amp] : address_amps) total += std::norm(amp);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("initial_state: address amplitudes not normalized");

    const int bits = lay.address_bits();
    const uint64_t n_cells = 1ull << bits;
    std::vector<std::pair<BasisLabel, Complex>> terms;
    terms.reserve(address_amps.size() << circuit.plus_wires.size());
    for (const auto& [i, amp] : address_amps) {
        if (i >= n_cells) throw std::invalid_argument("initial_state: address out of range");
        BasisLabel base(lay.wire_count());
        for (uint32_t w = 0; w < lay.wire_count(); ++w) base.set(w, circuit.initial_values[w]);
        for (int b = 0; b < bits; ++b) {
            const int bit = static_cast<int>((i >> (bits - 1 - b)) & 1ull);
            base.set(lay.address_wire(b), lay.encode_bit(bit));
        }
        // Expand the |+>-prepared wires; superpositions enter only here.
        const size_t combos = 1ull << circuit.plus_wires.size();
        const double scale = 1.0 / std::sqrt(static_cast<double>(combos));
        for (size_t mask = 0; mask < combos; ++mask) {
            BasisLabel label = base;
            for (size_t p = 0; p < circuit.plus_wires.size(); ++p) {
                label.set(circuit.plus_wires[p], lay.encode_bit(static_cast<int>((mask >> p) & 1)));
            }
            terms.emplace_back(std::move(label), amp * scale);
        }
    }
    return make_state(circuit.layout, terms);
}

std::vector<std::pair<uint64_t, Complex>> uniform_address_amps(int n) {
    const uint64_t count = 1ull << n;
    std::vector<std::pair<uint64_t, Complex>> amps;
    amps.reserve(count);
    const double a = 1.0 / std::sqrt(static_cast<double>(count));
    for (uint64_t i = 0; i < count; ++i) amps.emplace_back(i, a);
    return amps;
}

void run_circuit(const Circuit& circuit, SparseState& state, const NoiseRoundFn& on_round) {
    const WireLayout& lay = *circuit.layout;
    int round = 0;
    for (const Block& block : circuit.blocks) {
        for (const Layer& layer : block.layers) {
            for (const Gate& gate : layer.gates) {
                for (Term& t : state.terms_mut()) {
                    if (gate.apply(t.label, lay) < 0) t.amp = -t.amp;
                }
            }
        }
        for (int r = 0; r < block.noise_rounds; ++r) {
            if (on_round) on_round(round, state);
            ++round;
        }
    }
}

}  // namespace qramsim
