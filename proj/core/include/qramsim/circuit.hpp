#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qramsim/classical_data.hpp"
#include "qramsim/gate.hpp"
#include "qramsim/layout.hpp"
#include "qramsim/sparse_state.hpp"

namespace qramsim {

enum class Variant : uint8_t {
    Fanout,
    BB3,
    BB2,
    BB2Modified,
    BB3Modified,
    Qrom,
    Hybrid,
};

enum class CopyVariant : uint8_t {
    PlusZ,       // bus prepared in |+>, data copied as classically controlled Z
    ZeroXTilde,  // bus prepared in |0>, data copied as classically controlled XTilde
    DoubleQuery, // two full queries around a bus->ancilla copy (arbitrary init)
};

const char* variant_name(Variant v);
const char* copy_variant_name(CopyVariant v);

struct Layer {
    std::vector<Gate> gates;
};

// One time block U_t. Gates within a layer act on disjoint wires; the error
// channel ticks noise_rounds times after the block (0 = no noise round).
struct Block {
    std::vector<Layer> layers;
    int noise_rounds = 1;

    bool noise_round() const { return noise_rounds > 0; }
    size_t gate_count() const {
        size_t n = 0;
        for (const Layer& l : layers) n += l.gates.size();
        return n;
    }
};

// Immutable after build; shareable read-only across workers. The classical
// data is resolved into the gate list at build time, and kept here so runners
// can derive the ideal output without a second data argument.
struct Circuit {
    std::shared_ptr<const WireLayout> layout;
    std::vector<Block> blocks;
    std::vector<uint32_t> noisy_wires;
    Variant variant = Variant::BB3;
    CopyVariant copy_variant = CopyVariant::ZeroXTilde;
    Variant hybrid_subkind = Variant::BB3;  // meaningful for Variant::Hybrid
    int n = 0;                              // log2 of the memory size
    int m = 0;                              // hybrid block exponent, M = 2^m
    ClassicalData data;
    // Per-wire initial label (addresses are set separately per query).
    std::vector<uint8_t> initial_values;
    // Wires prepared in (|0> + |1>)/sqrt(2) over their encoded qubit levels.
    std::vector<uint32_t> plus_wires;

    int M() const { return 1 << m; }
    // Number of noise rounds.
    int T() const {
        int t = 0;
        for (const Block& b : blocks) t += b.noise_rounds;
        return t;
    }
    size_t gate_count() const {
        size_t g = 0;
        for (const Block& b : blocks) g += b.gate_count();
        return g;
    }
    std::map<std::string, size_t> gate_counts_by_kind() const;

    // Router wires on the path of address branch i (tree variants only; the
    // hybrid path lives in the subtree and is iteration-independent).
    std::vector<uint32_t> branch_router_wires(uint64_t branch) const;

    // Throws unless every layer has pairwise disjoint gate supports and all
    // gates validate against the layout.
    void check_schedule_legality() const;

    // JSON summary: variant, n, M, T, wire/gate counts per kind.
    std::string summary_json() const;
};

// Initial state for a query: address register set to the encoded bits of each
// branch, everything else at the circuit's initial label, with plus_wires
// expanded into their two-term superpositions.
SparseState initial_state(const Circuit& circuit,
                          const std::vector<std::pair<uint64_t, Complex>>& address_amps);

// Uniform superposition over all 2^n addresses (the hardest query).
std::vector<std::pair<uint64_t, Complex>> uniform_address_amps(int n);

// Runs the block sequence on `state` in place. After each block the callback
// (when set) fires once per noise round with the running global round index.
using NoiseRoundFn = std::function<void(int round, SparseState& state)>;
void run_circuit(const Circuit& circuit, SparseState& state, const NoiseRoundFn& on_round = {});

}  // namespace qramsim
