#pragma once

#include <optional>

#include "qramsim/circuit.hpp"

namespace qramsim {

// Which wires the error channel hits each noise round. Routers only is the
// default for tree circuits; the extended policy adds the output modes.
// QROM and hybrid circuits additionally mark address and bus wires noisy.
enum class NoisePolicy : uint8_t { RoutersOnly, RoutersAndOutputs };

// Bucket-brigade circuit: addresses injected sequentially at the root and
// routed in parallel across even/odd levels, bus routed down, one block of
// classically controlled copy gates on all bottom-level outputs, then the
// exact mirror of the compute blocks. modified_routing replaces the
// |0>-controlled SWAP of each routing operation with an unconditional SWAP.
Circuit build_bb_circuit(int n, int levels, bool modified_routing, CopyVariant copy_variant,
                         const ClassicalData& data,
                         NoisePolicy policy = NoisePolicy::RoutersOnly);

// Fanout circuit: per level, one block of CNOTs from the address qubit to all
// routers of that level (two-level routers), then the bus descent, copy and
// uncompute.
Circuit build_fanout_circuit(int n, const ClassicalData& data,
                             NoisePolicy policy = NoisePolicy::RoutersOnly);

// QROM: one block per address pattern j, holding a single multi-controlled X
// on the bus when x_j = 1. Each block costs ceil(log2 n) + 1 noise rounds to
// model the depth of the decomposed gate; address and bus wires are noisy.
Circuit build_qrom_circuit(int n, const ClassicalData& data);

// Hybrid: M = 2^m iterations, each wrapping a size-(N/M) QRAM circuit of the
// given subkind with every gate controlled on the top m address wires
// matching the iteration's pattern. m = 0 reduces to the plain circuit,
// m = n to a QROM-like iteration.
Circuit build_hybrid_circuit(int n, int m, Variant subkind, const ClassicalData& data,
                             NoisePolicy policy = NoisePolicy::RoutersOnly);

// Double-query wrapper: full query, bus copied to an ancilla, second
// identical query, ancilla swapped into the bus. Correct even when all
// router, output and input-rail wires start in arbitrary basis labels
// (tree_init_seed draws them deterministically).
Circuit build_double_query_circuit(int n, int levels, const ClassicalData& data,
                                   std::optional<uint64_t> tree_init_seed = std::nullopt,
                                   NoisePolicy policy = NoisePolicy::RoutersOnly);

// Route-in prefix that stops once every address is absorbed and before the
// bus enters the tree: the state at t*, used for entropy profiles.
Circuit build_address_prefix_circuit(int n, Variant variant);

// Sub-layout used for ideal outputs and fidelity grouping: address[n]+bus[1].
std::shared_ptr<const WireLayout> address_bus_layout(int n, int dim);

// The ideal query output over address (x) bus. ZeroXTilde (and QROM, and the
// three-level double query) yield sum_i a_i |i>|x_i>; PlusZ (and the
// two-level double query) yield sum_i a_i |i>(|0> + (-1)^{x_i}|1>)/sqrt(2).
SparseState ideal_output(const std::vector<std::pair<uint64_t, Complex>>& address_amps,
                         const ClassicalData& data, CopyVariant copy_variant, int dim);

// Ideal output matching a built circuit's copy variant and dimension.
SparseState ideal_output_for(const Circuit& circuit,
                             const std::vector<std::pair<uint64_t, Complex>>& address_amps);

}  // namespace qramsim
