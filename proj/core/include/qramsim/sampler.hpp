#pragma once

#include <span>
#include <string>
#include <vector>

#include "qramsim/channel.hpp"
#include "qramsim/rng.hpp"
#include "qramsim/sparse_state.hpp"

namespace qramsim {

struct ErrorEvent {
    int round = 0;
    uint32_t wire = 0;
    int kraus_index = 0;
};

// The sampled record of which Kraus index hit which wire at which round,
// plus the weighted good-branch fraction diagnostic for tree circuits.
struct ErrorConfig {
    std::vector<ErrorEvent> events;  // sorted by (round, wire)
    double lambda_good = 1.0;

    std::string to_json() const;
};

// One noise round: for every listed wire, independently samples a Kraus index
// from the current state (p_m = sum over terms of |amp|^2 (K^dag K)_vv) and
// applies the sampled operator, merging colliding labels and renormalizing.
// Returns every (wire, m) with m > 0. Requires diagonal Kraus weights.
std::vector<std::pair<uint32_t, int>> sample_round(SparseState& state,
                                                   std::span<const uint32_t> noisy_wires,
                                                   const KrausChannel& ch, Rng& rng);

// Deterministic test hook: applies K_m / sqrt(<K_m^dag K_m>) to one wire.
// Throws if the operator annihilates the state.
void inject_error(SparseState& state, uint32_t wire, int kraus_index, const KrausChannel& ch);

// Internal primitive shared by the samplers: applies K_m to `wire` without
// renormalizing; returns false if the state was annihilated.
bool apply_kraus_unnormalized(SparseState& state, uint32_t wire, const KrausOp& op);

}  // namespace qramsim
