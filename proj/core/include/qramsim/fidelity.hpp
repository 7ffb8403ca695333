#pragma once

#include <optional>
#include <vector>

#include "qramsim/builders.hpp"
#include "qramsim/channel.hpp"
#include "qramsim/circuit.hpp"
#include "qramsim/sampler.hpp"

namespace qramsim {

// Per-configuration query fidelity F(c): final terms are grouped by their
// ancilla sub-label f and F(c) = sum_f |<ideal | (address (x) bus part of group f)>|^2.
double config_fidelity(const SparseState& final_state, const SparseState& ideal,
                       const std::vector<uint32_t>& ancilla_wires);

// Same quantity without assuming the state is normalized; equals p(c) F(c)
// for the unnormalized trajectory states of exhaustive enumeration.
double config_fidelity_unnormalized(const SparseState& final_state, const SparseState& ideal,
                                    const std::vector<uint32_t>& ancilla_wires);

// Restricts noise to an explicit list of (round, wire) locations; the default
// (unrestricted) applies the channel to every noisy wire each round.
struct NoiseSites {
    bool restricted = false;
    std::vector<std::pair<int, uint32_t>> sites;

    static NoiseSites at(std::vector<std::pair<int, uint32_t>> sites) {
        return NoiseSites{true, std::move(sites)};
    }
};

struct TrajectoryResult {
    double fidelity = 0.0;
    ErrorConfig config;
};

// One Monte-Carlo trajectory: builds the initial state, interleaves blocks
// with sampled noise rounds, and evaluates F(c) against the ideal output.
// Identical (circuit, channel, amps, seed) always produce identical results.
TrajectoryResult run_trajectory(const Circuit& circuit, const KrausChannel& channel,
                                const std::vector<std::pair<uint64_t, Complex>>& address_amps,
                                uint64_t seed, const NoiseSites& sites = {});

// Weighted fraction of good branches: a branch is bad once any router on its
// path records a Kraus index m > 0 at any round. Non-tree circuits report 1
// for empty configurations and 0 otherwise (diagnostic only).
double lambda_good(const Circuit& circuit, const std::vector<ErrorEvent>& events,
                   const std::vector<std::pair<uint64_t, Complex>>& address_amps);

struct FidelityEstimate {
    double mean_fidelity = 0.0;
    double std_error = 0.0;
    uint64_t samples = 0;
    uint64_t master_seed = 0;
    // Retained for bootstrap-style analysis when samples <= 1e5.
    std::vector<double> per_sample;
};

// Mean and standard error over independent trajectories with per-trajectory
// seeds derived from (master_seed, index); the result is bit-stable across
// worker counts (ordered Kahan reduction).
FidelityEstimate estimate_fidelity(const Circuit& circuit, const KrausChannel& channel,
                                   const std::vector<std::pair<uint64_t, Complex>>& address_amps,
                                   uint64_t samples, uint64_t master_seed, int workers);

// Analytic bounds and reference scalings evaluated at the given parameters.
struct BoundReport {
    double epsilon = 0.0;
    double epsilon_w = 0.0;
    int T = 0;
    int n = 0;
    int M = 1;

    double bound_mixed_unitary = 0.0;   // 4 eps T n
    double bound_two_level = 0.0;       // 4 eps T (n + n^2)
    double a_prime = 0.0;               // 6 - 2 eps_w / eps
    double bound_general = 0.0;         // A' eps T n
    double bound_logical = 0.0;         // 4 eps_L T_L n with eps_L, T_L = inputs
    double scaling_fanout = 0.0;        // eps N T
    double scaling_qrom = 0.0;          // eps N n^2
    double scaling_hybrid_fanout = 0.0; // eps (N n + M n^2)
    double scaling_hybrid_bb = 0.0;     // eps M n^2
    bool regime_valid = true;           // eps T n <= 1/4
    bool general_bound_valid = true;    // eps_w <= 3 eps
};
BoundReport bounds(double epsilon, double epsilon_w, int T, int n, int M);

// Least-squares fit of log10(infidelity) against log10(log2 N) on points with
// log2 N >= min_logN, so the slope is the polylog exponent alpha in
// 1 - F ~ log^alpha N.
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    int points_used = 0;
    double min_logN = 3.0;
};
ScalingFit loglog_fit(const std::vector<std::pair<double, double>>& points_logN_infid,
                      double min_logN = 3.0);

// Entanglement entropy of one representative router per level, for the
// noiseless uniform query at t* (addresses routed, bus not yet injected).
std::vector<std::pair<int, double>> entropy_profile(int n, Variant variant);

// Closed form for the bucket-brigade profile: the level-l router is active in
// a fraction p = 2^-l of branches, S = -(1-p) log2(1-p) + p (l + 1).
double bb_entropy_closed_form(int level);

}  // namespace qramsim
