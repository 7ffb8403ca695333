#pragma once

#include <vector>

#include "qramsim/builders.hpp"
#include "qramsim/channel.hpp"
#include "qramsim/circuit.hpp"

namespace qramsim {

// Brute-force reference simulators. No performance ambitions: these exist to
// validate the sparse engine and the Monte-Carlo estimator on instances small
// enough to enumerate.

inline constexpr uint64_t kDenseStateGuard = 1ull << 24;
inline constexpr uint64_t kDenseRhoGuard = 8192;

struct DenseState {
    std::shared_ptr<const WireLayout> layout;
    std::vector<Complex> amps;  // mixed-radix, wire 0 most significant

    double norm_sq() const;
};

struct DenseDensityMatrix {
    std::shared_ptr<const WireLayout> layout;
    uint64_t dim = 0;
    std::vector<Complex> rho;  // row-major dim x dim

    double trace_real() const;
};

uint64_t dense_dimension(const WireLayout& layout);
std::vector<uint64_t> wire_strides(const WireLayout& layout);

DenseState dense_from_sparse(const SparseState& state);
// Largest |dense amplitude - sparse amplitude| over the full index space.
double max_amplitude_deviation(const DenseState& dense, const SparseState& sparse);

// Applies every gate as an explicit permutation-with-sign on the amplitude
// array. Throws when the dimension guard is violated.
DenseState dense_unitary_sim(const Circuit& circuit, const DenseState& initial);

// Exact channel evolution rho -> sum_m K rho K^dag on every noisy wire at
// every noise round, plus the exact query fidelity
// F = <psi_out| Tr_anc rho |psi_out> against the circuit's ideal output.
struct DenseChannelResult {
    DenseDensityMatrix rho;
    double fidelity = 0.0;
};
DenseChannelResult dense_channel_sim(const Circuit& circuit, const KrausChannel& channel,
                                     const std::vector<std::pair<uint64_t, Complex>>& address_amps);

// Exact F = sum_c p(c) F(c) by exhaustive enumeration of Kraus assignments at
// the allowed (round, wire) locations, identity elsewhere. Uses the sparse
// engine per configuration; guard: kraus_count^|locations| <= 1e6.
double enumerate_configs_fidelity(const Circuit& circuit, const KrausChannel& channel,
                                  const std::vector<std::pair<int, uint32_t>>& allowed_locations,
                                  const std::vector<std::pair<uint64_t, Complex>>& address_amps);

}  // namespace qramsim
