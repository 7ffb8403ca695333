#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qramsim/sparse_state.hpp"

namespace qramsim {

enum class ChannelKind : uint8_t { Depolarizing, BitFlip, Dephasing, Damping, Heating };

const char* channel_kind_name(ChannelKind k);
ChannelKind channel_kind_from_name(const std::string& name);

// One Kraus operator, at most 3x3, with the per-column action cached for the
// basis-preserving fast path: column v either maps to (col_target[v],
// col_scale[v]) or annihilates (target -1).
struct KrausOp {
    int dim = 0;
    Complex m[9] = {};

    Complex& at(int r, int c) { return m[r * dim + c]; }
    Complex at(int r, int c) const { return m[r * dim + c]; }

    int8_t col_target[3] = {-1, -1, -1};
    Complex col_scale[3] = {};
    double weight[3] = {};  // diagonal of K^dag K
    bool injective = true;  // distinct columns map to distinct rows
};

struct ChannelDiagnostics {
    double completeness_residual = 0.0;
    bool mixed_unitary = false;
    bool basis_preserving = false;
    bool diagonal_weights = false;
    double epsilon_w = 0.0;
    bool sampler_supported = false;
};

// A completely positive trace-preserving map given by its Kraus operators,
// with the flags the sampler and the bounds need. epsilon_w is the weight the
// no-error operator removes from the wait state (|0> on qubit wires).
struct KrausChannel {
    ChannelKind kind = ChannelKind::Dephasing;
    int dim = 2;
    double epsilon = 0.0;
    std::vector<KrausOp> ops;

    bool mixed_unitary = false;
    bool basis_preserving = false;
    bool diagonal_weights = false;
    double epsilon_w = 0.0;
    double completeness_residual = 0.0;
    // True when every K^dag K is proportional to I, so error probabilities do
    // not depend on the state and sampling skips the per-wire weight pass.
    bool state_independent_probs = false;

    size_t kraus_count() const { return ops.size(); }
};

// The exact Appendix-style decompositions for qubit (dim 2) and qutrit
// (dim 3) depolarizing, bit-flip, dephasing, damping and heating channels.
KrausChannel make_channel(ChannelKind kind, int dim, double epsilon);

// Builds a channel from explicit matrices (test hook for broken lists);
// matrices are row-major dim x dim.
KrausChannel channel_from_matrices(ChannelKind kind, int dim, double epsilon,
                                   const std::vector<std::vector<Complex>>& matrices);

// Report-only diagnostics; sampler_supported is false when any K^dag K is
// non-diagonal (such channels are rejected rather than approximated).
ChannelDiagnostics verify_channel(const KrausChannel& ch);

}  // namespace qramsim
