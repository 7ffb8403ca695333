#include "qramsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qramsim {

namespace {

constexpr double kFlagTol = 1e-12;

KrausOp op_from_entries(int dim, std::initializer_list<Complex> entries) {
    KrausOp op;
    op.dim = dim;
    int i = 0;
    for (Complex e : entries) op.m[i++] = e;
    return op;
}

KrausOp matmul(const KrausOp& a, const KrausOp& b) {
    KrausOp out;
    out.dim = a.dim;
    for (int r = 0; r < a.dim; ++r)
        for (int c = 0; c < a.dim; ++c) {
            Complex s = 0.0;
            for (int k = 0; k < a.dim; ++k) s += a.at(r, k) * b.at(k, c);
            out.at(r, c) = s;
        }
    return out;
}

KrausOp scaled(KrausOp op, double s) {
    for (int i = 0; i < op.dim * op.dim; ++i) op.m[i] *= s;
    return op;
}

void finalize_op(KrausOp& op) {
    for (int c = 0; c < op.dim; ++c) {
        op.col_target[c] = -1;
        op.col_scale[c] = 0.0;
        double w = 0.0;
        for (int r = 0; r < op.dim; ++r) {
            const Complex e = op.at(r, c);
            w += std::norm(e);
            if (std::abs(e) > kFlagTol) {
                op.col_target[c] = static_cast<int8_t>(r);
                op.col_scale[c] = e;
            }
        }
        op.weight[c] = w;
    }
    op.injective = true;
    for (int c = 0; c < op.dim; ++c)
        for (int c2 = c + 1; c2 < op.dim; ++c2)
            if (op.col_target[c] >= 0 && op.col_target[c] == op.col_target[c2])
                op.injective = false;
}

void finalize_channel(KrausChannel& ch) {
    for (KrausOp& op : ch.ops) finalize_op(op);

    // Completeness residual: max entry of |sum K^dag K - I|.
    const int d = ch.dim;
    Complex sum[9] = {};
    for (const KrausOp& op : ch.ops)
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                Complex s = 0.0;
                for (int k = 0; k < d; ++k) s += std::conj(op.at(k, r)) * op.at(k, c);
                sum[r * d + c] += s;
            }
    double residual = 0.0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const Complex expect = r == c ? Complex(1.0) : Complex(0.0);
            residual = std::max(residual, std::abs(sum[r * d + c] - expect));
        }
    ch.completeness_residual = residual;

    // basis-preserving: at most one nonzero entry per column of every K.
    ch.basis_preserving = true;
    for (const KrausOp& op : ch.ops)
        for (int c = 0; c < d; ++c) {
            int nz = 0;
            for (int r = 0; r < d; ++r)
                if (std::abs(op.at(r, c)) > kFlagTol) ++nz;
            if (nz > 1) ch.basis_preserving = false;
        }

    // diagonal weights: every K^dag K diagonal.
    ch.diagonal_weights = true;
    for (const KrausOp& op : ch.ops)
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                if (r == c) continue;
                Complex s = 0.0;
                for (int k = 0; k < d; ++k) s += std::conj(op.at(k, r)) * op.at(k, c);
                if (std::abs(s) > kFlagTol) ch.diagonal_weights = false;
            }

    // mixed-unitary: K0 proportional to I, every K_{m>0}^dag K_{m>0}
    // proportional to I.
    auto proportional_to_identity = [&](const KrausOp& op) {
        const Complex ref = op.at(0, 0);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                const Complex expect = r == c ? ref : Complex(0.0);
                if (std::abs(op.at(r, c) - expect) > kFlagTol) return false;
            }
        return true;
    };
    ch.mixed_unitary = !ch.ops.empty() && proportional_to_identity(ch.ops[0]);
    ch.state_independent_probs = true;
    for (size_t i = 0; i < ch.ops.size(); ++i) {
        const KrausOp& op = ch.ops[i];
        double ref = op.weight[0];
        bool uniform = true;
        for (int c = 1; c < d; ++c)
            if (std::abs(op.weight[c] - ref) > kFlagTol) uniform = false;
        if (!uniform) ch.state_independent_probs = false;
        if (i > 0 && ch.mixed_unitary) {
            // unitarity up to scale: K^dag K = w I and basis check above
            KrausOp prod;
            prod.dim = d;
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    Complex s = 0.0;
                    for (int k = 0; k < d; ++k) s += std::conj(op.at(k, r)) * op.at(k, c);
                    prod.at(r, c) = s;
                }
            for (int r = 0; r < d && ch.mixed_unitary; ++r)
                for (int c = 0; c < d; ++c) {
                    const Complex expect = r == c ? Complex(ref) : Complex(0.0);
                    if (std::abs(prod.at(r, c) - expect) > kFlagTol) {
                        ch.mixed_unitary = false;
                        break;
                    }
                }
        }
    }

    // epsilon_w = 1 - <W|K0^dag K0|W>; the wait state is value 0 on qutrits
    // and |0> plays its role on qubits.
    ch.epsilon_w = ch.ops.empty() ? 0.0 : 1.0 - ch.ops[0].weight[0];
    if (std::abs(ch.epsilon_w) < 1e-15) ch.epsilon_w = 0.0;
}

}  // namespace

const char* channel_kind_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::Depolarizing: return "DEPOLARIZING";
        case ChannelKind::BitFlip: return "BIT_FLIP";
        case ChannelKind::Dephasing: return "DEPHASING";
        case ChannelKind::Damping: return "DAMPING";
        case ChannelKind::Heating: return "HEATING";
    }
    return "?";
}

ChannelKind channel_kind_from_name(const std::string& name) {
    if (name == "DEPOLARIZING") return ChannelKind::Depolarizing;
    if (name == "BIT_FLIP") return ChannelKind::BitFlip;
    if (name == "DEPHASING") return ChannelKind::Dephasing;
    if (name == "DAMPING") return ChannelKind::Damping;
    if (name == "HEATING") return ChannelKind::Heating;
    throw std::invalid_argument("unknown channel kind: " + name);
}

KrausChannel make_channel(ChannelKind kind, int dim, double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (dim != 2 && dim != 3) throw std::invalid_argument("channel dimension must be 2 or 3");

    KrausChannel ch;
    ch.kind = kind;
    ch.dim = dim;
    ch.epsilon = epsilon;
    const double s0 = std::sqrt(1.0 - epsilon);
    const double se = std::sqrt(epsilon);

    if (dim == 2) {
        const KrausOp I = op_from_entries(2, {1, 0, 0, 1});
        const KrausOp X = op_from_entries(2, {0, 1, 1, 0});
        const KrausOp Y = op_from_entries(2, {0, Complex(0, -1), Complex(0, 1), 0});
        const KrausOp Z = op_from_entries(2, {1, 0, 0, -1});
        switch (kind) {
            case ChannelKind::Depolarizing: {
                const double sp = std::sqrt(epsilon / 3.0);
                ch.ops = {scaled(I, s0), scaled(X, sp), scaled(Y, sp), scaled(Z, sp)};
                break;
            }
            case ChannelKind::BitFlip:
                ch.ops = {scaled(I, s0), scaled(X, se)};
                break;
            case ChannelKind::Dephasing:
                ch.ops = {scaled(I, s0), scaled(Z, se)};
                break;
            case ChannelKind::Damping:
                ch.ops = {op_from_entries(2, {1, 0, 0, s0}), op_from_entries(2, {0, se, 0, 0})};
                break;
            case ChannelKind::Heating:
                ch.ops = {op_from_entries(2, {s0, 0, 0, 1}), op_from_entries(2, {0, 0, se, 0})};
                break;
        }
    } else {
        // Written in the {|W>, |0>, |1>} basis, omega = exp(2 pi i / 3).
        const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
        const KrausOp I = op_from_entries(3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
        const KrausOp A1 = op_from_entries(3, {0, 1, 0, 0, 0, 1, 1, 0, 0});
        const KrausOp A2 = op_from_entries(3, {1, 0, 0, 0, w, 0, 0, 0, w * w});
        switch (kind) {
            case ChannelKind::Depolarizing: {
                const double sp = std::sqrt(epsilon / 8.0);
                const KrausOp A1sq = matmul(A1, A1);
                const KrausOp A2sq = matmul(A2, A2);
                ch.ops = {scaled(I, s0),
                          scaled(A1, sp),
                          scaled(A2, sp),
                          scaled(A1sq, sp),
                          scaled(A2sq, sp),
                          scaled(matmul(A1, A2), sp),
                          scaled(matmul(A1sq, A2), sp),
                          scaled(matmul(A1, A2sq), sp),
                          scaled(matmul(A1sq, A2sq), sp)};
                break;
            }
            case ChannelKind::BitFlip:
                // K1 = sqrt(eps)(|0><1| + |1><0|) annihilates |W>; the
                // printed two-operator set is not trace preserving on the
                // wait subspace, so the channel is completed with
                // sqrt(eps)|W><W|. epsilon_w stays epsilon and the bound
                // coefficient matches the mixed-unitary value.
                ch.ops = {scaled(I, s0), op_from_entries(3, {0, 0, 0, 0, 0, se, 0, se, 0}),
                          op_from_entries(3, {se, 0, 0, 0, 0, 0, 0, 0, 0})};
                break;
            case ChannelKind::Dephasing: {
                const double sp = std::sqrt(epsilon / 2.0);
                ch.ops = {scaled(I, s0), scaled(A2, sp), scaled(matmul(A2, A2), sp)};
                break;
            }
            case ChannelKind::Damping:
                ch.ops = {op_from_entries(3, {1, 0, 0, 0, s0, 0, 0, 0, s0}),
                          op_from_entries(3, {0, se, 0, 0, 0, 0, 0, 0, 0}),
                          op_from_entries(3, {0, 0, se, 0, 0, 0, 0, 0, 0})};
                break;
            case ChannelKind::Heating: {
                const double sh = std::sqrt(epsilon / 2.0);
                ch.ops = {op_from_entries(3, {s0, 0, 0, 0, 1, 0, 0, 0, 1}),
                          op_from_entries(3, {0, 0, 0, sh, 0, 0, 0, 0, 0}),
                          op_from_entries(3, {0, 0, 0, 0, 0, 0, sh, 0, 0})};
                break;
            }
        }
    }
    finalize_channel(ch);
    return ch;
}

KrausChannel channel_from_matrices(ChannelKind kind, int dim, double epsilon,
                                   const std::vector<std::vector<Complex>>& matrices) {
    KrausChannel ch;
    ch.kind = kind;
    ch.dim = dim;
    ch.epsilon = epsilon;
    for (const auto& mat : matrices) {
        if (mat.size() != static_cast<size_t>(dim * dim))
            throw std::invalid_argument("kraus matrix has wrong size");
        KrausOp op;
        op.dim = dim;
        for (int i = 0; i < dim * dim; ++i) op.m[i] = mat[i];
        ch.ops.push_back(op);
    }
    finalize_channel(ch);
    return ch;
}

ChannelDiagnostics verify_channel(const KrausChannel& ch) {
    ChannelDiagnostics d;
    d.completeness_residual = ch.completeness_residual;
    d.mixed_unitary = ch.mixed_unitary;
    d.basis_preserving = ch.basis_preserving;
    d.diagonal_weights = ch.diagonal_weights;
    d.epsilon_w = ch.epsilon_w;
    d.sampler_supported = ch.diagonal_weights && ch.basis_preserving;
    return d;
}

}  // namespace qramsim
