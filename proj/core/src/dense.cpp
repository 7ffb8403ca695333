#include "qramsim/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "qramsim/fidelity.hpp"

namespace qramsim {

namespace {

uint64_t label_to_index(const BasisLabel& label, const std::vector<uint64_t>& strides) {
    uint64_t idx = 0;
    for (uint32_t w = 0; w < label.size(); ++w) idx += label.get(w) * strides[w];
    return idx;
}

// Local action of a gate over its support wires: per local code, the index
// shift, the sign, and the image code (gates are involutions, so applying to
// an index and to its image partner covers every moved amplitude once).
struct LocalAction {
    std::vector<uint32_t> support;
    std::vector<uint64_t> place;  // mixed-radix weight of each support wire
    std::vector<int64_t> delta;
    std::vector<int8_t> sign;
    std::vector<uint32_t> image;
};

LocalAction tabulate_gate(const Gate& gate, const WireLayout& lay,
                          const std::vector<uint64_t>& strides) {
    LocalAction act;
    act.support = gate.support();
    uint64_t local_dim = 1;
    act.place.resize(act.support.size());
    for (size_t i = 0; i < act.support.size(); ++i) {
        act.place[i] = local_dim;
        local_dim *= lay.wire_dim(act.support[i]);
    }
    act.delta.resize(local_dim);
    act.sign.resize(local_dim);
    act.image.resize(local_dim);
    BasisLabel scratch(lay.wire_count());
    std::vector<uint8_t> values(act.support.size());
    for (uint64_t code = 0; code < local_dim; ++code) {
        uint64_t rest = code;
        for (size_t i = 0; i < act.support.size(); ++i) {
            values[i] = static_cast<uint8_t>(rest % lay.wire_dim(act.support[i]));
            rest /= lay.wire_dim(act.support[i]);
            scratch.set(act.support[i], values[i]);
        }
        const int s = gate.apply(scratch, lay);
        int64_t delta = 0;
        uint64_t image = 0;
        for (size_t i = 0; i < act.support.size(); ++i) {
            const uint8_t out = scratch.get(act.support[i]);
            delta += (static_cast<int64_t>(out) - static_cast<int64_t>(values[i])) *
                     static_cast<int64_t>(strides[act.support[i]]);
            image += out * act.place[i];
        }
        act.delta[code] = delta;
        act.sign[code] = static_cast<int8_t>(s);
        act.image[code] = static_cast<uint32_t>(image);
    }
    return act;
}

// Mixed-radix odometer over all wires that exposes the local code of the
// support wires without per-index divisions.
class SupportOdometer {
  public:
    SupportOdometer(const WireLayout& lay, const LocalAction& act)
        : dims_(lay.wire_dims()), digits_(lay.wire_count(), 0), weight_(lay.wire_count(), 0) {
        for (size_t i = 0; i < act.support.size(); ++i) weight_[act.support[i]] = act.place[i];
    }

    uint64_t code() const { return code_; }

    void advance() {
        // Wire order matches index order: the last wire is least significant.
        for (uint32_t w = static_cast<uint32_t>(digits_.size()); w-- > 0;) {
            if (++digits_[w] < dims_[w]) {
                code_ += weight_[w];
                return;
            }
            digits_[w] = 0;
            code_ -= weight_[w] * (dims_[w] - 1);
        }
    }

  private:
    std::vector<uint8_t> dims_;
    std::vector<uint8_t> digits_;
    std::vector<uint64_t> weight_;
    uint64_t code_ = 0;
};

// In-place application: every gate kind is an involution, so indices pair up
// with their images and each pair is visited from its lower member.
void apply_gate_dense(const Gate& gate, const WireLayout& lay,
                      const std::vector<uint64_t>& strides, std::vector<Complex>& amps) {
    const LocalAction act = tabulate_gate(gate, lay, strides);
    SupportOdometer odo(lay, act);
    const uint64_t dim = amps.size();
    for (uint64_t idx = 0; idx < dim; ++idx, odo.advance()) {
        const uint64_t code = odo.code();
        const int64_t d = act.delta[code];
        if (d == 0) {
            if (act.sign[code] < 0) amps[idx] = -amps[idx];
            continue;
        }
        if (d < 0) continue;  // handled from the partner index
        const uint64_t partner = idx + static_cast<uint64_t>(d);
        const Complex tmp = amps[idx];
        const int8_t s_fwd = act.sign[code];
        const int8_t s_bwd = act.sign[act.image[code]];
        amps[idx] = s_bwd > 0 ? amps[partner] : -amps[partner];
        amps[partner] = s_fwd > 0 ? tmp : -tmp;
    }
}

std::vector<Complex> ideal_dense_address_bus(const Circuit& circuit,
                                             const std::vector<std::pair<uint64_t, Complex>>& amps,
                                             uint64_t* out_dim) {
    const SparseState ideal = ideal_output_for(circuit, amps);
    const uint64_t dim = dense_dimension(ideal.layout());
    const auto strides = wire_strides(ideal.layout());
    std::vector<Complex> psi(dim, 0.0);
    for (const Term& t : ideal.terms()) psi[label_to_index(t.label, strides)] = t.amp;
    *out_dim = dim;
    return psi;
}

}  // namespace

double DenseState::norm_sq() const {
    double s = 0.0;
    for (const Complex& a : amps) s += std::norm(a);
    return s;
}

double DenseDensityMatrix::trace_real() const {
    double t = 0.0;
    for (uint64_t i = 0; i < dim; ++i) t += rho[i * dim + i].real();
    return t;
}

uint64_t dense_dimension(const WireLayout& layout) {
    uint64_t d = 1;
    for (uint8_t wd : layout.wire_dims()) {
        d *= wd;
        if (d > (kDenseStateGuard << 8)) break;
    }
    return d;
}

std::vector<uint64_t> wire_strides(const WireLayout& layout) {
    std::vector<uint64_t> strides(layout.wire_count());
    uint64_t s = 1;
    for (uint32_t w = layout.wire_count(); w-- > 0;) {
        strides[w] = s;
        s *= layout.wire_dim(w);
    }
    return strides;
}

DenseState dense_from_sparse(const SparseState& state) {
    const uint64_t dim = dense_dimension(state.layout());
    if (dim > kDenseStateGuard) throw std::runtime_error("dense state dimension guard violated");
    DenseState out;
    out.layout = state.layout_ptr();
    out.amps.assign(dim, 0.0);
    const auto strides = wire_strides(state.layout());
    for (const Term& t : state.terms()) out.amps[label_to_index(t.label, strides)] += t.amp;
    return out;
}

double max_amplitude_deviation(const DenseState& dense, const SparseState& sparse) {
    const auto strides = wire_strides(sparse.layout());
    std::vector<Complex> sp(dense.amps.size(), 0.0);
    for (const Term& t : sparse.terms()) sp[label_to_index(t.label, strides)] += t.amp;
    double dev = 0.0;
    for (size_t i = 0; i < dense.amps.size(); ++i)
        dev = std::max(dev, std::abs(dense.amps[i] - sp[i]));
    return dev;
}

DenseState dense_unitary_sim(const Circuit& circuit, const DenseState& initial) {
    const WireLayout& lay = *circuit.layout;
    const uint64_t dim = dense_dimension(lay);
    if (dim > kDenseStateGuard) throw std::runtime_error("dense state dimension guard violated");
    if (initial.amps.size() != dim) throw std::invalid_argument("dense initial state has wrong size");

    DenseState out;
    out.layout = circuit.layout;
    out.amps = initial.amps;
    const auto strides = wire_strides(lay);
    for (const Block& block : circuit.blocks) {
        for (const Layer& layer : block.layers) {
            for (const Gate& gate : layer.gates) apply_gate_dense(gate, lay, strides, out.amps);
        }
    }
    return out;
}

DenseChannelResult dense_channel_sim(const Circuit& circuit, const KrausChannel& channel,
                                     const std::vector<std::pair<uint64_t, Complex>>& address_amps) {
    const WireLayout& lay = *circuit.layout;
    const uint64_t dim = dense_dimension(lay);
    if (dim > kDenseRhoGuard) throw std::runtime_error("dense density-matrix guard violated");
    if (channel.dim != lay.dim()) throw std::invalid_argument("channel/layout dimension mismatch");

    const auto strides = wire_strides(lay);
    const DenseState init = dense_from_sparse(initial_state(circuit, address_amps));

    std::vector<Complex> rho(dim * dim, 0.0);
    for (uint64_t i = 0; i < dim; ++i)
        for (uint64_t j = 0; j < dim; ++j) rho[i * dim + j] = init.amps[i] * std::conj(init.amps[j]);
    std::vector<Complex> scratch(dim * dim);

    std::vector<uint32_t> perm(dim);
    std::vector<int8_t> sign(dim);
    auto apply_gate_rho = [&](const Gate& gate) {
        const LocalAction act = tabulate_gate(gate, lay, strides);
        SupportOdometer odo(lay, act);
        for (uint64_t i = 0; i < dim; ++i, odo.advance()) {
            const uint64_t code = odo.code();
            perm[i] = static_cast<uint32_t>(static_cast<int64_t>(i) + act.delta[code]);
            sign[i] = act.sign[code];
        }
        for (uint64_t i = 0; i < dim; ++i) {
            const uint64_t pi = perm[i];
            const double si = sign[i];
            const Complex* row = &rho[i * dim];
            Complex* out_row = &scratch[pi * dim];
            for (uint64_t j = 0; j < dim; ++j) {
                out_row[perm[j]] = row[j] * (si * sign[j]);
            }
        }
        rho.swap(scratch);
    };

    auto apply_channel_wire = [&](uint32_t wire) {
        const uint64_t stride = strides[wire];
        const int d = lay.wire_dim(wire);
        std::fill(scratch.begin(), scratch.end(), Complex(0.0));
        for (const KrausOp& op : channel.ops) {
            for (uint64_t i = 0; i < dim; ++i) {
                const int vi = static_cast<int>((i / stride) % d);
                if (op.col_target[vi] < 0) continue;
                const uint64_t ti = i + static_cast<uint64_t>(op.col_target[vi] - vi) * stride;
                const Complex ki = op.col_scale[vi];
                const Complex* row = &rho[i * dim];
                Complex* out_row = &scratch[ti * dim];
                for (uint64_t j = 0; j < dim; ++j) {
                    const int vj = static_cast<int>((j / stride) % d);
                    if (op.col_target[vj] < 0) continue;
                    const uint64_t tj = j + static_cast<uint64_t>(op.col_target[vj] - vj) * stride;
                    out_row[tj] += ki * std::conj(op.col_scale[vj]) * row[j];
                }
            }
        }
        rho.swap(scratch);
    };

    for (const Block& block : circuit.blocks) {
        for (const Layer& layer : block.layers)
            for (const Gate& gate : layer.gates) apply_gate_rho(gate);
        for (int r = 0; r < block.noise_rounds; ++r)
            for (uint32_t w : circuit.noisy_wires) apply_channel_wire(w);
    }

    // F = <psi_out| Tr_anc rho |psi_out>, computed by summing entry pairs
    // whose ancilla sub-labels agree.
    uint64_t ab_dim = 0;
    const std::vector<Complex> psi = ideal_dense_address_bus(circuit, address_amps, &ab_dim);
    std::vector<uint32_t> ab_code(dim), anc_code(dim);
    {
        const auto anc = lay.ancilla_wires();
        std::vector<uint32_t> ab_wires;
        for (int b = 0; b < lay.address_bits(); ++b) ab_wires.push_back(lay.address_wire(b));
        ab_wires.push_back(lay.bus_wire());
        for (uint64_t i = 0; i < dim; ++i) {
            uint32_t abc = 0;
            for (uint32_t w : ab_wires)
                abc = abc * lay.wire_dim(w) + static_cast<uint32_t>((i / strides[w]) % lay.wire_dim(w));
            uint32_t ac = 0;
            for (uint32_t w : anc)
                ac = ac * lay.wire_dim(w) + static_cast<uint32_t>((i / strides[w]) % lay.wire_dim(w));
            ab_code[i] = abc;
            anc_code[i] = ac;
        }
    }
    Complex f = 0.0;
    for (uint64_t i = 0; i < dim; ++i) {
        const Complex pi = std::conj(psi[ab_code[i]]);
        if (pi == Complex(0.0)) continue;
        const Complex* row = &rho[i * dim];
        const uint32_t anci = anc_code[i];
        for (uint64_t j = 0; j < dim; ++j) {
            if (anc_code[j] != anci) continue;
            const Complex pj = psi[ab_code[j]];
            if (pj == Complex(0.0)) continue;
            f += pi * row[j] * pj;
        }
    }

    DenseChannelResult result;
    result.rho.layout = circuit.layout;
    result.rho.dim = dim;
    result.rho.rho = std::move(rho);
    result.fidelity = f.real();
    return result;
}

double enumerate_configs_fidelity(const Circuit& circuit, const KrausChannel& channel,
                                  const std::vector<std::pair<int, uint32_t>>& allowed_locations,
                                  const std::vector<std::pair<uint64_t, Complex>>& address_amps) {
    const size_t n_ops = channel.ops.size();
    double combos = 1.0;
    for (size_t i = 0; i < allowed_locations.size(); ++i) combos *= static_cast<double>(n_ops);
    if (combos > 1e6) throw std::runtime_error("enumerate_configs_fidelity: combinatorial guard");

    const SparseState ideal = ideal_output_for(circuit, address_amps);
    const std::vector<uint32_t> anc = circuit.layout->ancilla_wires();
    const SparseState init = initial_state(circuit, address_amps);

    const uint64_t total = static_cast<uint64_t>(combos);
    double fidelity = 0.0;
    double prob_check = 0.0;
    std::vector<int> assignment(allowed_locations.size());
    for (uint64_t config = 0; config < total; ++config) {
        uint64_t rest = config;
        for (size_t i = 0; i < assignment.size(); ++i) {
            assignment[i] = static_cast<int>(rest % n_ops);
            rest /= n_ops;
        }
        SparseState state = init;
        bool annihilated = false;
        run_circuit(circuit, state, [&](int round, SparseState& s) {
            if (annihilated) return;
            for (size_t i = 0; i < allowed_locations.size(); ++i) {
                if (allowed_locations[i].first != round) continue;
                if (!apply_kraus_unnormalized(s, allowed_locations[i].second,
                                              channel.ops[assignment[i]])) {
                    annihilated = true;
                    return;
                }
            }
        });
        if (annihilated) continue;
        const double p = state.norm_sq();
        if (p <= 1e-300) continue;
        prob_check += p;
        // F(c) on the normalized state, weighted by p(c): computed directly
        // on the unnormalized state.
        fidelity += config_fidelity_unnormalized(state, ideal, anc);
    }
    if (std::abs(prob_check - 1.0) > 1e-9)
        throw std::runtime_error("enumerate_configs_fidelity: probabilities do not sum to 1");
    return fidelity;
}

}  // namespace qramsim
