#include "qramsim/sampler.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace qramsim {

std::string ErrorConfig::to_json() const {
    nlohmann::json j;
    j["lambda_good"] = lambda_good;
    nlohmann::json evs = nlohmann::json::array();
    for (const ErrorEvent& e : events) {
        evs.push_back({{"round", e.round}, {"wire", e.wire}, {"kraus_index", e.kraus_index}});
    }
    j["events"] = evs;
    return j.dump();
}

bool apply_kraus_unnormalized(SparseState& state, uint32_t wire, const KrausOp& op) {
    bool dropped = false;
    bool rewrote = false;
    auto& terms = state.terms_mut();
    for (Term& t : terms) {
        const uint8_t v = t.label.get(wire);
        const int8_t target = op.col_target[v];
        if (target < 0) {
            t.amp = 0.0;
            dropped = true;
            continue;
        }
        if (target != static_cast<int8_t>(v)) {
            t.label.set(wire, static_cast<uint8_t>(target));
            rewrote = true;
        }
        t.amp *= op.col_scale[v];
    }
    if (dropped) {
        std::erase_if(terms, [](const Term& t) { return std::abs(t.amp) <= kAmplitudeDropThreshold; });
        if (terms.empty()) return false;
    }
    if (rewrote && !op.injective) {
        // Damping/heating maps can send distinct local values to the same
        // value; colliding labels must merge or norm silently leaks.
        double before = state.norm_sq();
        state.merge_and_normalize();
        // merge_and_normalize rescales to 1; restore the unnormalized norm.
        const double after = state.norm_sq();
        if (after > 0.0) {
            const double scale = std::sqrt(before / after);
            for (Term& t : state.terms_mut()) t.amp *= scale;
        }
    }
    return true;
}

namespace {

void apply_sampled_kraus(SparseState& state, uint32_t wire, const KrausOp& op) {
    if (!apply_kraus_unnormalized(state, wire, op))
        throw std::runtime_error("sampled Kraus operator annihilated the state");
    state.renormalize();
}

}  // namespace

std::vector<std::pair<uint32_t, int>> sample_round(SparseState& state,
                                                   std::span<const uint32_t> noisy_wires,
                                                   const KrausChannel& ch, Rng& rng) {
    if (!ch.diagonal_weights || !ch.basis_preserving)
        throw std::invalid_argument("sample_round requires basis-preserving diagonal-weight channels");

    std::vector<std::pair<uint32_t, int>> hits;
    const size_t n_ops = ch.ops.size();

    const bool fast_path = ch.state_independent_probs && ch.mixed_unitary;
    for (uint32_t wire : noisy_wires) {
        int chosen;
        if (fast_path) {
            // All K^dag K are proportional to I: the error probability is
            // state independent and the no-error branch needs no rescale.
            double u = rng.next_double();
            chosen = static_cast<int>(n_ops) - 1;
            for (size_t m = 0; m + 1 < n_ops; ++m) {
                u -= ch.ops[m].weight[0];
                if (u < 0.0) {
                    chosen = static_cast<int>(m);
                    break;
                }
            }
            if (chosen == 0) continue;
        } else {
            double mass[3] = {0.0, 0.0, 0.0};
            for (const Term& t : state.terms()) mass[t.label.get(wire)] += std::norm(t.amp);
            double total = 0.0;
            double probs[16];
            for (size_t m = 0; m < n_ops; ++m) {
                double p = 0.0;
                for (int v = 0; v < ch.dim; ++v) p += mass[v] * ch.ops[m].weight[v];
                probs[m] = p;
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw std::runtime_error("sample_round: Kraus probabilities do not sum to 1");
            double u = rng.next_double() * total;
            chosen = static_cast<int>(n_ops) - 1;
            for (size_t m = 0; m + 1 < n_ops; ++m) {
                u -= probs[m];
                if (u < 0.0) {
                    chosen = static_cast<int>(m);
                    break;
                }
            }
        }
        apply_sampled_kraus(state, wire, ch.ops[chosen]);
        if (chosen > 0) hits.emplace_back(wire, chosen);
    }
    return hits;
}

void inject_error(SparseState& state, uint32_t wire, int kraus_index, const KrausChannel& ch) {
    if (kraus_index < 0 || static_cast<size_t>(kraus_index) >= ch.ops.size())
        throw std::invalid_argument("inject_error: kraus index out of range");
    if (wire >= state.layout().wire_count())
        throw std::invalid_argument("inject_error: wire out of range");
    if (!apply_kraus_unnormalized(state, wire, ch.ops[kraus_index]))
        throw std::runtime_error("inject_error: operator annihilates the state");
    if (state.norm_sq() <= kAmplitudeDropThreshold * kAmplitudeDropThreshold)
        throw std::runtime_error("inject_error: operator annihilates the state");
    state.renormalize();
}

}  // namespace qramsim
