#include "qramsim/sparse_state.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qramsim {

double SparseState::norm_sq() const {
    double s = 0.0;
    for (const Term& t : terms_) s += std::norm(t.amp);
    return s;
}

void SparseState::merge_and_normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.label < b.label; });
    size_t out = 0;
    for (size_t i = 0; i < terms_.size();) {
        Complex amp = terms_[i].amp;
        size_t j = i + 1;
        while (j < terms_.size() && terms_[j].label == terms_[i].label) {
            amp += terms_[j].amp;
            ++j;
        }
        if (std::abs(amp) > kAmplitudeDropThreshold) {
            if (out != i) terms_[out].label = std::move(terms_[i].label);
            terms_[out].amp = amp;
            ++out;
        }
        i = j;
    }
    terms_.resize(out);
    renormalize();
}

void SparseState::renormalize() {
    const double n2 = norm_sq();
    if (n2 <= 0.0) throw std::runtime_error("state has zero norm");
    const double inv = 1.0 / std::sqrt(n2);
    if (std::abs(inv - 1.0) > 1e-16) {
        for (Term& t : terms_) t.amp *= inv;
    }
}

SparseState make_state(std::shared_ptr<const WireLayout> layout,
                       const std::vector<std::pair<BasisLabel, Complex>>& terms) {
    if (terms.empty()) throw std::invalid_argument("make_state: empty term list");
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& [label, amp] : terms) {
        if (label.size() != layout->wire_count())
            throw std::invalid_argument("make_state: label length does not match layout");
        for (uint32_t w = 0; w < label.size(); ++w) {
            if (label.get(w) >= layout->wire_dim(w))
                throw std::invalid_argument("make_state: label value exceeds wire dimension");
        }
        out.push_back({label, amp});
    }
    SparseState state(std::move(layout), std::move(out));
    double n2 = state.norm_sq();
    if (n2 <= kAmplitudeDropThreshold) throw std::invalid_argument("make_state: all amplitudes zero");
    state.merge_and_normalize();
    return state;
}

void apply_gate_inplace(SparseState& state, const Gate& gate) {
    const WireLayout& layout = state.layout();
    for (Term& t : state.terms_mut()) {
        const int sign = gate.apply(t.label, layout);
        if (sign < 0) t.amp = -t.amp;
    }
}

SparseState apply_gate(const SparseState& state, const Gate& gate) {
    gate.validate(state.layout());
    SparseState out = state;
    apply_gate_inplace(out, gate);
    return out;
}

Complex inner_product(const SparseState& a, const SparseState& b) {
    if (!a.layout().same_shape(b.layout()))
        throw std::invalid_argument("inner_product: layout mismatch");
    std::unordered_map<BasisLabel, Complex, BasisLabelHash> amap;
    amap.reserve(a.term_count() * 2);
    for (const Term& t : a.terms()) amap.emplace(t.label, t.amp);
    Complex acc = 0.0;
    for (const Term& t : b.terms()) {
        auto it = amap.find(t.label);
        if (it != amap.end()) acc += std::conj(it->second) * t.amp;
    }
    return acc;
}

LocalMatrix reduced_density_matrix(const SparseState& state, uint32_t wire) {
    if (wire >= state.layout().wire_count())
        throw std::invalid_argument("reduced_density_matrix: wire out of range");
    const int d = state.layout().wire_dim(wire);

    // Group terms by the label with `wire` zeroed; each group contributes the
    // outer product of its local amplitude vector.
    struct Group {
        Complex v[3] = {};
    };
    std::unordered_map<BasisLabel, Group, BasisLabelHash> groups;
    groups.reserve(state.term_count() * 2);
    for (const Term& t : state.terms()) {
        BasisLabel key = t.label;
        const uint8_t v = key.get(wire);
        key.set(wire, 0);
        groups[key].v[v] += t.amp;
    }
    LocalMatrix rho;
    rho.d = d;
    for (const auto& [key, g] : groups) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) rho.at(r, c) += g.v[r] * std::conj(g.v[c]);
    }
    return rho;
}

double entanglement_entropy(const LocalMatrix& rho) {
    const int d = rho.d;
    Eigen::MatrixXcd m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = rho.at(r, c);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("entanglement_entropy: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (lambda > 1e-15) s -= lambda * std::log2(lambda);
    }
    if (s < 0.0 && s > -1e-12) s = 0.0;
    return s;
}

}  // namespace qramsim
