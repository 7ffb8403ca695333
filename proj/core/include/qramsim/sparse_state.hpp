#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "qramsim/gate.hpp"
#include "qramsim/layout.hpp"

namespace qramsim {

using Complex = std::complex<double>;

inline constexpr double kAmplitudeDropThreshold = 1e-15;
inline constexpr double kNormTolerance = 1e-10;

struct Term {
    BasisLabel label;
    Complex amp;
};

// Small dense matrix for single-wire reduced density matrices (d <= 3).
struct LocalMatrix {
    int d = 0;
    Complex a[9] = {};

    Complex& at(int r, int c) { return a[r * d + c]; }
    Complex at(int r, int c) const { return a[r * d + c]; }
};

// Sparse superposition of computational basis labels. A value type: every
// public operation is pure (the *_inplace variants exist for the hot paths
// and mutate exclusively-owned states). Terms are kept merged, normalized and
// free of amplitudes below the drop threshold.
class SparseState {
  public:
    SparseState() = default;
    SparseState(std::shared_ptr<const WireLayout> layout, std::vector<Term> terms)
        : layout_(std::move(layout)), terms_(std::move(terms)) {}

    const WireLayout& layout() const { return *layout_; }
    const std::shared_ptr<const WireLayout>& layout_ptr() const { return layout_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::vector<Term>& terms_mut() { return terms_; }
    size_t term_count() const { return terms_.size(); }

    double norm_sq() const;
    // Merges duplicate labels, drops tiny amplitudes, rescales to unit norm.
    void merge_and_normalize();
    void renormalize();

  private:
    std::shared_ptr<const WireLayout> layout_;
    std::vector<Term> terms_;
};

// Builds a normalized state from (label, amplitude) pairs; duplicate labels
// merge. Throws on empty input, label/layout mismatch or all-zero amplitudes.
SparseState make_state(std::shared_ptr<const WireLayout> layout,
                       const std::vector<std::pair<BasisLabel, Complex>>& terms);

SparseState apply_gate(const SparseState& state, const Gate& gate);
void apply_gate_inplace(SparseState& state, const Gate& gate);

// <a|b>; layouts must agree in shape.
Complex inner_product(const SparseState& a, const SparseState& b);

// Reduced density matrix of a single wire, obtained by grouping terms on all
// other wires. Hermitian with unit trace.
LocalMatrix reduced_density_matrix(const SparseState& state, uint32_t wire);

// Von Neumann entropy -sum(lambda log2 lambda) of a Hermitian matrix with
// trace ~1; 0 log 0 := 0. Result lies in [0, log2 d].
double entanglement_entropy(const LocalMatrix& rho);

}  // namespace qramsim
