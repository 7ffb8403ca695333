#include <doctest.h>

#include <cmath>
#include <map>

#include "qramsim/builders.hpp"
#include "qramsim/channel.hpp"
#include "qramsim/fidelity.hpp"
#include "qramsim/sampler.hpp"
#include "test_helpers.hpp"

using namespace qramsim;
using qramsim::testing::label_of;

namespace {

const std::vector<std::pair<ChannelKind, int>> kAllChannels = {
    {ChannelKind::Depolarizing, 2}, {ChannelKind::BitFlip, 2}, {ChannelKind::Dephasing, 2},
    {ChannelKind::Damping, 2},      {ChannelKind::Heating, 2}, {ChannelKind::Depolarizing, 3},
    {ChannelKind::BitFlip, 3},      {ChannelKind::Dephasing, 3}, {ChannelKind::Damping, 3},
    {ChannelKind::Heating, 3},
};

}  // namespace

TEST_CASE("qubit dephasing matrices are {sqrt(1-e) I, sqrt(e) Z}") {
    const KrausChannel ch = make_channel(ChannelKind::Dephasing, 2, 0.1);
    REQUIRE(ch.ops.size() == 2);
    const double s0 = std::sqrt(0.9), se = std::sqrt(0.1);
    CHECK(std::abs(ch.ops[0].at(0, 0) - Complex(s0)) < 1e-15);
    CHECK(std::abs(ch.ops[0].at(1, 1) - Complex(s0)) < 1e-15);
    CHECK(std::abs(ch.ops[1].at(0, 0) - Complex(se)) < 1e-15);
    CHECK(std::abs(ch.ops[1].at(1, 1) + Complex(se)) < 1e-15);
    CHECK(ch.mixed_unitary);
    CHECK(ch.diagonal_weights);
}

TEST_CASE("qutrit dephasing uses A2 powers with weight eps/2") {
    const KrausChannel ch = make_channel(ChannelKind::Dephasing, 3, 0.2);
    REQUIRE(ch.ops.size() == 3);
    const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
    const double sp = std::sqrt(0.1);
    CHECK(std::abs(ch.ops[1].at(0, 0) - Complex(sp)) < 1e-14);
    CHECK(std::abs(ch.ops[1].at(1, 1) - sp * w) < 1e-14);
    CHECK(std::abs(ch.ops[1].at(2, 2) - sp * w * w) < 1e-14);
    CHECK(std::abs(ch.ops[2].at(2, 2) - sp * w) < 1e-14);  // (A2^2)_22 = w^4 = w
    CHECK(ch.mixed_unitary);
}

TEST_CASE("qutrit depolarizing has the 8 A1/A2 products at weight eps/8") {
    const KrausChannel ch = make_channel(ChannelKind::Depolarizing, 3, 0.08);
    REQUIRE(ch.ops.size() == 9);
    for (size_t m = 1; m < 9; ++m) {
        double frob = 0.0;
        for (int i = 0; i < 9; ++i) frob += std::norm(ch.ops[m].m[i]);
        CHECK(frob == doctest::Approx(3.0 * 0.01).epsilon(1e-12));
    }
    CHECK(ch.mixed_unitary);
    CHECK(ch.basis_preserving);
}

TEST_CASE("qutrit damping and heating follow the printed column maps") {
    const KrausChannel damp = make_channel(ChannelKind::Damping, 3, 0.25);
    REQUIRE(damp.ops.size() == 3);
    // K0 = |W><W| + sqrt(1-e)(|0><0| + |1><1|), K1 = sqrt(e)|W><0|, K2 = sqrt(e)|W><1|
    CHECK(std::abs(damp.ops[0].at(0, 0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(damp.ops[0].at(1, 1) - Complex(std::sqrt(0.75))) < 1e-15);
    CHECK(std::abs(damp.ops[1].at(0, 1) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(damp.ops[2].at(0, 2) - Complex(0.5)) < 1e-15);
    CHECK(damp.epsilon_w == 0.0);
    CHECK_FALSE(damp.mixed_unitary);

    const KrausChannel heat = make_channel(ChannelKind::Heating, 3, 0.25);
    REQUIRE(heat.ops.size() == 3);
    CHECK(std::abs(heat.ops[0].at(0, 0) - Complex(std::sqrt(0.75))) < 1e-15);
    CHECK(std::abs(heat.ops[1].at(1, 0) - Complex(std::sqrt(0.125))) < 1e-15);
    CHECK(std::abs(heat.ops[2].at(2, 0) - Complex(std::sqrt(0.125))) < 1e-15);
    CHECK(heat.epsilon_w == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("qutrit bit-flip keeps the printed W-annihilating K1 plus a completion") {
    const KrausChannel ch = make_channel(ChannelKind::BitFlip, 3, 0.09);
    REQUIRE(ch.ops.size() == 3);
    const double se = std::sqrt(0.09);
    CHECK(std::abs(ch.ops[1].at(1, 2) - Complex(se)) < 1e-15);
    CHECK(std::abs(ch.ops[1].at(2, 1) - Complex(se)) < 1e-15);
    for (int r = 0; r < 3; ++r) CHECK(std::abs(ch.ops[1].at(r, 0)) < 1e-15);  // annihilates |W>
    CHECK(ch.completeness_residual < 1e-12);
    CHECK(ch.epsilon_w == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("channel algebra: completeness over all kinds and epsilons") {
    for (const auto& [kind, dim] : kAllChannels) {
        for (double eps : {0.0, 1e-4, 0.1, 1.0}) {
            const KrausChannel ch = make_channel(kind, dim, eps);
            CHECK(ch.completeness_residual < 1e-12);
            const ChannelDiagnostics d = verify_channel(ch);
            CHECK(d.basis_preserving);
            CHECK(d.diagonal_weights);
            CHECK(d.sampler_supported);
        }
    }
}

TEST_CASE("epsilon_w: damping 0, heating eps, mixed-unitary kinds eps") {
    const double eps = 0.037;
    for (const auto& [kind, dim] : kAllChannels) {
        const KrausChannel ch = make_channel(kind, dim, eps);
        const double expect = kind == ChannelKind::Damping ? 0.0 : eps;
        CHECK(ch.epsilon_w == doctest::Approx(expect).epsilon(1e-12));
        if (ch.mixed_unitary) CHECK(ch.epsilon_w == doctest::Approx(eps).epsilon(1e-12));
    }
}

TEST_CASE("verify_channel flags a deliberately broken list") {
    // Dephasing with the Z operator dropped: residual ~ eps.
    const double eps = 0.3;
    const double s0 = std::sqrt(1.0 - eps);
    const KrausChannel broken = channel_from_matrices(
        ChannelKind::Dephasing, 2, eps, {{s0, 0, 0, s0}});
    CHECK(verify_channel(broken).completeness_residual == doctest::Approx(eps).epsilon(1e-12));

    // Non-diagonal weights (a Hadamard-like Kraus op) are unsupported.
    const double h = std::sqrt(0.5);
    const KrausChannel nond = channel_from_matrices(
        ChannelKind::Dephasing, 2, 0.5,
        {{h, h / 2, h / 2, h}, {0, h / 2, h / 2, 0}});
    CHECK_FALSE(verify_channel(nond).sampler_supported);
    auto lay = WireLayout::qrom(1);
    auto state = make_state(lay, {{label_of(*lay, {0, 0}), Complex(1.0)}});
    Rng rng(1);
    const uint32_t wires[1] = {0};
    CHECK_THROWS(sample_round(state, wires, nond, rng));
}

TEST_CASE("sample_round: qubit bit-flip error probability is epsilon exactly") {
    const double eps = 0.23;
    const KrausChannel ch = make_channel(ChannelKind::BitFlip, 2, eps);
    auto lay = WireLayout::qrom(2);
    auto init = make_state(lay, {{label_of(*lay, {0, 1, 0}), Complex(std::sqrt(0.5))},
                                 {label_of(*lay, {1, 0, 1}), Complex(std::sqrt(0.5))}});
    Rng rng(42);
    const uint32_t wires[1] = {1};
    int hits = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        SparseState s = init;
        hits += static_cast<int>(!sample_round(s, wires, ch, rng).empty());
    }
    const double phat = static_cast<double>(hits) / trials;
    const double sigma = std::sqrt(eps * (1.0 - eps) / trials);
    CHECK(std::abs(phat - eps) < 4.0 * sigma);
}

TEST_CASE("sample_round: damping never fires on a wire resting in |W>") {
    const KrausChannel ch = make_channel(ChannelKind::Damping, 3, 0.9);
    auto lay = WireLayout::tree(1, 3);
    BasisLabel l(lay->wire_count());
    l.set(lay->bus_wire(), 2);  // other wires active, target wire in |W>
    auto state = make_state(lay, {{l, Complex(1.0)}});
    Rng rng(7);
    const uint32_t wires[1] = {lay->router_wire(0, 0)};
    for (int t = 0; t < 200; ++t) {
        auto hits = sample_round(state, wires, ch, rng);
        CHECK(hits.empty());
    }
}

TEST_CASE("sample_round: qutrit dephasing error on |W> leaves the state invariant") {
    const KrausChannel ch = make_channel(ChannelKind::Dephasing, 3, 1.0);
    auto lay = WireLayout::tree(1, 3);
    BasisLabel l(lay->wire_count());
    auto state = make_state(lay, {{l, Complex(1.0)}});
    const SparseState before = state;
    Rng rng(3);
    const uint32_t wires[1] = {lay->router_wire(0, 0)};
    auto hits = sample_round(state, wires, ch, rng);
    CHECK(hits.size() == 1);  // eps = 1: an A2-type index always fires
    CHECK(std::abs(std::abs(inner_product(before, state)) - 1.0) < 1e-12);
}

TEST_CASE("sampler faithfulness: empirical Kraus frequencies match p_m") {
    // Fixed 3-wire state with unequal value masses on the sampled wire.
    auto lay = WireLayout::address_bus(2, 3);
    auto state3 = make_state(
        *&lay, {{label_of(*lay, {0, 1, 2}), Complex(std::sqrt(0.5))},
                {label_of(*lay, {1, 1, 0}), Complex(std::sqrt(0.3))},
                {label_of(*lay, {2, 0, 1}), Complex(std::sqrt(0.2))}});
    auto lay2 = WireLayout::qrom(2);
    auto state2 = make_state(
        *&lay2, {{label_of(*lay2, {0, 1, 1}), Complex(std::sqrt(0.7))},
                 {label_of(*lay2, {1, 0, 0}), Complex(std::sqrt(0.3))}});

    const int trials = 100000;
    for (const auto& [kind, dim] : kAllChannels) {
        const double eps = 0.2;
        const KrausChannel ch = make_channel(kind, dim, eps);
        const SparseState& init = dim == 3 ? state3 : state2;
        const uint32_t wires[1] = {0};

        // Expected p_m from the diagonal weights and the wire's value masses.
        double mass[3] = {0, 0, 0};
        for (const Term& t : init.terms()) mass[t.label.get(0)] += std::norm(t.amp);
        std::vector<double> expected(ch.ops.size(), 0.0);
        for (size_t m = 0; m < ch.ops.size(); ++m)
            for (int v = 0; v < dim; ++v) expected[m] += mass[v] * ch.ops[m].weight[v];

        std::map<int, int> counts;
        Rng rng(derive_seed(99, {static_cast<uint64_t>(kind), static_cast<uint64_t>(dim)}));
        for (int t = 0; t < trials; ++t) {
            SparseState s = init;
            auto hits = sample_round(s, wires, ch, rng);
            counts[hits.empty() ? 0 : hits[0].second]++;
        }
        for (size_t m = 0; m < ch.ops.size(); ++m) {
            const double phat = static_cast<double>(counts[static_cast<int>(m)]) / trials;
            const double sigma =
                std::sqrt(std::max(expected[m] * (1.0 - expected[m]), 1e-12) / trials);
            CHECK(std::abs(phat - expected[m]) <= 4.0 * sigma + 1e-12);
        }
    }
}

TEST_CASE("determinism: same seed, same trajectory") {
    const ClassicalData data = gen_dataset(4, 12);
    const Circuit c = build_bb_circuit(4, 3, false, CopyVariant::ZeroXTilde, data);
    const KrausChannel ch = make_channel(ChannelKind::Depolarizing, 3, 1e-3);
    const auto amps = uniform_address_amps(4);
    const TrajectoryResult a = run_trajectory(c, ch, amps, 777);
    const TrajectoryResult b = run_trajectory(c, ch, amps, 777);
    CHECK(a.fidelity == b.fidelity);
    REQUIRE(a.config.events.size() == b.config.events.size());
    for (size_t i = 0; i < a.config.events.size(); ++i) {
        CHECK(a.config.events[i].round == b.config.events[i].round);
        CHECK(a.config.events[i].wire == b.config.events[i].wire);
        CHECK(a.config.events[i].kraus_index == b.config.events[i].kraus_index);
    }
}

TEST_CASE("inject_error: identity injection leaves the state unchanged") {
    const KrausChannel ch = make_channel(ChannelKind::Depolarizing, 3, 0.3);
    const Circuit prefix = build_address_prefix_circuit(2, Variant::BB3);
    SparseState state = initial_state(prefix, uniform_address_amps(2));
    run_circuit(prefix, state);
    SparseState copy = state;
    inject_error(copy, prefix.layout->router_wire(1, 0), 0, ch);
    CHECK(std::abs(inner_product(state, copy) - Complex(1.0)) < 1e-12);
}

TEST_CASE("inject_error: annihilating operator is an error") {
    const KrausChannel damp = make_channel(ChannelKind::Damping, 3, 0.5);
    auto lay = WireLayout::tree(1, 3);
    BasisLabel l(lay->wire_count());
    auto state = make_state(lay, {{l, Complex(1.0)}});  // all |W>
    CHECK_THROWS(inject_error(state, lay->router_wire(0, 0), 1, damp));  // K1 = |W><0|
}

TEST_CASE("inject_error: wait-state flip on an inactive router does not spread") {
    // XTilde-type component of the qutrit bit-flip on an off-path router: the
    // downstream noiseless query still succeeds for every good branch.
    const ClassicalData data = gen_dataset(2, 5);
    const Circuit c = build_bb_circuit(2, 3, false, CopyVariant::ZeroXTilde, data);
    const KrausChannel deph = make_channel(ChannelKind::Dephasing, 3, 0.5);
    // Query branch 0; inject a dephasing error on the level-1 router of the
    // opposite subtree at round 3 (addresses in flight).
    int target_round = 3;
    SparseState state = initial_state(c, qramsim::testing::single_address(0));
    run_circuit(c, state, [&](int round, SparseState& s) {
        if (round == target_round) inject_error(s, c.layout->router_wire(1, 1), 1, deph);
    });
    const double f = config_fidelity(state, ideal_output_for(c, qramsim::testing::single_address(0)),
                                     c.layout->ancilla_wires());
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("error config JSON dump") {
    ErrorConfig cfg;
    cfg.events = {{2, 7, 1}};
    cfg.lambda_good = 0.5;
    const std::string j = cfg.to_json();
    CHECK(j.find("\"round\":2") != std::string::npos);
    CHECK(j.find("\"wire\":7") != std::string::npos);
    CHECK(j.find("\"lambda_good\":0.5") != std::string::npos);
}
