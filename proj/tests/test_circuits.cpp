#include <doctest.h>

#include <cmath>

#include "qramsim/builders.hpp"
#include "qramsim/fidelity.hpp"
#include "qramsim/rng.hpp"
#include "test_helpers.hpp"

using namespace qramsim;
using qramsim::testing::run_noiseless;
using qramsim::testing::single_address;

namespace {

// Noiseless output must equal ideal_output (x) untouched ancillas: checked
// via F(c) = 1 plus the ancilla-restoration check inside config_fidelity's
// grouping (a single group with overlap 1).
double noiseless_fidelity(const Circuit& c, const std::vector<std::pair<uint64_t, Complex>>& amps) {
    const SparseState out = run_noiseless(c, amps);
    return config_fidelity(out, ideal_output_for(c, amps), c.layout->ancilla_wires());
}

bool ancillas_restored(const Circuit& c, const SparseState& out) {
    // Every final term must carry the initial label on all non-address/bus
    // wires that are not |+>-prepared.
    std::vector<bool> is_plus(c.layout->wire_count(), false);
    for (uint32_t w : c.plus_wires) is_plus[w] = true;
    for (const Term& t : out.terms()) {
        for (uint32_t w : c.layout->ancilla_wires()) {
            if (is_plus[w]) continue;
            if (t.label.get(w) != c.initial_values[w]) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("BB3 depth law: T = 2n+5, with 11 noise rounds at n=3") {
    for (int n = 1; n <= 8; ++n) {
        const Circuit c = build_bb_circuit(n, 3, false, CopyVariant::ZeroXTilde,
                                           gen_dataset(n, 7));
        CHECK(c.T() == 2 * n + 5);
        int flagged = 0;
        for (const Block& b : c.blocks) flagged += b.noise_rounds;
        CHECK(flagged == c.T());
    }
    CHECK(build_bb_circuit(3, 3, false, CopyVariant::ZeroXTilde, gen_dataset(3, 7)).T() == 11);
}

TEST_CASE("tree variants: T grows affinely in n") {
    auto check_affine = [](auto&& build) {
        std::vector<double> ts;
        for (int n = 2; n <= 8; ++n) ts.push_back(static_cast<double>(build(n).T()));
        const double slope = ts[1] - ts[0];
        for (size_t i = 1; i < ts.size(); ++i)
            CHECK(std::abs(ts[i] - (ts[0] + slope * i)) < 1e-9);
    };
    check_affine([](int n) {
        return build_bb_circuit(n, 3, false, CopyVariant::ZeroXTilde, gen_dataset(n, 1));
    });
    check_affine([](int n) {
        return build_bb_circuit(n, 2, false, CopyVariant::PlusZ, gen_dataset(n, 1));
    });
    check_affine([](int n) {
        return build_bb_circuit(n, 2, true, CopyVariant::PlusZ, gen_dataset(n, 1));
    });
    check_affine([](int n) { return build_fanout_circuit(n, gen_dataset(n, 1)); });
}

TEST_CASE("schedule legality at build time") {
    for (int n : {1, 2, 3, 5, 6}) {
        build_bb_circuit(n, 3, false, CopyVariant::ZeroXTilde, gen_dataset(n, 3))
            .check_schedule_legality();
        build_bb_circuit(n, 2, true, CopyVariant::PlusZ, gen_dataset(n, 3))
            .check_schedule_legality();
        build_fanout_circuit(n, gen_dataset(n, 3)).check_schedule_legality();
    }
    build_qrom_circuit(4, gen_dataset(4, 3)).check_schedule_legality();
    build_hybrid_circuit(4, 2, Variant::BB3, gen_dataset(4, 3)).check_schedule_legality();
    build_double_query_circuit(3, 3, gen_dataset(3, 3), 99).check_schedule_legality();
}

TEST_CASE("round trip: single addresses over all variants and data sets") {
    SplitMix64 seeds(2024);
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 8; ++rep) {
            const ClassicalData data = gen_dataset(n, seeds.next());
            const uint64_t addr = seeds.next() % (1ull << n);
            const std::vector<Circuit> circuits = {
                build_bb_circuit(n, 3, false, CopyVariant::ZeroXTilde, data),
                build_bb_circuit(n, 3, true, CopyVariant::ZeroXTilde, data),
                build_bb_circuit(n, 2, false, CopyVariant::PlusZ, data),
                build_bb_circuit(n, 2, true, CopyVariant::PlusZ, data),
                build_fanout_circuit(n, data),
                build_qrom_circuit(n, data),
            };
            for (const Circuit& c : circuits) {
                const SparseState out = run_noiseless(c, single_address(addr));
                CHECK(config_fidelity(out, ideal_output_for(c, single_address(addr)),
                                      c.layout->ancilla_wires()) ==
                      doctest::Approx(1.0).epsilon(1e-9));
                CHECK(ancillas_restored(c, out));
            }
        }
    }
}

TEST_CASE("superposition correctness: uniform query ends in the ideal output") {
    SplitMix64 seeds(77);
    for (int n = 1; n <= 4; ++n) {
        const ClassicalData data = gen_dataset(n, seeds.next());
        for (const Circuit& c : {
                 build_bb_circuit(n, 3, false, CopyVariant::ZeroXTilde, data),
                 build_bb_circuit(n, 2, false, CopyVariant::PlusZ, data),
                 build_fanout_circuit(n, data),
                 build_qrom_circuit(n, data),
             }) {
            CHECK(noiseless_fidelity(c, uniform_address_amps(n)) ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("BB3 n=3 bus follows the highlighted path for address |010>") {
    const ClassicalData data = gen_dataset(3, 4242);
    const Circuit c = build_bb_circuit(3, 3, false, CopyVariant::ZeroXTilde, data);
    const SparseState out = run_noiseless(c, single_address(2));
    REQUIRE(out.term_count() == 1);
    const BasisLabel& l = out.terms()[0].label;
    CHECK(l.get(c.layout->bus_wire()) == c.layout->encode_bit(data.bit(2)));
    CHECK(l.get(c.layout->address_wire(0)) == c.layout->encode_bit(0));
    CHECK(l.get(c.layout->address_wire(1)) == c.layout->encode_bit(1));
    CHECK(l.get(c.layout->address_wire(2)) == c.layout->encode_bit(0));
}

TEST_CASE("fanout n=2 address |11> returns x_3 in the plus-basis encoding") {
    const ClassicalData data = gen_dataset(2, 99);
    const Circuit c = build_fanout_circuit(2, data);
    CHECK(noiseless_fidelity(c, single_address(3)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sparsity: term count never exceeds 4N on uniform queries") {
    for (int n = 2; n <= 5; ++n) {
        const ClassicalData data = gen_dataset(n, n);
        for (const Circuit& c : {
                 build_bb_circuit(n, 3, false, CopyVariant::ZeroXTilde, data),
                 build_bb_circuit(n, 2, false, CopyVariant::PlusZ, data),
                 build_fanout_circuit(n, data),
                 build_double_query_circuit(n, 2, data, 5u),
             }) {
            SparseState state = initial_state(c, uniform_address_amps(n));
            const size_t cap = 4ull << n;
            size_t max_terms = state.term_count();
            int round = 0;
            run_circuit(c, state, [&](int, SparseState& s) {
                max_terms = std::max(max_terms, s.term_count());
                ++round;
            });
            CHECK(max_terms <= cap);
        }
    }
}

TEST_CASE("QROM: all-zero data builds an empty circuit") {
    ClassicalData zeros = data_from_bits(std::vector<uint8_t>(16, 0));
    const Circuit c = build_qrom_circuit(4, zeros);
    CHECK(c.gate_count() == 0);
    CHECK(noiseless_fidelity(c, uniform_address_amps(4)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("QROM: n=2 data 1010, address |0> flips the bus") {
    const ClassicalData data = data_from_bits({1, 0, 1, 0});
    const Circuit c = build_qrom_circuit(2, data);
    const SparseState out = run_noiseless(c, single_address(0));
    REQUIRE(out.term_count() == 1);
    CHECK(out.terms()[0].label.get(c.layout->bus_wire()) == 1);
}

TEST_CASE("QROM: noise rounds per block model the decomposed gate depth") {
    for (int n : {1, 2, 3, 4}) {
        const Circuit c = build_qrom_circuit(n, gen_dataset(n, 5));
        const int per_block = static_cast<int>(std::ceil(std::log2(n))) + 1;
        CHECK(c.T() == per_block * (1 << n));
        CHECK(c.noisy_wires.size() == c.layout->wire_count());
    }
}

TEST_CASE("hybrid m=0 equals the plain circuit block-for-block") {
    const ClassicalData data = gen_dataset(3, 31);
    const Circuit plain = build_bb_circuit(3, 3, false, CopyVariant::ZeroXTilde, data);
    const Circuit hybrid = build_hybrid_circuit(3, 0, Variant::BB3, data);
    CHECK(hybrid.summary_json() != "");
    REQUIRE(hybrid.blocks.size() == plain.blocks.size());
    CHECK(hybrid.T() == plain.T());
    CHECK(hybrid.gate_counts_by_kind() == plain.gate_counts_by_kind());
    // Label-for-label equality of the full output state.
    const auto amps = uniform_address_amps(3);
    const SparseState a = run_noiseless(plain, amps);
    const SparseState b = run_noiseless(hybrid, amps);
    CHECK(std::abs(inner_product(a, b) - Complex(1.0)) < 1e-9);
}

TEST_CASE("hybrid m=n degenerates to a QROM-style iteration") {
    const ClassicalData data = gen_dataset(3, 8);
    const Circuit c = build_hybrid_circuit(3, 3, Variant::BB3, data);
    CHECK(c.blocks.size() == 8);
    CHECK(noiseless_fidelity(c, uniform_address_amps(3)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hybrid n=4 m=2 BB3: address |0110> returns x_6 with ancillas restored") {
    const ClassicalData data = gen_dataset(4, 16);
    const Circuit c = build_hybrid_circuit(4, 2, Variant::BB3, data);
    const SparseState out = run_noiseless(c, single_address(6));
    CHECK(config_fidelity(out, ideal_output_for(c, single_address(6)),
                          c.layout->ancilla_wires()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ancillas_restored(c, out));
    REQUIRE(out.term_count() == 1);
    CHECK(out.terms()[0].label.get(c.layout->bus_wire()) == c.layout->encode_bit(data.bit(6)));
}

TEST_CASE("hybrid round trips for all subkinds") {
    SplitMix64 seeds(3);
    for (int n = 2; n <= 4; ++n) {
        for (int m = 0; m <= n; ++m) {
            const ClassicalData data = gen_dataset(n, seeds.next());
            for (Variant sub : {Variant::BB3, Variant::BB2, Variant::Fanout}) {
                const Circuit c = build_hybrid_circuit(n, m, sub, data);
                CHECK(noiseless_fidelity(c, uniform_address_amps(n)) ==
                      doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("double query: clean tree behaves like a single query") {
    const ClassicalData data = gen_dataset(3, 11);
    const Circuit c = build_double_query_circuit(3, 3, data);
    CHECK(noiseless_fidelity(c, uniform_address_amps(3)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("double query: arbitrary basis-label initialization round trips") {
    SplitMix64 seeds(555);
    for (int levels : {2, 3}) {
        for (int n = 1; n <= 3; ++n) {
            for (int rep = 0; rep < 5; ++rep) {
                const ClassicalData data = gen_dataset(n, seeds.next());
                const uint64_t init_seed = seeds.next();
                const Circuit c = build_double_query_circuit(n, levels, data, init_seed);
                const uint64_t addr = seeds.next() % (1ull << n);
                const SparseState out = run_noiseless(c, single_address(addr));
                CHECK(config_fidelity(out, ideal_output_for(c, single_address(addr)),
                                      c.layout->ancilla_wires()) ==
                      doctest::Approx(1.0).epsilon(1e-9));
                CHECK(ancillas_restored(c, out));
                // Superposition query over the same junk-initialized tree.
                CHECK(noiseless_fidelity(c, uniform_address_amps(n)) ==
                      doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("ideal_output shapes and values") {
    const ClassicalData data = data_from_bits({0, 1, 1, 0});
    SUBCASE("single address, x=1, computational copy") {
        const SparseState s = ideal_output({{1, Complex(1.0)}}, data, CopyVariant::ZeroXTilde, 3);
        REQUIRE(s.term_count() == 1);
        CHECK(s.terms()[0].label.get(2) == 2);  // bus |1> encoded on a qutrit
    }
    SUBCASE("single address, x=1, plus-basis copy gives |->") {
        const SparseState s = ideal_output({{1, Complex(1.0)}}, data, CopyVariant::PlusZ, 2);
        REQUIRE(s.term_count() == 2);
        Complex a0, a1;
        for (const Term& t : s.terms()) (t.label.get(2) == 0 ? a0 : a1) = t.amp;
        CHECK(std::abs(a0 - Complex(1.0 / std::sqrt(2.0))) < 1e-12);
        CHECK(std::abs(a1 + Complex(1.0 / std::sqrt(2.0))) < 1e-12);
    }
    SUBCASE("uniform N=4 terms and norm") {
        CHECK(ideal_output(uniform_address_amps(2), data, CopyVariant::ZeroXTilde, 3)
                  .term_count() == 4);
        CHECK(ideal_output(uniform_address_amps(2), data, CopyVariant::PlusZ, 2).term_count() == 8);
    }
    SUBCASE("unnormalized input rejected") {
        CHECK_THROWS(ideal_output({{0, Complex(0.5)}}, data, CopyVariant::ZeroXTilde, 3));
    }
}

TEST_CASE("builder preconditions") {
    CHECK_THROWS(build_bb_circuit(0, 3, false, CopyVariant::ZeroXTilde, gen_dataset(0, 1)));
    CHECK_THROWS(build_bb_circuit(2, 3, false, CopyVariant::PlusZ, gen_dataset(2, 1)));
    CHECK_THROWS(build_bb_circuit(2, 2, false, CopyVariant::ZeroXTilde, gen_dataset(2, 1)));
    CHECK_THROWS(build_qrom_circuit(9, gen_dataset(9, 1)));
    CHECK_THROWS(build_hybrid_circuit(3, 4, Variant::BB3, gen_dataset(3, 1)));
    CHECK_THROWS(build_hybrid_circuit(3, 1, Variant::Qrom, gen_dataset(3, 1)));
}

TEST_CASE("circuit summary JSON is stable") {
    const Circuit c = build_bb_circuit(2, 3, false, CopyVariant::ZeroXTilde,
                                       data_from_bits({1, 0, 0, 1}));
    const std::string json = c.summary_json();
    CHECK(json.find("\"variant\":\"BB3\"") != std::string::npos);
    CHECK(json.find("\"n\":2") != std::string::npos);
    CHECK(json.find("\"T\":9") != std::string::npos);
    CHECK(json.find("\"wire_count\":13") != std::string::npos);
    CHECK(json.find("CSWAP") != std::string::npos);
}
