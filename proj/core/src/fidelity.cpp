#include "qramsim/fidelity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace qramsim {

namespace {

// Overlap accumulation grouped by ancilla sub-label. The ancilla label is
// produced by zeroing address+bus in a copy of the term label; the
// address(x)bus part is re-encoded into the ideal state's layout.
double grouped_overlap_sum(const SparseState& final_state, const SparseState& ideal,
                           const std::vector<uint32_t>& ancilla_wires) {
    const WireLayout& lay = final_state.layout();
    const WireLayout& ideal_lay = ideal.layout();
    const int bits = lay.address_bits();
    if (ideal_lay.address_bits() != bits)
        throw std::invalid_argument("config_fidelity: sublayout mismatch");

    std::unordered_map<BasisLabel, Complex, BasisLabelHash> ideal_map;
    ideal_map.reserve(ideal.term_count() * 2);
    for (const Term& t : ideal.terms()) ideal_map.emplace(t.label, t.amp);

    std::vector<uint32_t> ab_wires;
    ab_wires.reserve(bits + 1);
    for (int b = 0; b < bits; ++b) ab_wires.push_back(lay.address_wire(b));
    ab_wires.push_back(lay.bus_wire());

    std::unordered_map<BasisLabel, Complex, BasisLabelHash> groups;
    groups.reserve(final_state.term_count() * 2);
    for (const Term& t : final_state.terms()) {
        BasisLabel ab(ideal_lay.wire_count());
        for (uint32_t i = 0; i < ab_wires.size(); ++i) ab.set(i, t.label.get(ab_wires[i]));
        const auto it = ideal_map.find(ab);
        if (it == ideal_map.end()) continue;
        BasisLabel anc_key = t.label;
        for (uint32_t w : ab_wires) anc_key.set(w, 0);
        groups[anc_key] += std::conj(it->second) * t.amp;
    }
    (void)ancilla_wires;
    double f = 0.0;
    for (const auto& [key, overlap] : groups) f += std::norm(overlap);
    return f;
}

}  // namespace

double config_fidelity(const SparseState& final_state, const SparseState& ideal,
                       const std::vector<uint32_t>& ancilla_wires) {
    const double f = grouped_overlap_sum(final_state, ideal, ancilla_wires);
    if (f > 1.0 + 1e-9) throw std::runtime_error("config_fidelity exceeded 1");
    return f;
}

double config_fidelity_unnormalized(const SparseState& final_state, const SparseState& ideal,
                                    const std::vector<uint32_t>& ancilla_wires) {
    return grouped_overlap_sum(final_state, ideal, ancilla_wires);
}

double lambda_good(const Circuit& circuit, const std::vector<ErrorEvent>& events,
                   const std::vector<std::pair<uint64_t, Complex>>& address_amps) {
    if (!circuit.layout->is_tree()) return events.empty() ? 1.0 : 0.0;
    if (events.empty()) return 1.0;

    // Branch positions are over the subtree bits (the full address for plain
    // trees). Collect the router-hit set once, then test each branch path.
    std::vector<uint32_t> hit;
    const uint32_t rfirst = circuit.layout->router_wire(0, 0);
    const uint32_t rcount = circuit.layout->router_count();
    for (const ErrorEvent& e : events) {
        if (e.wire >= rfirst && e.wire < rfirst + rcount) hit.push_back(e.wire);
    }
    if (hit.empty()) return 1.0;
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());

    double good = 0.0;
    for (const auto& [branch, amp] : address_amps) {
        bool ok = true;
        for (uint32_t w : circuit.branch_router_wires(branch)) {
            if (std::binary_search(hit.begin(), hit.end(), w)) {
                ok = false;
                break;
            }
        }
        if (ok) good += std::norm(amp);
    }
    return good;
}

TrajectoryResult run_trajectory(const Circuit& circuit, const KrausChannel& channel,
                                const std::vector<std::pair<uint64_t, Complex>>& address_amps,
                                uint64_t seed, const NoiseSites& sites) {
    if (!channel.diagonal_weights || !channel.basis_preserving)
        throw std::invalid_argument("run_trajectory: channel not supported by the sampler");
    if (channel.completeness_residual > 1e-9)
        throw std::invalid_argument("run_trajectory: channel is not trace preserving");
    if (channel.dim != circuit.layout->dim())
        throw std::invalid_argument("run_trajectory: channel/layout dimension mismatch");

    SparseState state = initial_state(circuit, address_amps);
    Rng rng(seed);
    TrajectoryResult result;

    run_circuit(circuit, state, [&](int round, SparseState& s) {
        if (channel.epsilon == 0.0) return;
        if (!sites.restricted) {
            for (auto& [wire, m] : sample_round(s, circuit.noisy_wires, channel, rng)) {
                result.config.events.push_back({round, wire, m});
            }
        } else {
            for (const auto& [r, wire] : sites.sites) {
                if (r != round) continue;
                const uint32_t one_wire[1] = {wire};
                for (auto& [w, m] : sample_round(s, one_wire, channel, rng)) {
                    result.config.events.push_back({round, w, m});
                }
            }
        }
    });

    const SparseState ideal = ideal_output_for(circuit, address_amps);
    result.fidelity = config_fidelity(state, ideal, circuit.layout->ancilla_wires());
    result.config.lambda_good = lambda_good(circuit, result.config.events, address_amps);
    return result;
}

FidelityEstimate estimate_fidelity(const Circuit& circuit, const KrausChannel& channel,
                                   const std::vector<std::pair<uint64_t, Complex>>& address_amps,
                                   uint64_t samples, uint64_t master_seed, int workers) {
    if (samples < 1) throw std::invalid_argument("estimate_fidelity: samples must be >= 1");
    if (workers < 1) workers = 1;

    std::vector<double> fids(samples);
    std::atomic<uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            const uint64_t idx = next.fetch_add(1);
            if (idx >= samples) return;
            const uint64_t seed = derive_seed(master_seed, {idx});
            fids[idx] = run_trajectory(circuit, channel, address_amps, seed).fidelity;
        }
    };
    if (workers == 1 || samples == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(workers, 64);
        pool.reserve(count);
        for (int i = 0; i < count; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Ordered Kahan reduction: identical output for any worker count.
    double sum = 0.0, comp = 0.0;
    for (double f : fids) {
        const double y = f - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / static_cast<double>(samples);
    double var_sum = 0.0, var_comp = 0.0;
    for (double f : fids) {
        const double d = (f - mean) * (f - mean) - var_comp;
        const double t = var_sum + d;
        var_comp = (t - var_sum) - d;
        var_sum = t;
    }
    FidelityEstimate est;
    est.samples = samples;
    est.master_seed = master_seed;
    est.mean_fidelity = mean;
    est.std_error = samples > 1
                        ? std::sqrt(var_sum / static_cast<double>(samples - 1)) /
                              std::sqrt(static_cast<double>(samples))
                        : 0.0;
    if (samples <= 100000) est.per_sample = std::move(fids);
    return est;
}

BoundReport bounds(double epsilon, double epsilon_w, int T, int n, int M) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("bounds: epsilon must be in (0, 1)");
    BoundReport r;
    r.epsilon = epsilon;
    r.epsilon_w = epsilon_w;
    r.T = T;
    r.n = n;
    r.M = M;
    const double N = std::pow(2.0, n);
    const double dn = static_cast<double>(n);
    r.bound_mixed_unitary = 4.0 * epsilon * T * dn;
    r.bound_two_level = 4.0 * epsilon * T * (dn + dn * dn);
    r.a_prime = 6.0 - 2.0 * epsilon_w / epsilon;
    r.bound_general = r.a_prime * epsilon * T * dn;
    r.bound_logical = 4.0 * epsilon * T * dn;
    r.scaling_fanout = epsilon * N * T;
    r.scaling_qrom = epsilon * N * dn * dn;
    r.scaling_hybrid_fanout = epsilon * (N * dn + M * dn * dn);
    r.scaling_hybrid_bb = epsilon * M * dn * dn;
    r.regime_valid = epsilon * T * dn <= 0.25;
    r.general_bound_valid = epsilon_w <= 3.0 * epsilon;
    return r;
}

ScalingFit loglog_fit(const std::vector<std::pair<double, double>>& points_logN_infid,
                      double min_logN) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [logN, infid] : points_logN_infid) {
        if (logN < min_logN) continue;
        if (infid <= 0.0) continue;
        pts.emplace_back(std::log10(logN), std::log10(infid));
    }
    if (pts.size() < 2) throw std::invalid_argument("loglog_fit: fewer than 2 points pass the filter");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(pts.size());
    const double denom = count * sxx - sx * sx;
    if (std::abs(denom) < 1e-15) throw std::invalid_argument("loglog_fit: degenerate abscissae");

    ScalingFit fit;
    fit.min_logN = min_logN;
    fit.points_used = static_cast<int>(pts.size());
    fit.slope = (count * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / count;
    double rss = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (fit.slope * x + fit.intercept);
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / count);
    return fit;
}

std::vector<std::pair<int, double>> entropy_profile(int n, Variant variant) {
    if (n < 1 || n > 6) throw std::invalid_argument("entropy_profile: n must be in [1, 6]");
    const Circuit prefix = build_address_prefix_circuit(n, variant);
    SparseState state = initial_state(prefix, uniform_address_amps(n));
    run_circuit(prefix, state);

    std::vector<std::pair<int, double>> profile;
    profile.reserve(n);
    for (int level = 0; level < n; ++level) {
        const LocalMatrix rho = reduced_density_matrix(state, prefix.layout->router_wire(level, 0));
        profile.emplace_back(level, entanglement_entropy(rho));
    }
    return profile;
}

double bb_entropy_closed_form(int level) {
    const double p = std::pow(2.0, -level);
    const double q = 1.0 - p;
    const double ql = q > 0.0 ? -q * std::log2(q) : 0.0;
    return ql + p * (level + 1);
}

}  // namespace qramsim
