#include "vbs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "vbs/builders.hpp"
#include "vbs/prepare.hpp"
#include "vbs/routing.hpp"
#include "vbs/spinops.hpp"
#include "vbs/statesim.hpp"

namespace vbs {

double vbs_norm(int twice_s, int n_sites, Boundary boundary, int left_state, int right_state) {
    if (twice_s != 2) throw std::invalid_argument("vbs_norm: closed forms exist for spin-1 only");
    if (n_sites < 1) throw std::invalid_argument("vbs_norm: need at least one site");
    const double a = std::pow(0.75, n_sites), b = std::pow(-0.25, n_sites);
    switch (boundary) {
        case Boundary::ring:
            if (n_sites < 2) throw std::invalid_argument("vbs_norm: ring needs two sites");
            return a + 3.0 * b;
        case Boundary::open_chain:
            return left_state == right_state ? a - b : a + b;
        default:
            throw std::invalid_argument("vbs_norm: chains only");
    }
}

double vbs_norm_asymptotic(double p, int n_sites) { return std::pow(p, n_sites); }

RepetitionModel repetition_recursion(double p, int n_sites, int max_rounds) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("repetition_recursion: p must lie in (0,1)");
    if (n_sites < 1) throw std::invalid_argument("repetition_recursion: need at least one site");
    RepetitionModel m;
    m.p = p;
    m.n_sites = n_sites;
    m.islands = (n_sites + 1) / 2;
    double r = 1.0, prev_p = 0.0;
    for (int k = 1;; ++k) {
        if (k > 1) r = 1.0 + (1.0 - p) * r;
        const double pk = std::pow(p * r, m.islands);
        m.R.push_back(r);
        m.P.push_back(pk);
        m.expected_rounds += k * (pk - prev_p);
        prev_p = pk;
        if (max_rounds > 0 ? k >= max_rounds : 1.0 - pk < 1e-12) break;
        if (k > 10'000'000) throw std::runtime_error("repetition_recursion: did not converge");
    }
    m.unmitigated_repetitions = std::pow(1.0 / p, n_sites);
    m.mitigated_repetitions = std::pow(1.0 / p, n_sites / 2.0);
    return m;
}

LogFit fit_expected_rounds(double p, int n_min, int n_max, int samples, double base) {
    if (n_min < 1 || n_max <= n_min || samples < 2) throw std::invalid_argument("fit_expected_rounds: bad range");
    std::set<int> ns;
    const double l0 = std::log(double(n_min)), l1 = std::log(double(n_max));
    for (int i = 0; i < samples; ++i)
        ns.insert(int(std::lround(std::exp(l0 + (l1 - l0) * i / (samples - 1)))));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = double(ns.size());
    for (int n : ns) {
        const double x = std::log(double(n)) / std::log(base);
        const double y = repetition_recursion(p, n).expected_rounds;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    LogFit f;
    f.base = base;
    f.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / k;
    return f;
}

namespace {

std::string with_commas(long long v) {
    std::string s = std::to_string(v);
    for (int i = int(s.size()) - 3; i > 0; i -= 3) s.insert(std::size_t(i), ",");
    return s;
}

}  // namespace

std::string format_repetitions(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("format_repetitions: positive finite value needed");
    if (std::round(v) < 1000.0) return std::to_string(std::llround(v));
    int e = int(std::floor(std::log10(v)));
    const double unit = std::pow(10.0, e - 1);
    const double two_sig = std::round(v / unit) * unit;
    if (two_sig < 1e6) return with_commas(std::llround(two_sig));
    double mant = v / std::pow(10.0, e);
    mant = std::round(mant * 10.0) / 10.0;
    if (mant >= 10.0) {
        mant /= 10.0;
        ++e;
    }
    if (mant == 1.0) return "10^" + std::to_string(e);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", mant);
    return std::string(buf) + " × 10^" + std::to_string(e);
}

std::vector<RepetitionRow> repetitions_table(int twice_s, const std::vector<int>& n_list) {
    if (twice_s != 2 && twice_s != 3) throw std::invalid_argument("repetitions_table: spin 1 or 3/2");
    const double p = symmetric_fraction(twice_s).value();
    std::vector<RepetitionRow> rows;
    for (int n : n_list) {
        RepetitionRow r;
        r.n_sites = n;
        r.unmitigated = std::pow(1.0 / p, n);
        r.mitigated = std::pow(1.0 / p, n / 2.0);
        r.unmitigated_text = format_repetitions(r.unmitigated);
        r.mitigated_text = format_repetitions(r.mitigated);
        rows.push_back(r);
    }
    return rows;
}

MonteCarlo monte_carlo_success(const Circuit& c, double expected_p, int shots, std::uint64_t seed) {
    if (!(expected_p > 0.0 && expected_p <= 1.0)) throw std::invalid_argument("monte_carlo_success: expected_p outside (0,1]");
    if (shots < 1) throw std::invalid_argument("monte_carlo_success: shots must be positive");
    std::mt19937_64 rng(seed);
    MonteCarlo mc;
    mc.shots = shots;
    for (int i = 0; i < shots; ++i) {
        Statevector st = new_zero_state(c.n_qubits);
        if (run_trajectory(c, st, rng).success) ++mc.successes;
    }
    mc.rate = double(mc.successes) / shots;
    const double var = expected_p * (1.0 - expected_p) / shots;
    if (var > 0.0)
        mc.z_score = (mc.rate - expected_p) / std::sqrt(var);
    else
        mc.z_score = mc.rate == expected_p ? 0.0 : std::numeric_limits<double>::infinity();
    return mc;
}

double site_success_probability(const Lattice& lat, int site) {
    const auto& ports = lat.ports.at(std::size_t(site));
    const int k = int(ports.size());
    if (k < 2) return 1.0;
    const Mat s = symmetrizer(k).m;
    // product state, diagonal: bond qubits I/2, dangling spins pure
    double p = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        double w = 1.0;
        for (int q = 0; q < k; ++q) {
            const int b = int((i >> (k - 1 - q)) & 1);
            w *= ports[q] >= 0 ? 0.5 : (b == lat.dangling[-(ports[q] + 1)].state ? 1.0 : 0.0);
        }
        p += w * s(i, i).real();
    }
    return p;
}

RetryStatistics sublattice_retry_simulation(const Lattice& lat, int trials, std::uint64_t seed) {
    if (!is_bipartite(lat)) throw std::invalid_argument("sublattice_retry_simulation: lattice is not bipartite");
    if (trials < 1) throw std::invalid_argument("sublattice_retry_simulation: trials must be positive");
    RetryStatistics r;
    r.trials = trials;
    r.islands = sublattice_sites(lat, Sublattice::A);
    for (int s : r.islands) r.island_p.push_back(site_success_probability(lat, s));

    std::mt19937_64 rng(seed);
    std::vector<std::geometric_distribution<int>> draws;
    for (double p : r.island_p)
        if (p < 1.0) draws.emplace_back(p);  // sites that always pass draw nothing
    int worst = 1;
    double sum = 0;
    for (int t = 0; t < trials; ++t) {
        int rounds = 1;
        for (auto& g : draws) rounds = std::max(rounds, g(rng) + 1);
        ++r.histogram[rounds];
        worst = std::max(worst, rounds);
        sum += rounds;
    }
    r.mean_rounds = sum / trials;

    const auto cdf_at = [&](int n) {
        double c = 1.0;
        for (double p : r.island_p) c *= 1.0 - std::pow(1.0 - p, n);
        return c;
    };
    r.expected_mean = 1.0;
    for (int n = 1;; ++n) {
        const double c = cdf_at(n);
        r.expected_mean += 1.0 - c;
        if (n >= worst && 1.0 - c < 1e-12) break;
    }
    int cum = 0;
    for (int n = 1; n <= worst; ++n) {
        const auto it = r.histogram.find(n);
        if (it != r.histogram.end()) cum += it->second;
        const double e = cdf_at(n), emp = double(cum) / trials;
        r.expected_cdf.push_back(e);
        r.empirical_cdf.push_back(emp);
        if (e > 0.0 && e < 1.0) r.z_scores.push_back((emp - e) / std::sqrt(e * (1.0 - e) / trials));
    }
    return r;
}

namespace {

// Splits at the first controlled test so the two stages report separately.
std::pair<int, int> staged_depth(const Circuit& c, const std::string& coupling) {
    std::size_t cut = c.ops.size();
    for (std::size_t i = 0; i < c.ops.size(); ++i)
        if (const auto* g = std::get_if<Opaque>(&c.ops[i]); g && g->label.rfind("ctrl", 0) == 0) {
            cut = i;
            break;
        }
    Circuit prep(c.n_qubits);
    prep.ops.assign(c.ops.begin(), c.ops.begin() + std::ptrdiff_t(cut));
    const int total = cnot_depth(c, coupling), first = cnot_depth(prep, coupling);
    return {first, total - first};
}

int count_or_unknown(const Circuit& c, const std::string& coupling) {
    try {
        return cnot_count(c, coupling);
    } catch (const std::runtime_error&) {
        return -1;
    }
}

}  // namespace

ResourceSummary resource_summary(int twice_s, const std::string& method, const std::string& coupling) {
    ResourceSummary r;
    r.twice_s = twice_s;
    r.method = method;
    r.coupling = coupling;

    if (method == "lcu") {
        if (coupling != "all_to_all") throw std::invalid_argument("resource_summary: LCU is counted all-to-all");
        if (twice_s < 2 || twice_s > 4) throw std::invalid_argument("resource_summary: LCU counted for 2S in 2..4");
        const int na = lcu_ancilla_count(twice_s, LcuVariant::sparse);
        std::vector<int> site(static_cast<std::size_t>(twice_s)), anc(static_cast<std::size_t>(na));
        std::iota(site.begin(), site.end(), 0);
        std::iota(anc.begin(), anc.end(), twice_s);
        const Circuit c = lcu_symmetrization_circuit(twice_s, site, anc, LcuVariant::sparse, twice_s + na);
        r.count = cnot_count(c);
        r.depth = cnot_depth(c);
        const int cswaps = count_opaque(c, "cswap");
        r.breakdown = std::to_string(cswaps) + " cswap x 7 + " + std::to_string(r.count - 7 * cswaps) + " other";
        return r;
    }
    if (method != "probabilistic" && method != "mitigated_islands")
        throw std::invalid_argument("resource_summary: unknown method '" + method + "'");
    const bool islands = method == "mitigated_islands";

    if (coupling == "heavy_hex") {
        if (twice_s != 3) throw std::invalid_argument("resource_summary: heavy-hex is laid out for spin-3/2");
        const HeavyHexDemo demo = heavy_hex_honeycomb_demo(2, islands);
        const RoutedCircuit routed = route(demo.logical, demo.coupling, demo.initial_layout);
        const HeavyHexComposite hc = heavy_hex_composite(demo, routed);
        r.depth = hc.total;
        r.count = count_or_unknown(routed.circuit, "heavy_hex");
        r.breakdown = "prep " + std::to_string(hc.prep_depth) + " + swaps " + std::to_string(hc.swap_depth) +
                      " + tests " + std::to_string(hc.test_depth);
        return r;
    }
    if (coupling != "all_to_all" && coupling != "linear")
        throw std::invalid_argument("resource_summary: unknown coupling '" + coupling + "'");
    Lattice lat;
    if (twice_s == 2)
        lat = build_chain(4, Boundary::ring);
    else if (twice_s == 3 && coupling == "all_to_all")
        lat = build_multigraph_ring(4);
    else
        throw std::invalid_argument("resource_summary: unsupported spin/coupling combination");
    Circuit c;
    if (islands) {
        const auto enc = assign_qubits(lat, EncodingMethod::islands_plus_sublattice);
        c = islands_method_circuit(lat, enc);
    } else {
        c = probabilistic_method_circuit(lat, assign_qubits(lat, EncodingMethod::hadamard_all));
    }
    const auto [prep, tests] = staged_depth(c, coupling);
    r.depth = prep + tests;
    r.count = count_or_unknown(c, coupling);
    r.breakdown = std::string(islands ? "islands " : "bonds ") + std::to_string(prep) + " + tests " + std::to_string(tests);
    return r;
}

std::vector<ResourceSummary> depth_table() {
    std::vector<ResourceSummary> out;
    const std::vector<std::pair<int, std::string>> rows{
        {2, "all_to_all"}, {2, "linear"}, {3, "all_to_all"}, {3, "heavy_hex"}};
    for (const auto& [s, cp] : rows)
        for (const char* m : {"probabilistic", "mitigated_islands"}) out.push_back(resource_summary(s, m, cp));
    return out;
}

}  // namespace vbs
