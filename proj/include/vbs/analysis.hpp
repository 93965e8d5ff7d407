#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vbs/circuit.hpp"
#include "vbs/lattice.hpp"

namespace vbs {

// Squared norm of the unnormalized VBS state (all sites symmetrized, pre-VBS
// normalized). Spin-1 chains use the exact finite-size forms; other spins throw,
// use vbs_norm_asymptotic for p^N.
double vbs_norm(int twice_s, int n_sites, Boundary boundary, int left_state = 0, int right_state = 0);
double vbs_norm_asymptotic(double p, int n_sites);

struct RepetitionModel {
    double p = 0;
    int n_sites = 0;
    int islands = 0;          // ceil(N/2) sublattice sites retried independently
    std::vector<double> R;    // R[k] for round k+1
    std::vector<double> P;    // P[k]: all islands done within k+1 rounds
    double expected_rounds = 0;
    double unmitigated_repetitions = 0;  // (1/p)^N
    double mitigated_repetitions = 0;    // (1/p)^(N/2)
};
// R_1 = 1, R_n = 1 + (1-p) R_{n-1}; P_n = (p R_n)^{ceil(N/2)}. Rounds are added
// until 1 - P_n < 1e-12 (or max_rounds when positive).
RepetitionModel repetition_recursion(double p, int n_sites, int max_rounds = 0);

struct LogFit {
    double slope = 0;
    double intercept = 0;
    double base = 0;  // logarithm base of the fit
};
// Least squares of expected_rounds against log_base(N) over `samples`
// log-spaced integer N in [n_min, n_max] (duplicates after rounding dropped).
LogFit fit_expected_rounds(double p, int n_min, int n_max, int samples, double base);

// Printing rule of the repetitions table: integers below 1000, two significant
// figures with thousands separators below 10^6, "m.m × 10^k" above (the mantissa
// is omitted when it rounds to 1.0).
std::string format_repetitions(double v);

struct RepetitionRow {
    int n_sites = 0;
    double unmitigated = 0, mitigated = 0;
    std::string unmitigated_text, mitigated_text;
};
std::vector<RepetitionRow> repetitions_table(int twice_s, const std::vector<int>& n_list);

struct MonteCarlo {
    double rate = 0;
    double z_score = 0;
    int shots = 0;
    int successes = 0;
};
// Samples full trajectories (markers measured with a seeded rng). expected_p
// must lie in (0,1], a deterministic circuit gives z = 0.
MonteCarlo monte_carlo_success(const Circuit& c, double expected_p, int shots, std::uint64_t seed);

// Exact probability that one retried Hadamard test on `site` succeeds, from the
// site's reduced pre-VBS state (bond qubits maximally mixed, dangling spins pure).
double site_success_probability(const Lattice& lat, int site);

struct RetryStatistics {
    std::vector<int> islands;            // retried sites (sublattice A)
    std::vector<double> island_p;
    std::map<int, int> histogram;        // max rounds -> trials
    std::vector<double> expected_cdf;    // index k: all done within k+1 rounds
    std::vector<double> empirical_cdf;
    std::vector<double> z_scores;        // per round where 0 < cdf < 1
    double mean_rounds = 0;
    double expected_mean = 0;
    int trials = 0;
};
// Independent geometric sampling per island, max over islands.
RetryStatistics sublattice_retry_simulation(const Lattice& lat, int trials, std::uint64_t seed);

struct ResourceSummary {
    int twice_s = 0;
    std::string method;    // probabilistic | mitigated_islands | lcu
    std::string coupling;  // all_to_all | linear | heavy_hex
    int depth = -1;
    int count = -1;        // -1 when the declared costs only give a depth
    std::string breakdown;
};
ResourceSummary resource_summary(int twice_s, const std::string& method, const std::string& coupling);
// The eight cells of the depth table, row-major: (S=1 a2a, S=1 linear,
// S=3/2 a2a, S=3/2 heavy-hex) x (probabilistic, islands).
std::vector<ResourceSummary> depth_table();

}  // namespace vbs
