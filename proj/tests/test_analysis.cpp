#include <doctest.h>

#include <cmath>

#include "vbs/analysis.hpp"
#include "vbs/prepare.hpp"
#include "vbs/statesim.hpp"

using namespace vbs;

namespace {

// Mean and standard deviation of a positive integer variable X from its
// CDF: E[X] = sum_k P(X > k), E[X^2] = sum_k (2k+1) P(X > k).
std::pair<double, double> moments_from_cdf(const std::vector<double>& cdf) {
    double m1 = 1, m2 = 1;
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        m1 += 1 - cdf[k];
        m2 += (2.0 * double(k + 1) + 1) * (1 - cdf[k]);
    }
    return {m1, std::sqrt(m2 - m1 * m1)};
}

}  // namespace

TEST_CASE("spin-1 closed-form norms agree with the simulated symmetrization") {
    for (int n = 2; n <= 6; ++n) {
        for (auto [l, r] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
            double sim = 0;
            oracle_vbs_state(build_chain(n, Boundary::open_chain, l, r), &sim);
            CHECK(std::abs(vbs_norm(2, n, Boundary::open_chain, l, r) - sim) < 1e-12);
        }
        if (n < 3) continue;
        double sim = 0;
        oracle_vbs_state(build_chain(n, Boundary::ring), &sim);
        CHECK(std::abs(vbs_norm(2, n, Boundary::ring) - sim) < 1e-12);
    }
    CHECK(vbs_norm(2, 3, Boundary::ring) == doctest::Approx(3.0 / 8));
    CHECK(vbs_norm(2, 2, Boundary::open_chain, 0, 0) == doctest::Approx(0.5));
    CHECK(vbs_norm(2, 2, Boundary::open_chain, 0, 1) == doctest::Approx(5.0 / 8));
    CHECK_THROWS(vbs_norm(3, 4, Boundary::ring));
}

TEST_CASE("large rings approach p^N") {
    const double n40 = vbs_norm(2, 40, Boundary::ring);
    CHECK(std::abs(n40 - vbs_norm_asymptotic(0.75, 40)) / std::pow(0.75, 40) < 1e-4);
    CHECK(vbs_norm_asymptotic(0.5, 10) == doctest::Approx(std::pow(0.5, 10)));
}

TEST_CASE("repetition recursion") {
    const RepetitionModel m = repetition_recursion(0.75, 10);
    CHECK(m.islands == 5);
    CHECK(m.R[0] == 1.0);
    CHECK(m.R[1] == doctest::Approx(1.25));
    CHECK(m.R.back() == doctest::Approx(4.0 / 3).epsilon(1e-10));
    CHECK(m.P[0] == doctest::Approx(std::pow(0.75, 5)));
    // p R_n = 1 - (1-p)^n: every island done within n rounds
    for (std::size_t k = 0; k < m.P.size(); ++k)
        CHECK(m.P[k] == doctest::Approx(std::pow(1 - std::pow(0.25, double(k + 1)), 5)).epsilon(1e-12));
    CHECK(1 - m.P.back() < 1e-12);
    CHECK(repetition_recursion(0.5, 20).P[0] == doctest::Approx(std::pow(2.0, -10)));
    // one island: geometric, mean 1/p
    CHECK(repetition_recursion(0.75, 2).expected_rounds == doctest::Approx(4.0 / 3).epsilon(1e-10));
    CHECK(repetition_recursion(0.5, 1).expected_rounds == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(m.unmitigated_repetitions == doctest::Approx(std::pow(4.0 / 3, 10)));
    CHECK(m.mitigated_repetitions == doctest::Approx(std::pow(4.0 / 3, 5)));
    CHECK(repetition_recursion(0.75, 10, 3).P.size() == 3);
}

TEST_CASE("expected rounds grow logarithmically in N") {
    const LogFit f = fit_expected_rounds(0.75, 10, 10000, 200, std::exp(1.0));
    CHECK(f.slope == doctest::Approx(0.7136).epsilon(1e-3));
    CHECK(f.intercept == doctest::Approx(0.4742).epsilon(1e-3));
    CHECK(std::abs(f.slope - 0.71) / 0.71 < 0.1);
    CHECK(std::abs(f.intercept - 0.49) / 0.49 < 0.1);
    const LogFit f10 = fit_expected_rounds(0.75, 10, 10000, 200, 10.0);
    CHECK(f10.slope == doctest::Approx(f.slope * std::log(10.0)).epsilon(1e-9));
    CHECK(f10.intercept == doctest::Approx(f.intercept).epsilon(1e-9));
}

TEST_CASE("repetition formatting") {
    CHECK(format_repetitions(4.2) == "4");
    CHECK(format_repetitions(315.3) == "315");
    CHECK(format_repetitions(1024) == "1,000");
    CHECK(format_repetitions(5611) == "5,600");
    CHECK(format_repetitions(99437) == "99,000");
    CHECK(format_repetitions(1.0e6 * 1.0486) == "10^6");
    CHECK(format_repetitions(1.77e6) == "1.8 × 10^6");
    CHECK(format_repetitions(std::pow(2.0, 30)) == "1.1 × 10^9");

    const auto s1 = repetitions_table(2, {10, 20, 30, 40, 50});
    const char* unmit[] = {"18", "315", "5,600", "99,000", "1.8 × 10^6"};
    const char* mit[] = {"4", "18", "75", "315", "1,300"};
    for (int i = 0; i < 5; ++i) {
        CHECK(s1[i].unmitigated_text == unmit[i]);
        CHECK(s1[i].mitigated_text == mit[i]);
    }
    const auto s32 = repetitions_table(3, {10, 20, 30, 40, 50});
    // exact powers of two rounded to two significant figures
    const char* unmit3[] = {"1,000", "10^6", "1.1 × 10^9", "1.1 × 10^12", "1.1 × 10^15"};
    const char* mit3[] = {"32", "1,000", "33,000", "10^6", "3.4 × 10^7"};
    for (int i = 0; i < 5; ++i) {
        CHECK(s32[i].unmitigated_text == unmit3[i]);
        CHECK(s32[i].mitigated_text == mit3[i]);
    }
}

TEST_CASE("Monte Carlo post-selection rates") {
    const Circuit c = route_circuit(build_chain(2, Boundary::open_chain), "probabilistic");
    const MonteCarlo mc = monte_carlo_success(c, 0.5, 100000, 11);
    CHECK(std::abs(mc.z_score) <= 3.0);
    CHECK(monte_carlo_success(c, 0.5, 2000, 5).successes == monte_carlo_success(c, 0.5, 2000, 5).successes);

    Circuit det(1);
    det.x(0);
    det.measure(0, 1);
    const MonteCarlo one = monte_carlo_success(det, 1.0, 500, 1);
    CHECK(one.rate == 1.0);
    CHECK(one.z_score == 0.0);
    CHECK_THROWS(monte_carlo_success(det, 0.0, 10, 1));
    CHECK_THROWS(monte_carlo_success(det, 1.5, 10, 1));

    // three-link pair: bonds, then the test on one site only
    const Lattice pair = build_three_link_pair();
    const SiteEncoding enc = assign_qubits(pair, EncodingMethod::hadamard_all);
    Circuit t(enc.total_qubits);
    for (const auto& [a, b] : enc.link_qubits) t.append(valence_bond_subcircuit(0, 1, 2), {a, b});
    t.append(hadamard_test_fragment(enc.site_qubits[0], 3, 4), [&] {
        std::vector<int> q = enc.site_qubits[0];
        q.push_back(enc.ancilla[0]);
        return q;
    }());
    CHECK(std::abs(monte_carlo_success(t, 0.5, 20000, 3).z_score) <= 3.0);
}

TEST_CASE("single-site success probabilities") {
    CHECK(site_success_probability(build_chain(4, Boundary::ring), 1) == doctest::Approx(0.75));
    CHECK(site_success_probability(build_chain(4, Boundary::open_chain, 0, 0), 0) == doctest::Approx(0.75));
    CHECK(site_success_probability(build_three_link_pair(), 0) == doctest::Approx(0.5));
    const Lattice lone = lattice_from_links(1, {}, {{0, 0}, {0, 1}}, "lone");
    CHECK(site_success_probability(lone, 0) == doctest::Approx(0.5));
    const Lattice aligned = lattice_from_links(1, {}, {{0, 0}, {0, 0}}, "lone-up");
    CHECK(site_success_probability(aligned, 0) == doctest::Approx(1.0));
}

TEST_CASE("sublattice retry statistics") {
    const RetryStatistics r4 = sublattice_retry_simulation(build_chain(4, Boundary::ring), 20000, 7);
    CHECK(r4.islands.size() == 2);
    CHECK(r4.expected_cdf[0] == doctest::Approx(9.0 / 16));
    const double sd = std::sqrt(9.0 / 16 * 7.0 / 16 / 20000);
    CHECK(std::abs(r4.empirical_cdf[0] - 9.0 / 16) <= 3 * sd);
    for (double z : r4.z_scores) CHECK(std::abs(z) <= 4.0);

    const int trials = 20000;
    const RetryStatistics r20 = sublattice_retry_simulation(build_multigraph_ring(20), trials, 9);
    const double expect = repetition_recursion(0.5, 20).expected_rounds;
    CHECK(r20.expected_mean == doctest::Approx(expect).epsilon(1e-9));
    const auto [mean, sigma] = moments_from_cdf(repetition_recursion(0.5, 20).P);
    CHECK(mean == doctest::Approx(expect).epsilon(1e-9));
    CHECK(std::abs(r20.mean_rounds - expect) <= 3 * sigma / std::sqrt(double(trials)));

    const Lattice lone = lattice_from_links(1, {}, {{0, 0}, {0, 1}}, "lone");
    const RetryStatistics r1 = sublattice_retry_simulation(lone, trials, 4);
    CHECK(r1.expected_mean == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(r1.mean_rounds - 2.0) <= 3 * std::sqrt(2.0 / trials));

    CHECK_THROWS(sublattice_retry_simulation(build_chain(3, Boundary::ring), 10, 1));
}

TEST_CASE("retry circuit trajectories match the geometric model") {
    const Lattice lat = build_chain(4, Boundary::ring);
    const int runs = 300;
    double retries = 0;
    int islands = 0;
    for (int s = 0; s < runs; ++s) {
        const RouteState st = run_route(lat, "mitigated_retry", std::uint64_t(s) + 1);
        CHECK(fidelity(st.state, oracle_vbs_state(lat)) == doctest::Approx(1.0).epsilon(1e-10));
        for (int r : st.retries) retries += r;
        islands += int(st.retries.size());
    }
    // failures per island before success: mean (1-p)/p = 1/3, variance (1-p)/p^2 = 4/9
    CHECK(islands == 2 * runs);
    CHECK(std::abs(retries / islands - 1.0 / 3) <= 3 * std::sqrt(4.0 / 9 / islands));
}

TEST_CASE("resource table") {
    const int expect[8] = {8, 11, 10, 17, 27, 45, 51, 105};
    const auto t = depth_table();
    REQUIRE(t.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(t[i].depth == expect[i]);
    const ResourceSummary lcu = resource_summary(4, "lcu", "all_to_all");
    CHECK(lcu.count == 414);
    CHECK(lcu.breakdown == "46 cswap x 7 + 92 other");
    CHECK_THROWS(resource_summary(2, "heavy_hex_only", "all_to_all"));
    CHECK_THROWS(resource_summary(2, "probabilistic", "heavy_hex"));
    CHECK_THROWS(resource_summary(3, "probabilistic", "star"));
}
