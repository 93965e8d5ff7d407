#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "vbs/builders.hpp"
#include "vbs/statesim.hpp"

using namespace vbs;

namespace {

Vec random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Vec v(Eigen::Index(1) << n);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    return v.normalized();
}

Mat random_unitary(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(m);
    return qr.householderQ();
}

// Runs `c` in post-selection mode on `psi` (data qubits first, ancillas |0>).
Statevector run_on(const Circuit& c, const Vec& psi, int n_data, double* prob) {
    Vec full = embed_state(psi, c.n_qubits, [&] {
        std::vector<int> l(static_cast<std::size_t>(n_data));
        std::iota(l.begin(), l.end(), 0);
        return l;
    }());
    Statevector st = state_from_amplitudes(full);
    const SimResult r = simulate(c, st);
    if (prob) *prob = r.success_prob;
    return st;
}

std::vector<int> range(int a, int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), a);
    return v;
}

}  // namespace

TEST_CASE("valence bond subcircuit prepares (|01> - |10>)/sqrt2") {
    const Statevector st = run_circuit(valence_bond_subcircuit(0, 1, 2));
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(st.amps(0)) < 1e-15);
    CHECK(std::abs(st.amps(1) - h) < 1e-15);
    CHECK(std::abs(st.amps(2) + h) < 1e-15);
    CHECK(std::abs(st.amps(3)) < 1e-15);
    CHECK(cnot_count(valence_bond_subcircuit(0, 1, 2)) == 1);
}

TEST_CASE("one-qubit gate round trip through Euler angles") {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const Mat u = random_unitary(2, s);
        const U1q g = u1q_from_matrix(u, 0);
        const Mat back = u1q_matrix(g.theta, g.phi, g.lambda);
        CHECK(std::abs(std::abs((back.adjoint() * u).trace()) - 2.0) < 1e-12);
    }
}

TEST_CASE("inverse undoes a circuit") {
    Circuit c(3);
    c.h(0);
    c.cx(0, 2);
    c.ry(0.3, 1);
    c.u(0.2, 0.5, -1.1, 2);
    c.cx(2, 1);
    const Mat u = circuit_unitary(c), v = circuit_unitary(inverse(c));
    CHECK((v * u - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Hadamard test post-selection applies the symmetrizer") {
    for (int n : {2, 3, 4}) {
        for (bool drop : {false, true}) {
            if (drop && n != 2) continue;
            HadamardTestOptions opts;
            opts.drop_phase_z = drop;
            const Circuit c = hadamard_test_fragment(range(0, n), n, n + 1, opts);
            const Vec psi = random_state(n, 100 + n);
            double p = 0;
            Statevector st = run_on(c, psi, n, &p);
            const Mat s = symmetrizer(n).m;
            const Vec want = s * psi;
            CHECK(p == doctest::Approx(want.squaredNorm()).epsilon(1e-12));
            CHECK(fidelity(extract_subsystem(st, range(0, n)), want.normalized()) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(hadamard_test_expected_outcome(n, opts) == (drop ? 0 : 1));
        }
    }
}

TEST_CASE("two-qubit Hadamard test block has a basis expansion matching its matrix") {
    for (int n : {2}) {
        const Circuit c = hadamard_test_fragment(range(0, n), n, n + 1);
        Circuit no_measure(c.n_qubits);
        for (const auto& in : c.ops)
            if (!std::holds_alternative<Measure>(in)) no_measure.ops.push_back(in);
        const Mat a = circuit_unitary(no_measure), b = circuit_unitary(expand_to_basis(no_measure));
        CHECK(std::abs(std::abs((a.adjoint() * b).trace()) - double(a.rows())) < 1e-9);
    }
}

TEST_CASE("declared cost table") {
    CHECK(declared_hadamard_test_cost(2).at("all_to_all").depth == 7);
    CHECK(declared_hadamard_test_cost(2).at("linear").depth == 9);
    CHECK(declared_hadamard_test_cost(3).at("all_to_all").depth == 26);
    CHECK(declared_hadamard_test_cost(3).at("heavy_hex:T").depth == 39);
    CHECK(declared_hadamard_test_cost(3).at("heavy_hex:linear").depth == 41);
    CHECK(declared_cswap_cost().at("all_to_all").count == 7);
    const auto i2 = declared_island_cost(2), i3 = declared_island_cost(3);
    CHECK(i2.at("all_to_all").count == 7);
    CHECK(i2.at("all_to_all").depth == 4);
    CHECK(i2.at("linear").depth == 8);
    CHECK(i3.at("all_to_all").count == 35);
    CHECK(i3.at("all_to_all").depth == 19);
    CHECK(i3.at("heavy_hex").depth == 57);
}

TEST_CASE("spin-1 island vector matches the printed amplitudes") {
    const double s3 = 1.0 / std::sqrt(3.0);
    const double printed[16] = {0, 0, 0, 0.5, 0, 0.5, -1, 0, 0, -1, 0.5, 0, 0.5, 0, 0, 0};
    const Vec v = island_state(2);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(v(i) - printed[i] * s3) < 1e-12);
}

TEST_CASE("island circuits reproduce the island states") {
    for (int ts : {2, 3}) {
        const Statevector st = run_circuit(island_prep_circuit(ts));
        CHECK(fidelity(st.amps, island_state(ts)) == doctest::Approx(1.0).epsilon(1e-12));
        const Opaque blk = island_block(ts);
        Circuit c(2 * ts);
        c.opaque(blk);
        CHECK(fidelity(run_circuit(c).amps, island_state(ts)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cnot_count(c) == (ts == 2 ? 7 : 35));
        CHECK(cnot_depth(c) == (ts == 2 ? 4 : 19));
    }
}

TEST_CASE("Schmidt preparation of random states") {
    for (int k = 1; k <= 6; ++k) {
        const Vec v = random_state(k, 40 + k);
        const Circuit c = schmidt_prepare(v);
        CHECK(fidelity(run_circuit(c).amps, v) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // onto a scattered register
    const Vec v = random_state(3, 77);
    const Circuit c = schmidt_prepare(v, {4, 0, 2}, 5);
    Statevector st = run_circuit(c);
    CHECK(fidelity(extract_subsystem(st, {4, 0, 2}), v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complete_unitary keeps the given columns for any seed order") {
    const Mat u = random_unitary(8, 5);
    const Mat cols = u.leftCols(2);
    for (const auto& seed : std::vector<std::vector<int>>{{}, {7, 6, 5, 4, 3, 2, 1, 0}, {3, 1, 4, 0, 5, 2, 7, 6}}) {
        const Mat w = complete_unitary(cols, {0, 1}, seed);
        CHECK((w.adjoint() * w - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((w.leftCols(2) - cols).cwiseAbs().maxCoeff() < 1e-12);
    }
    const Mat w = complete_unitary(cols, {3, 5});
    CHECK((w.col(3) - cols.col(0)).norm() < 1e-12);
    CHECK((w.col(5) - cols.col(1)).norm() < 1e-12);
}

TEST_CASE("permutation generator: all n! permutations, SWAP multiset, average is S") {
    for (int n = 1; n <= 5; ++n) {
        const auto perms = permutation_circuits(n);
        CHECK(long(perms.size()) == std::lround(std::tgamma(n + 1)));
        std::set<std::vector<int>> images;
        Mat sum = Mat::Zero(1 << n, 1 << n);
        for (const auto& seq : perms) {
            std::vector<int> img(static_cast<std::size_t>(n));
            std::iota(img.begin(), img.end(), 0);
            for (const auto& [a, b] : seq) std::swap(img[a], img[b]);
            images.insert(img);
            sum += swap_sequence_operator(seq, n);
        }
        CHECK(images.size() == perms.size());
        CHECK((sum / double(perms.size()) - symmetrizer(n).m).cwiseAbs().maxCoeff() < 1e-12);
    }
    std::map<std::size_t, int> lengths;
    for (const auto& seq : permutation_circuits(4)) ++lengths[seq.size()];
    CHECK(lengths == std::map<std::size_t, int>{{0, 1}, {1, 6}, {2, 11}, {3, 6}});
}

TEST_CASE("W state is exact and uses 2(m-1) CNOTs") {
    for (int m = 2; m <= 16; ++m) {
        const Statevector st = run_circuit(w_state_circuit(m));
        Vec w = Vec::Zero(Eigen::Index(1) << m);
        for (int k = 0; k < m; ++k) w(Eigen::Index(1) << (m - 1 - k)) = 1.0 / std::sqrt(double(m));
        CHECK((st.amps - w).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(cnot_count(w_state_circuit(24)) == 46);
    for (double p : {1.0, 0.5, 1.0 / 3, 0.01}) CHECK(std::pow(std::sin(w_block_angle(p)), 2) == doctest::Approx(p));
    CHECK_THROWS(w_block_angle(0.0));
}

TEST_CASE("LCU symmetrization: sparse and dense apply S") {
    for (int n : {2, 3}) {
        for (LcuVariant v : {LcuVariant::sparse, LcuVariant::dense}) {
            const int na = lcu_ancilla_count(n, v);
            const Circuit c = lcu_symmetrization_circuit(n, range(0, n), range(n, na), v, n + na);
            const Vec psi = random_state(n, 300 + n);
            double p = 0;
            Statevector st = run_on(c, psi, n, &p);
            const Vec want = symmetrizer(n).m * psi;
            CHECK(p == doctest::Approx(want.squaredNorm()).epsilon(1e-12));
            CHECK(fidelity(extract_subsystem(st, range(0, n)), want.normalized()) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(lcu_ancilla_count(4, LcuVariant::sparse) == 24);
    CHECK(lcu_ancilla_count(4, LcuVariant::dense) == 5);
    CHECK(lcu_ancilla_count(3, LcuVariant::dense) == 3);
}

TEST_CASE("spin-2 LCU block: 46 CSWAPs and 414 CNOTs") {
    const Circuit c = lcu_symmetrization_circuit(4, range(0, 4), range(4, 24), LcuVariant::sparse, 28);
    CHECK(count_opaque(c, "cswap") == 46);
    CHECK(cnot_count(c) == 414);
}

TEST_CASE("depth accounting: parallel gates share a layer, barriers align") {
    Circuit c(4);
    c.cx(0, 1);
    c.cx(2, 3);
    CHECK(cnot_depth(c) == 1);
    c.cx(1, 2);
    CHECK(cnot_depth(c) == 2);
    Circuit d(4);
    d.cx(0, 1);
    d.cx(0, 1);
    d.barrier();
    d.cx(2, 3);
    CHECK(cnot_depth(d) == 3);
    CHECK(cnot_count(d) == 3);
}

TEST_CASE("retry marker loops until the expected outcome") {
    // H then retry on 1: every trajectory ends with the qubit in |1>
    Circuit c(1);
    c.h(0);
    c.ops.emplace_back(RetryFrom{0, 1, 0, {0}});
    std::mt19937_64 rng(3);
    int total_retries = 0;
    const int runs = 4000;
    for (int i = 0; i < runs; ++i) {
        Statevector st = new_zero_state(1);
        const Trajectory t = run_trajectory(c, st, rng);
        CHECK(t.success);
        total_retries += t.retries.at(0);
    }
    // geometric(1/2): mean failures 1, variance 2
    CHECK(std::abs(total_retries / double(runs) - 1.0) < 3 * std::sqrt(2.0 / runs));
}

TEST_CASE("post-selection marker on an impossible outcome") {
    Circuit c(1);
    c.measure(0, 1);
    SimResult r;
    CHECK_THROWS(run_circuit(c, &r));
    std::mt19937_64 rng(1);
    Statevector st = new_zero_state(1);
    CHECK_FALSE(run_trajectory(c, st, rng).success);
}
