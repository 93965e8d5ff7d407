#include <doctest.h>

#include <cstdlib>
#include <random>

#include "vbs/statesim.hpp"

using namespace vbs;

namespace {

Mat random_unitary(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(m);
    return qr.householderQ();
}

Vec random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Vec v(Eigen::Index(1) << n);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    return v.normalized();
}

// Full-register operator with `op` on the listed qubits, via an explicit
// permutation of the tensor factors.
Mat full_operator(const Mat& op, const std::vector<int>& qubits, int n) {
    const int k = int(qubits.size());
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat full = Mat::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col)
        for (Eigen::Index row = 0; row < d; ++row) {
            bool same_rest = true;
            int r_loc = 0, c_loc = 0;
            for (int q = 0; q < n; ++q) {
                const int rb = int((row >> (n - 1 - q)) & 1), cb = int((col >> (n - 1 - q)) & 1);
                const auto it = std::find(qubits.begin(), qubits.end(), q);
                if (it == qubits.end()) {
                    if (rb != cb) same_rest = false;
                } else {
                    const int pos = int(it - qubits.begin());
                    r_loc |= rb << (k - 1 - pos);
                    c_loc |= cb << (k - 1 - pos);
                }
            }
            if (same_rest) full(row, col) = op(r_loc, c_loc);
        }
    return full;
}

}  // namespace

TEST_CASE("qubit 0 is the most significant bit") {
    Statevector st = new_zero_state(3);
    Mat x(2, 2);
    x << 0, 1, 1, 0;
    apply_unitary(st, x, {0});
    CHECK(std::abs(st.amps(4) - 1.0) < 1e-15);
}

TEST_CASE("apply_unitary matches the explicit full-register operator") {
    const int n = 5;
    const Vec psi = random_state(n, 3);
    for (const auto& qs : std::vector<std::vector<int>>{{2}, {3, 1}, {4, 0, 2}, {1, 3, 0, 4}}) {
        const Mat u = random_unitary(1 << qs.size(), 11 + qs.size());
        Statevector st = state_from_amplitudes(psi);
        apply_unitary(st, u, qs);
        CHECK((st.amps - full_operator(u, qs, n) * psi).norm() < 1e-12);
    }
}

TEST_CASE("non-unitary operators need the explicit flag") {
    Statevector st = new_zero_state(2);
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 1.0;
    CHECK_THROWS(apply_unitary(st, p, {0}));
    CHECK_NOTHROW(apply_unitary(st, p, {0}, true));
    CHECK_THROWS(apply_unitary(st, Mat::Identity(4, 4), {0}));
    CHECK_THROWS(apply_unitary(st, Mat::Identity(4, 4), {0, 0}));
    CHECK_THROWS(apply_unitary(st, Mat::Identity(2, 2), {5}));
}

TEST_CASE("projection returns branch probabilities and renormalizes") {
    Vec v = Vec::Zero(4);
    v(0) = std::sqrt(0.2);
    v(3) = std::sqrt(0.8);
    Statevector st = state_from_amplitudes(v);
    CHECK(outcome_probability(st, 1, 1) == doctest::Approx(0.8));
    CHECK(project_qubit(st, 0, 1) == doctest::Approx(0.8));
    CHECK(std::abs(st.amps(3) - 1.0) < 1e-12);
    CHECK_THROWS_AS(project_qubit(st, 1, 0), ImpossibleOutcome);
}

TEST_CASE("apply_nonunitary returns the norm ratio") {
    const Vec psi = random_state(3, 5);
    Mat p = Mat::Zero(2, 2);
    p(1, 1) = 1.0;
    Statevector st = state_from_amplitudes(psi);
    const double expect = outcome_probability(st, 2, 1);
    CHECK(apply_nonunitary(st, p, {2}) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(st.norm_sq() == doctest::Approx(1.0));
}

TEST_CASE("measurement and reset are seeded and consistent") {
    Vec v = Vec::Constant(2, 1.0 / std::sqrt(2.0));
    int ones = 0;
    bool all_reset = true;
    std::mt19937_64 rng(42);
    for (int i = 0; i < 20000; ++i) {
        Statevector st = state_from_amplitudes(v);
        const int b = reset_qubit(st, 0, rng);
        ones += b;
        all_reset = all_reset && std::abs(std::abs(st.amps(0)) - 1.0) < 1e-12;
    }
    CHECK(all_reset);
    CHECK(std::abs(ones / 20000.0 - 0.5) < 3 * 0.5 / std::sqrt(20000.0));

    Statevector st = state_from_amplitudes(random_state(4, 9));
    CHECK(sample(st, 7, 500) == sample(st, 7, 500));
}

TEST_CASE("fidelity ignores global phase") {
    const Vec a = random_state(3, 1);
    CHECK(fidelity(a, cplx(0, 1) * a) == doctest::Approx(1.0));
    CHECK(fidelity(a, random_state(3, 2)) < 0.99);
    CHECK_THROWS(fidelity(a, random_state(2, 2)));
}

TEST_CASE("expectation of Z on a known state") {
    Vec v = Vec::Zero(2);
    v(0) = std::sqrt(0.3);
    v(1) = std::sqrt(0.7);
    Statevector st = state_from_amplitudes(v);
    Mat z = Mat::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    CHECK(expectation(st, z, {0}) == doctest::Approx(-0.4));
}

TEST_CASE("extract_subsystem and embed_state invert each other") {
    const Vec logical = random_state(3, 17);
    const std::vector<int> layout{4, 1, 2};
    const Vec big = embed_state(logical, 5, layout);
    CHECK(big.norm() == doctest::Approx(1.0));
    Statevector st = state_from_amplitudes(big);
    CHECK((extract_subsystem(st, layout) - logical).norm() < 1e-12);
    // entangled rest is rejected
    Statevector bell = state_from_amplitudes(random_state(2, 3));
    CHECK_THROWS(extract_subsystem(bell, {0}));
}

TEST_CASE("qubit cap from the environment") {
    setenv("VBS_MAX_QUBITS", "4", 1);
    CHECK(max_qubits() == 4);
    CHECK_THROWS_AS(new_zero_state(5), QubitCapExceeded);
    CHECK_NOTHROW(new_zero_state(4));
    unsetenv("VBS_MAX_QUBITS");
    CHECK(max_qubits() == 26);
    CHECK_THROWS(new_zero_state(0));
}
