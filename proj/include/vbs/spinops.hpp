#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vbs {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Dense complex operator with a free-text label. Qubit-embedded operators
// use the convention that qubit 0 of the operator is the most significant
// bit of the row/column index.
struct DenseOperator {
    Mat m;
    std::string label;

    DenseOperator() = default;
    DenseOperator(Mat mat, std::string lbl = {}) : m(std::move(mat)), label(std::move(lbl)) {}

    Eigen::Index dim() const { return m.rows(); }
    bool is_finite() const;
    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-12) const;
    bool is_idempotent(double tol = 1e-12) const;
};

// Spin value stored as 2S.
struct SpinValue {
    int twice_s = 1;
    explicit SpinValue(int t);
    double s() const { return twice_s / 2.0; }
};

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return double(num) / double(den); }
    bool operator==(const Rational&) const = default;
};

struct SpinTriple {
    DenseOperator x, y, z;
};

constexpr int kMaxSymmetrizerQubits = 5;
constexpr int kMaxTotalSpinQubits = 6;

SpinTriple spin_matrices(SpinValue s);

// Sum over n qubits of the spin-1/2 operators, squared.
DenseOperator total_spin_squared(int n_halves);

// Projector onto the exchange-symmetric subspace, (1/n!) sum over permutations.
DenseOperator symmetrizer(int n_halves);
// Same projector from the spin-projector product over the lower total-spin sectors.
DenseOperator symmetrizer_from_spin_projector(int n_halves);
// Unitary permuting qubits: qubit i of the input ends up on qubit perm[i].
Mat permutation_operator(const std::vector<int>& perm);

DenseOperator exp_minus_i_pi_symmetrizer(int n_halves);

// Site spin operators built from sums of the constituent qubits' spin-1/2
// operators; first 2S qubits are site n, next 2S are site n'.
DenseOperator site_dot_product(SpinValue s);
DenseOperator aklt_two_site_projector(SpinValue s);
// x + beta x^2 with x = S_n . S_n' for two spin-1 sites.
DenseOperator blbq_hamiltonian_term(double beta);

Rational symmetric_fraction(int coordination);

// Kronecker product helper with the first factor most significant.
Mat kron(const Mat& a, const Mat& b);

}  // namespace vbs
