#include "vbs/spinops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vbs {

namespace {

Mat pauli_half(char axis) {
    Mat m = Mat::Zero(2, 2);
    switch (axis) {
        case 'x': m(0, 1) = 0.5; m(1, 0) = 0.5; break;
        case 'y': m(0, 1) = cplx(0, -0.5); m(1, 0) = cplx(0, 0.5); break;
        default: m(0, 0) = 0.5; m(1, 1) = -0.5; break;
    }
    return m;
}

// Single-qubit operator embedded at position q of an n-qubit register.
Mat embed_one(const Mat& op, int q, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, i == q ? op : Mat::Identity(2, 2));
    return out;
}

Mat collective_spin(char axis, int first, int count, int n) {
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat out = Mat::Zero(d, d);
    for (int q = first; q < first + count; ++q) out += embed_one(pauli_half(axis), q, n);
    return out;
}

void check_symmetrizer_range(int n) {
    if (n < 1 || n > kMaxSymmetrizerQubits)
        throw std::invalid_argument("symmetrizer: n_halves must be in [1," +
                                    std::to_string(kMaxSymmetrizerQubits) + "], got " +
                                    std::to_string(n));
}

}  // namespace

bool DenseOperator::is_finite() const { return m.allFinite(); }

bool DenseOperator::is_hermitian(double tol) const {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool DenseOperator::is_unitary(double tol) const {
    if (m.rows() != m.cols()) return false;
    return (m.adjoint() * m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool DenseOperator::is_idempotent(double tol) const {
    return m.rows() == m.cols() && (m * m - m).cwiseAbs().maxCoeff() <= tol;
}

SpinValue::SpinValue(int t) : twice_s(t) {
    if (t < 1) throw std::invalid_argument("SpinValue: 2S must be >= 1");
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Ladder construction in the |S, m> basis ordered m = S, S-1, ..., -S.
SpinTriple spin_matrices(SpinValue sv) {
    const int d = sv.twice_s + 1;
    const double s = sv.s();
    Mat sz = Mat::Zero(d, d), sp = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = s - k;
        sz(k, k) = m;
        if (k > 0) sp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    Mat sm = sp.adjoint();
    Mat sx = (sp + sm) * 0.5;
    Mat sy = (sp - sm) * cplx(0, -0.5);
    const std::string tag = "S=" + std::to_string(sv.twice_s) + "/2";
    return {{sx, "Sx " + tag}, {sy, "Sy " + tag}, {sz, "Sz " + tag}};
}

DenseOperator total_spin_squared(int n) {
    if (n < 1 || n > kMaxTotalSpinQubits)
        throw std::invalid_argument("total_spin_squared: n_halves out of range");
    Mat total = Mat::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
    for (char axis : {'x', 'y', 'z'}) {
        Mat c = collective_spin(axis, 0, n, n);
        total += c * c;
    }
    return {total, "S_total^2 n=" + std::to_string(n)};
}

Mat permutation_operator(const std::vector<int>& perm) {
    const int n = int(perm.size());
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat p = Mat::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        Eigen::Index y = 0;
        for (int i = 0; i < n; ++i) {
            const Eigen::Index bit = (x >> (n - 1 - i)) & 1;
            y |= bit << (n - 1 - perm[i]);
        }
        p(y, x) = 1.0;
    }
    return p;
}

DenseOperator symmetrizer(int n) {
    check_symmetrizer_range(n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat sum = Mat::Zero(d, d);
    double count = 0;
    do {
        sum += permutation_operator(perm);
        count += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {sum / count, "Sym(" + std::to_string(n) + ")"};
}

DenseOperator symmetrizer_from_spin_projector(int n) {
    check_symmetrizer_range(n);
    const Mat s2 = total_spin_squared(n).m;
    const Eigen::Index d = s2.rows();
    const double smax = n / 2.0;
    Mat prod = Mat::Identity(d, d);
    for (double sp = smax - 1; sp >= -1e-9; sp -= 1.0) {
        const double ev = sp * (sp + 1);
        prod = prod * (s2 - ev * Mat::Identity(d, d)) / (smax * (smax + 1) - ev);
    }
    return {prod, "SymProj(" + std::to_string(n) + ")"};
}

DenseOperator exp_minus_i_pi_symmetrizer(int n) {
    const Mat s = symmetrizer(n).m;
    return {Mat::Identity(s.rows(), s.cols()) - 2.0 * s,
            "exp(-i pi Sym(" + std::to_string(n) + "))"};
}

DenseOperator site_dot_product(SpinValue s) {
    const int k = s.twice_s;
    const int n = 2 * k;
    if (n > kMaxTotalSpinQubits) throw std::invalid_argument("site_dot_product: spin too large");
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat dot = Mat::Zero(d, d);
    for (char axis : {'x', 'y', 'z'})
        dot += collective_spin(axis, 0, k, n) * collective_spin(axis, k, k, n);
    return {dot, "S_n.S_n'"};
}

DenseOperator aklt_two_site_projector(SpinValue s) {
    const Mat x = site_dot_product(s).m;
    const Mat id = Mat::Identity(x.rows(), x.cols());
    Mat p;
    if (s.twice_s == 2) {
        p = id / 3.0 + x / 2.0 + x * x / 6.0;
    } else if (s.twice_s == 3) {
        // (x + 15/4)(x + 11/4)(x + 3/4) / 90; expanded the constant is 11/128
        p = (x + 3.75 * id) * (x + 2.75 * id) * (x + 0.75 * id) / 90.0;
    } else {
        throw std::invalid_argument("aklt_two_site_projector: only 2S in {2,3} supported");
    }
    return {p, "P_AKLT 2S=" + std::to_string(s.twice_s)};
}

DenseOperator blbq_hamiltonian_term(double beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("blbq_hamiltonian_term: beta must be finite");
    const Mat x = site_dot_product(SpinValue(2)).m;
    return {x + beta * x * x, "BLBQ beta=" + std::to_string(beta)};
}

Rational symmetric_fraction(int coordination) {
    if (coordination < 1 || coordination > 62)
        throw std::invalid_argument("symmetric_fraction: coordination out of range");
    std::int64_t num = coordination + 1;
    std::int64_t den = std::int64_t(1) << coordination;
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

}  // namespace vbs
