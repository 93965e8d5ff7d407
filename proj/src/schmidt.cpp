#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vbs/builders.hpp"

namespace vbs {

Mat complete_unitary(const Mat& cols, const std::vector<int>& positions, const std::vector<int>& seed_order) {
    const auto d = cols.rows();
    if (cols.cols() != Eigen::Index(positions.size()))
        throw std::invalid_argument("complete_unitary: one position per column required");
    const Mat gram = cols.adjoint() * cols;
    if ((gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("complete_unitary: given columns are not orthonormal");
    std::vector<int> order = seed_order;
    if (order.empty()) {
        order.resize(std::size_t(d));
        std::iota(order.begin(), order.end(), 0);
    }
    if (Eigen::Index(order.size()) != d) throw std::invalid_argument("complete_unitary: seed order has wrong size");

    Mat basis = cols;
    std::vector<char> used(order.size(), 0);
    while (basis.cols() < d) {
        // pick the seed with the largest component outside the current span
        int best = -1;
        double best_norm = -1.0;
        Vec best_vec;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (used[k]) continue;
            Vec v = Vec::Zero(d);
            v(order[k]) = 1.0;
            for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.adjoint() * v);
            const double nv = v.norm();
            if (nv > best_norm + 1e-12) {
                best = int(k);
                best_norm = nv;
                best_vec = v;
            }
        }
        if (best < 0 || best_norm < 1e-8) throw std::runtime_error("complete_unitary: completion failed");
        used[best] = 1;
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = best_vec / best_norm;
    }
    Mat u(d, d);
    std::vector<char> taken(std::size_t(d), 0);
    for (std::size_t c = 0; c < positions.size(); ++c) {
        if (positions[c] < 0 || positions[c] >= d || taken[positions[c]])
            throw std::invalid_argument("complete_unitary: bad or repeated position");
        u.col(positions[c]) = cols.col(Eigen::Index(c));
        taken[positions[c]] = 1;
    }
    Eigen::Index next = Eigen::Index(positions.size());
    for (Eigen::Index p = 0; p < d; ++p)
        if (!taken[p]) u.col(p) = basis.col(next++);
    return u;
}

namespace {

void emit_unitary(Circuit& c, const Mat& u, const std::vector<int>& qubits, const std::string& label, int hint) {
    if (qubits.size() == 1) {
        c.ops.emplace_back(u1q_from_matrix(u, qubits[0]));
        return;
    }
    Opaque op;
    op.label = label;
    op.qubits = qubits;
    op.matrix = u;
    op.costs = declared_generic_unitary_cost(int(qubits.size()));
    if (hint >= 0) op.costs["all_to_all"] = {hint, hint};
    c.opaque(std::move(op));
}

void prepare_rec(Circuit& c, Vec target, const std::vector<int>& qubits, const SchmidtCostHints& hints) {
    const int k = int(qubits.size());
    target /= target.norm();
    if (k == 1) {
        if (std::abs(target(1)) < 1e-12) return;  // |0> up to a phase
        Mat col = target;
        emit_unitary(c, complete_unitary(col, {0}), qubits, "prep1", -1);
        return;
    }
    const int a = k / 2, b = k - a;
    const Eigen::Index da = Eigen::Index(1) << a, db = Eigen::Index(1) << b;
    Mat m(da, db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < db; ++j) m(i, j) = target(i * db + j);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-12) ++rank;
    if (rank == 0) throw std::invalid_argument("schmidt_prepare: degenerate target");

    const std::vector<int> first(qubits.begin(), qubits.begin() + a);
    const std::vector<int> second(qubits.begin() + a, qubits.end());

    // B: Schmidt coefficients on the first register
    if (rank > 1) {
        Vec sv = Vec::Zero(da);
        for (Eigen::Index i = 0; i < s.size(); ++i) sv(i) = s(i);
        SchmidtCostHints inner;
        inner.u = hints.b_unitary;
        inner.v = hints.b_unitary;
        prepare_rec(c, sv, first, inner);
    }
    // ladder copies the Schmidt index into the top bits of the second register
    for (int i = 0; i < a; ++i) {
        bool needed = false;
        for (int l = 0; l < rank; ++l) needed = needed || ((l >> (a - 1 - i)) & 1);
        if (needed) c.cx(first[i], second[i]);
    }
    const Mat u = svd.matrixU();
    const Mat vbar = svd.matrixV().conjugate();
    std::vector<int> pos;
    for (Eigen::Index l = 0; l < da; ++l) pos.push_back(int(l << (b - a)));
    const Mat w = complete_unitary(vbar.leftCols(da), pos);
    emit_unitary(c, u, first, "schmidt_U", hints.u);
    emit_unitary(c, w, second, "schmidt_V", hints.v);
}

}  // namespace

Circuit schmidt_prepare(const Vec& target, const std::vector<int>& qubits, int n_qubits, const SchmidtCostHints& hints) {
    const int k = int(qubits.size());
    if (k < 1 || k > 6) throw std::invalid_argument("schmidt_prepare: 1 to 6 qubits supported");
    if (target.size() != (Eigen::Index(1) << k)) throw std::invalid_argument("schmidt_prepare: target size mismatch");
    if (target.norm() < 1e-12) throw std::invalid_argument("schmidt_prepare: degenerate target (norm 0)");
    Circuit c(n_qubits);
    prepare_rec(c, target, qubits, hints);
    c.metadata["stage"] = "schmidt_prepare";
    return c;
}

Circuit schmidt_prepare(const Vec& target) {
    int k = 0;
    while ((Eigen::Index(1) << k) < target.size()) ++k;
    std::vector<int> qs(k);
    std::iota(qs.begin(), qs.end(), 0);
    return schmidt_prepare(target, qs, k);
}

}  // namespace vbs
