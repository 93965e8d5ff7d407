#include "vbs/statesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace vbs {

namespace {

using Index = std::uint64_t;

Index bit_of(int n, int q) { return Index(1) << (n - 1 - q); }

void check_qubits(const Statevector& st, const std::vector<int>& qubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= st.n_qubits)
            throw std::invalid_argument("qubit index " + std::to_string(qubits[i]) + " out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (qubits[i] == qubits[j]) throw std::invalid_argument("qubit listed twice");
    }
}

// Spreads the bits of `compact` over the positions not in `sorted_masks`.
Index deposit(Index compact, const std::vector<Index>& sorted_masks) {
    Index x = compact;
    for (Index m : sorted_masks) {
        const Index low = x & (m - 1);
        x = ((x ^ low) << 1) | low;
    }
    return x;
}

}  // namespace

int max_qubits() {
    if (const char* env = std::getenv("VBS_MAX_QUBITS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 26;
}

Statevector new_zero_state(int n) {
    if (n > max_qubits())
        throw QubitCapExceeded("new_zero_state: n_qubits=" + std::to_string(n) + " exceeds the cap of " +
                               std::to_string(max_qubits()));
    if (n < 1)
        throw std::invalid_argument("new_zero_state: n_qubits=" + std::to_string(n) + " outside [1," +
                                    std::to_string(max_qubits()) + "]");
    Statevector st;
    st.n_qubits = n;
    st.amps = Vec::Zero(Eigen::Index(1) << n);
    st.amps(0) = 1.0;
    return st;
}

Statevector state_from_amplitudes(const Vec& amps) {
    const auto d = amps.size();
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    if ((Eigen::Index(1) << n) != d || n < 1) throw std::invalid_argument("state_from_amplitudes: size not a power of two");
    if (n > max_qubits()) throw QubitCapExceeded("state_from_amplitudes: qubit cap exceeded");
    Statevector st;
    st.n_qubits = n;
    st.amps = amps;
    return st;
}

void apply_unitary(Statevector& st, const Mat& op, const std::vector<int>& qubits, bool allow_nonunitary) {
    check_qubits(st, qubits);
    const int k = int(qubits.size());
    const Eigen::Index dk = Eigen::Index(1) << k;
    if (op.rows() != dk || op.cols() != dk)
        throw std::invalid_argument("apply_unitary: operator dimension does not match qubit count");
    if (!allow_nonunitary && (op.adjoint() * op - Mat::Identity(dk, dk)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("apply_unitary: operator is not unitary");

    const int n = st.n_qubits;
    std::vector<Index> offsets(dk, 0);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (int j = 0; j < k; ++j)
            if ((a >> (k - 1 - j)) & 1) offsets[a] |= bit_of(n, qubits[j]);
    std::vector<Index> masks;
    for (int q : qubits) masks.push_back(bit_of(n, q));
    std::sort(masks.begin(), masks.end());

    const Index blocks = Index(1) << (n - k);
    Vec local(dk), out(dk);
    for (Index b = 0; b < blocks; ++b) {
        const Index base = deposit(b, masks);
        for (Eigen::Index a = 0; a < dk; ++a) local(a) = st.amps(base | offsets[a]);
        out.noalias() = op * local;
        for (Eigen::Index a = 0; a < dk; ++a) st.amps(base | offsets[a]) = out(a);
    }
}

double outcome_probability(const Statevector& st, int q, int outcome) {
    check_qubits(st, {q});
    const Index m = bit_of(st.n_qubits, q);
    double p = 0.0;
    for (Eigen::Index i = 0; i < st.amps.size(); ++i)
        if (((Index(i) & m) != 0) == (outcome == 1)) p += std::norm(st.amps(i));
    const double total = st.norm_sq();
    if (total <= 0.0) throw ImpossibleOutcome("outcome_probability: zero state");
    return p / total;
}

double project_qubit(Statevector& st, int q, int outcome, bool renormalize) {
    const double p = outcome_probability(st, q, outcome);
    if (p < 1e-14)
        throw ImpossibleOutcome("project_qubit: outcome " + std::to_string(outcome) + " on qubit " +
                                std::to_string(q) + " has probability " + std::to_string(p));
    const double before = st.norm_sq();
    const Index m = bit_of(st.n_qubits, q);
    for (Eigen::Index i = 0; i < st.amps.size(); ++i)
        if (((Index(i) & m) != 0) != (outcome == 1)) st.amps(i) = 0.0;
    if (renormalize) {
        st.amps /= std::sqrt(p * before);
        st.tracked_norm_sq *= p;
    }
    return p;
}

double apply_nonunitary(Statevector& st, const Mat& op, const std::vector<int>& qubits) {
    const double before = st.norm_sq();
    apply_unitary(st, op, qubits, true);
    const double after = st.norm_sq();
    if (after < 1e-14 * before) throw ImpossibleOutcome("apply_nonunitary: image has zero norm");
    st.amps /= std::sqrt(after);
    const double ratio = after / before;
    st.tracked_norm_sq *= ratio;
    return ratio;
}

int measure_qubit(Statevector& st, int q, std::mt19937_64& rng) {
    const double p1 = outcome_probability(st, q, 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int bit = u(rng) < p1 ? 1 : 0;
    project_qubit(st, q, bit, true);
    return bit;
}

int reset_qubit(Statevector& st, int q, std::mt19937_64& rng) {
    const int bit = measure_qubit(st, q, rng);
    if (bit) {
        Mat x(2, 2);
        x << 0, 1, 1, 0;
        apply_unitary(st, x, {q});
    }
    return bit;
}

cplx overlap(const Statevector& a, const Statevector& b) {
    if (a.n_qubits != b.n_qubits) throw std::invalid_argument("overlap: qubit count mismatch");
    const double na = std::sqrt(a.norm_sq()), nb = std::sqrt(b.norm_sq());
    return a.amps.dot(b.amps) / (na * nb);
}

double fidelity(const Statevector& a, const Statevector& b) { return std::norm(overlap(a, b)); }

double fidelity(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("fidelity: size mismatch");
    return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

double expectation(const Statevector& st, const Mat& op, const std::vector<int>& qubits) {
    if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("expectation: operator is not Hermitian");
    Statevector tmp = st;
    apply_unitary(tmp, op, qubits, true);
    const cplx v = st.amps.dot(tmp.amps) / st.norm_sq();
    return v.real();
}

std::map<std::uint64_t, int> sample(const Statevector& st, std::uint64_t seed, int shots) {
    if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
    std::vector<double> cdf(st.amps.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < st.amps.size(); ++i) {
        acc += std::norm(st.amps(i));
        cdf[i] = acc;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, acc);
    std::map<std::uint64_t, int> hist;
    for (int s = 0; s < shots; ++s) {
        const double r = u(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        if (it == cdf.end()) --it;
        ++hist[std::uint64_t(it - cdf.begin())];
    }
    return hist;
}

Vec extract_subsystem(const Statevector& st, const std::vector<int>& keep, double tol) {
    check_qubits(st, keep);
    const int n = st.n_qubits;
    const int k = int(keep.size());
    Index keep_mask = 0;
    for (int q : keep) keep_mask |= bit_of(n, q);
    // locate the dominant amplitude to fix the other qubits' basis state
    Eigen::Index best = 0;
    st.amps.cwiseAbs2().maxCoeff(&best);
    const Index rest = Index(best) & ~keep_mask;
    Vec out = Vec::Zero(Eigen::Index(1) << k);
    double outside = 0.0;
    for (Eigen::Index i = 0; i < st.amps.size(); ++i) {
        if ((Index(i) & ~keep_mask) != rest) {
            outside += std::norm(st.amps(i));
            continue;
        }
        Index local = 0;
        for (int j = 0; j < k; ++j)
            if (Index(i) & bit_of(n, keep[j])) local |= Index(1) << (k - 1 - j);
        out(Eigen::Index(local)) = st.amps(i);
    }
    if (outside > tol * st.norm_sq())
        throw std::invalid_argument("extract_subsystem: remaining qubits are not in a basis state");
    return out;
}

Vec embed_state(const Vec& logical, int n_total, const std::vector<int>& layout) {
    const int k = int(layout.size());
    if (logical.size() != (Eigen::Index(1) << k)) throw std::invalid_argument("embed_state: size mismatch");
    Vec out = Vec::Zero(Eigen::Index(1) << n_total);
    for (Eigen::Index a = 0; a < logical.size(); ++a) {
        Index idx = 0;
        for (int j = 0; j < k; ++j)
            if ((a >> (k - 1 - j)) & 1) idx |= bit_of(n_total, layout[j]);
        out(Eigen::Index(idx)) = logical(a);
    }
    return out;
}

}  // namespace vbs
