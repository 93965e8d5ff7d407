#include "vbs/builders.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vbs {

namespace {

constexpr double kPi = std::numbers::pi;

Mat controlled(const Mat& u) {
    const auto d = u.rows();
    Mat c = Mat::Identity(2 * d, 2 * d);
    c.bottomRightCorner(d, d) = u;
    return c;
}

Mat swap_matrix() {
    Mat s = Mat::Zero(4, 4);
    s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
    return s;
}

Opaque cswap_gate(int control, int a, int b) {
    Opaque op;
    op.label = "cswap";
    op.qubits = {control, a, b};
    op.matrix = controlled(swap_matrix());
    op.costs = declared_cswap_cost();
    op.basis = std::make_shared<const Circuit>(fredkin_fragment(0, 1, 2, 3));
    return op;
}

int factorial(int n) {
    int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

int ceil_log2(int m) {
    int a = 0;
    while ((1 << a) < m) ++a;
    return a;
}

}  // namespace

CostTable declared_hadamard_test_cost(int twice_s) {
    switch (twice_s) {
        case 1: return {{"all_to_all", {0, 0}}, {"linear", {0, 0}}, {"heavy_hex", {0, 0}}};
        case 2: return {{"all_to_all", {7, 7}}, {"linear", {9, 9}}};
        case 3:
            return {{"all_to_all", {26, 26}},
                    {"heavy_hex:T", {39, 39}},
                    {"heavy_hex:linear", {41, 41}}};
        default: return {};
    }
}

CostTable declared_cswap_cost() { return {{"all_to_all", {7, 7}}}; }

CostTable declared_island_cost(int twice_s) {
    switch (twice_s) {
        case 2: return {{"all_to_all", {7, 4}}, {"linear", {-1, 8}}};
        case 3: return {{"all_to_all", {35, 19}}, {"heavy_hex", {-1, 57}}};
        default: return {};
    }
}

CostTable declared_generic_unitary_cost(int n_qubits) {
    switch (n_qubits) {
        case 1: return {{"all_to_all", {0, 0}}};
        case 2: return {{"all_to_all", {3, 3}}};
        case 3: return {{"all_to_all", {20, 20}}};
        default: return {};
    }
}

Circuit valence_bond_subcircuit(int top, int bottom, int n_qubits) {
    if (top == bottom) throw std::invalid_argument("valence_bond_subcircuit: qubits must differ");
    Circuit c(n_qubits);
    c.h(top);
    c.x(bottom);
    c.cx(top, bottom);
    c.z(top);
    return c;
}

Circuit pre_vbs_circuit(const Lattice& lat, const SiteEncoding& enc) {
    if (enc.link_qubits.size() != lat.links.size() || enc.dangling_qubits.size() != lat.dangling.size())
        throw std::invalid_argument("pre_vbs_circuit: encoding does not match lattice");
    Circuit c(enc.total_qubits);
    for (const auto& [a, b] : enc.link_qubits) {
        if (a < 0 || b < 0) throw std::invalid_argument("pre_vbs_circuit: link without qubits");
        c.append(valence_bond_subcircuit(a, b, enc.total_qubits));
    }
    for (std::size_t d = 0; d < lat.dangling.size(); ++d)
        if (lat.dangling[d].state == 1) c.x(enc.dangling_qubits[d]);
    c.metadata["stage"] = "pre_vbs";
    c.metadata["lattice"] = lat.name;
    return c;
}

Circuit toffoli_fragment(int c1, int c2, int t, int n_qubits) {
    Circuit c(n_qubits);
    auto tg = [&](int q) { c.u(0, 0, kPi / 4, q); };
    auto tdg = [&](int q) { c.u(0, 0, -kPi / 4, q); };
    c.h(t);
    c.cx(c2, t);
    tdg(t);
    c.cx(c1, t);
    tg(t);
    c.cx(c2, t);
    tdg(t);
    c.cx(c1, t);
    tg(c2);
    tg(t);
    c.h(t);
    c.cx(c1, c2);
    tg(c1);
    tdg(c2);
    c.cx(c1, c2);
    return c;
}

Circuit fredkin_fragment(int control, int a, int b, int n_qubits) {
    Circuit c(n_qubits);
    c.cx(b, a);
    c.append(toffoli_fragment(control, a, b, n_qubits));
    c.cx(b, a);
    c.metadata["expansion"] = "textbook-8-cnot";
    return c;
}

int hadamard_test_expected_outcome(int twice_s, const HadamardTestOptions& opts) {
    return (twice_s == 2 && opts.drop_phase_z) ? 0 : 1;
}

Circuit hadamard_test_fragment(const std::vector<int>& site, int ancilla, int n_qubits,
                               const HadamardTestOptions& opts) {
    if (ancilla < 0) throw std::invalid_argument("hadamard_test_fragment: site has no ancilla");
    const int n = int(site.size());
    Opaque op;
    op.qubits.push_back(ancilla);
    op.qubits.insert(op.qubits.end(), site.begin(), site.end());
    op.costs = declared_hadamard_test_cost(n);
    op.layout = opts.layout;
    const bool drop = opts.drop_phase_z && n == 2;
    if (drop) {
        op.label = "ctrl_swap";
        op.matrix = controlled(swap_matrix());
        op.basis = std::make_shared<const Circuit>(fredkin_fragment(0, 1, 2, 3));
    } else {
        op.label = "ctrl_exp_sym" + std::to_string(n);
        op.matrix = controlled(exp_minus_i_pi_symmetrizer(n).m);
        if (n == 1) {
            Circuit b(2);
            b.z(0);
            op.basis = std::make_shared<const Circuit>(b);
        } else if (n == 2) {
            Circuit b(3);
            b.z(0);
            b.append(fredkin_fragment(0, 1, 2, 3));
            op.basis = std::make_shared<const Circuit>(b);
        }
    }
    Circuit c(n_qubits);
    c.h(ancilla);
    c.opaque(std::move(op));
    c.h(ancilla);
    c.measure(ancilla, drop ? 0 : 1);
    c.metadata["expected_outcome"] = drop ? "0" : "1";
    return c;
}

Circuit probabilistic_method_circuit(const Lattice& lat, const SiteEncoding& enc, const HadamardTestOptions& opts) {
    Circuit c = pre_vbs_circuit(lat, enc);
    for (int s = 0; s < lat.n_sites; ++s) {
        if (enc.ancilla[s] < 0) throw std::invalid_argument("probabilistic_method_circuit: needs an ancilla per site");
        c.append(hadamard_test_fragment(enc.site_qubits[s], enc.ancilla[s], enc.total_qubits, opts));
    }
    c.metadata["stage"] = "probabilistic";
    c.metadata["method"] = "probabilistic";
    return c;
}

double w_block_angle(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("w_block_angle: p must be in (0,1]");
    return std::asin(std::cos(std::atan(std::sqrt((1.0 - p) / p))));
}

Circuit w_block(double p, int a, int b, int n_qubits) {
    const double th = w_block_angle(p);
    Circuit c(n_qubits);
    c.ry(th, b);
    c.cx(a, b);
    c.ry(-th, b);
    c.cx(b, a);
    return c;
}

Circuit w_state_circuit(int m) {
    if (m < 2) throw std::invalid_argument("w_state_circuit: m must be >= 2");
    Circuit c(m);
    c.x(0);
    for (int k = 0; k + 1 < m; ++k) c.append(w_block(1.0 / (m - k), k, k + 1, m));
    c.metadata["stage"] = "w_state";
    return c;
}

std::vector<SwapSeq> permutation_circuits(int n) {
    if (n < 1 || n > kMaxSymmetrizerQubits) throw std::invalid_argument("permutation_circuits: n out of range");
    std::vector<SwapSeq> seqs{{}};
    for (int k = 2; k <= n; ++k) {
        std::vector<SwapSeq> next;
        for (const auto& s : seqs) {
            next.push_back(s);
            for (int j = 0; j + 1 < k; ++j) {
                SwapSeq t = s;
                t.push_back({j, k - 1});
                next.push_back(std::move(t));
            }
        }
        seqs = std::move(next);
    }
    return seqs;
}

Mat swap_sequence_operator(const SwapSeq& seq, int n) {
    const auto d = Eigen::Index(1) << n;
    Mat m = Mat::Identity(d, d);
    for (const auto& [a, b] : seq) {
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        std::swap(perm[a], perm[b]);
        m = permutation_operator(perm) * m;
    }
    return m;
}

int lcu_ancilla_count(int n, LcuVariant v) {
    const int m = factorial(n);
    return v == LcuVariant::sparse ? m : ceil_log2(m);
}

Circuit lcu_symmetrization_circuit(int n, const std::vector<int>& site, const std::vector<int>& anc,
                                   LcuVariant variant, int n_qubits) {
    if (int(site.size()) != n) throw std::invalid_argument("lcu: site qubit count must equal n_halves");
    if (int(anc.size()) != lcu_ancilla_count(n, variant))
        throw std::invalid_argument("lcu: wrong ancilla count (need " + std::to_string(lcu_ancilla_count(n, variant)) +
                                    ", got " + std::to_string(anc.size()) + ")");
    const auto perms = permutation_circuits(n);
    const int m = int(perms.size());
    Circuit c(n_qubits);
    Circuit prep;
    if (variant == LcuVariant::sparse) {
        prep = w_state_circuit(m);
        c.append(prep, anc);
        for (int j = 0; j < m; ++j)
            for (const auto& [a, b] : perms[j]) c.opaque(cswap_gate(anc[j], site[a], site[b]));
        c.append(inverse(prep), anc);
    } else {
        const int a = int(anc.size());
        if ((1 << a) == m) {
            prep = Circuit(a);
            for (int q = 0; q < a; ++q) prep.h(q);
        } else {
            Vec uniform = Vec::Zero(1 << a);
            for (int j = 0; j < m; ++j) uniform(j) = 1.0 / std::sqrt(double(m));
            prep = schmidt_prepare(uniform);
        }
        c.append(prep, anc);
        for (int j = 0; j < m; ++j) {
            if (perms[j].empty()) continue;
            if (a == 1 && perms[j].size() == 1) {
                c.opaque(cswap_gate(anc[0], site[perms[j][0].first], site[perms[j][0].second]));
                continue;
            }
            Opaque sel;
            sel.label = "select_" + std::to_string(j);
            sel.qubits = anc;
            sel.qubits.insert(sel.qubits.end(), site.begin(), site.end());
            const auto da = Eigen::Index(1) << a;
            const auto ds = Eigen::Index(1) << n;
            Mat proj = Mat::Zero(da, da);
            proj(j, j) = 1.0;
            sel.matrix = kron(proj, swap_sequence_operator(perms[j], n)) +
                         kron(Mat::Identity(da, da) - proj, Mat::Identity(ds, ds));
            c.opaque(std::move(sel));
        }
        c.append(inverse(prep), anc);
    }
    for (int q : anc) c.measure(q, 0);
    c.metadata["stage"] = "lcu";
    c.metadata["variant"] = variant == LcuVariant::sparse ? "sparse" : "dense";
    return c;
}

Vec island_state(int twice_s) {
    if (twice_s != 2 && twice_s != 3) throw std::invalid_argument("island_state: 2S must be 2 or 3");
    const int k = 2 * twice_s;
    Circuit c(k);
    for (int b = 0; b < twice_s; ++b) c.append(valence_bond_subcircuit(2 * b, 2 * b + 1, k));
    const std::vector<int> site = twice_s == 2 ? std::vector<int>{1, 2} : std::vector<int>{1, 3, 5};
    Statevector st = run_circuit(c);
    apply_nonunitary(st, symmetrizer(twice_s).m, site);
    return st.amps;
}

Circuit island_prep_circuit(int twice_s) {
    SchmidtCostHints hints;
    if (twice_s == 2) {
        hints.u = 2;
        hints.v = 2;
    } else if (twice_s == 3) {
        hints.b_unitary = 2;
        hints.u = 14;
        hints.v = 15;
    } else {
        throw std::invalid_argument("island_prep_circuit: 2S must be 2 or 3");
    }
    const int k = 2 * twice_s;
    std::vector<int> qs(k);
    for (int i = 0; i < k; ++i) qs[i] = i;
    Circuit c = schmidt_prepare(island_state(twice_s), qs, k, hints);
    c.metadata["stage"] = "island";
    c.metadata["spin_twice"] = std::to_string(twice_s);
    return c;
}

Opaque island_block(int twice_s) {
    const Circuit c = island_prep_circuit(twice_s);
    Opaque op;
    op.label = "island" + std::to_string(twice_s);
    for (int q = 0; q < c.n_qubits; ++q) op.qubits.push_back(q);
    op.matrix = circuit_unitary(c);
    op.costs = declared_island_cost(twice_s);
    op.basis = std::make_shared<const Circuit>(c);
    return op;
}

}  // namespace vbs
