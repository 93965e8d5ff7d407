#include "vbs/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vbs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Mat& cnot_matrix() {
    static const Mat m = [] {
        Mat c = Mat::Zero(4, 4);
        c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
        return c;
    }();
    return m;
}

const DeclaredCost& lookup_cost(const Opaque& op, const std::string& coupling) {
    if (!op.layout.empty()) {
        auto it = op.costs.find(coupling + ":" + op.layout);
        if (it != op.costs.end()) return it->second;
    }
    auto it = op.costs.find(coupling);
    if (it == op.costs.end())
        throw std::runtime_error("no declared CNOT cost for opaque '" + op.label + "' on coupling '" + coupling + "'");
    return it->second;
}

}  // namespace

void Circuit::cx(int c, int t) { ops.emplace_back(Cnot{c, t, false}); }
void Circuit::u(double theta, double phi, double lambda, int q) { ops.emplace_back(U1q{theta, phi, lambda, q}); }
void Circuit::h(int q) { u(std::numbers::pi / 2, 0.0, std::numbers::pi, q); }
void Circuit::x(int q) { u(std::numbers::pi, 0.0, std::numbers::pi, q); }
void Circuit::z(int q) { u(0.0, 0.0, std::numbers::pi, q); }
void Circuit::ry(double angle, int q) { u(angle, 0.0, 0.0, q); }
void Circuit::opaque(Opaque op) { ops.emplace_back(std::move(op)); }
void Circuit::measure(int q, int expect) { ops.emplace_back(Measure{q, expect}); }
void Circuit::barrier() { ops.emplace_back(Barrier{}); }

void Circuit::append(const Circuit& frag, const std::vector<int>& qubits) {
    auto map = [&](int q) {
        if (qubits.empty()) return q;
        if (q < 0 || q >= int(qubits.size())) throw std::invalid_argument("append: fragment qubit outside mapping");
        return qubits[q];
    };
    const int offset = int(ops.size());
    for (const auto& in : frag.ops) {
        Instr copy = in;
        std::visit(overloaded{
                       [&](Cnot& g) { g.control = map(g.control); g.target = map(g.target); },
                       [&](U1q& g) { g.qubit = map(g.qubit); },
                       [&](Opaque& g) { for (int& q : g.qubits) q = map(q); },
                       [&](Measure& g) { g.qubit = map(g.qubit); },
                       [&](Reset& g) { g.qubit = map(g.qubit); },
                       [&](Barrier&) {},
                       [&](RetryFrom& g) {
                           g.qubit = map(g.qubit);
                           g.restart += offset;
                           for (int& q : g.reset_qubits) q = map(q);
                       },
                   },
                   copy);
        ops.push_back(std::move(copy));
    }
}

std::vector<int> instr_qubits(const Instr& in) {
    return std::visit(overloaded{
                          [](const Cnot& g) { return std::vector<int>{g.control, g.target}; },
                          [](const U1q& g) { return std::vector<int>{g.qubit}; },
                          [](const Opaque& g) { return g.qubits; },
                          [](const Measure& g) { return std::vector<int>{g.qubit}; },
                          [](const Reset& g) { return std::vector<int>{g.qubit}; },
                          [](const Barrier&) { return std::vector<int>{}; },
                          [](const RetryFrom& g) {
                              std::vector<int> q{g.qubit};
                              for (int r : g.reset_qubits)
                                  if (r != g.qubit) q.push_back(r);
                              return q;
                          },
                      },
                      in);
}

void Circuit::validate() const {
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto qs = instr_qubits(ops[i]);
        for (std::size_t a = 0; a < qs.size(); ++a) {
            if (qs[a] < 0 || qs[a] >= n_qubits)
                throw std::invalid_argument("circuit: instruction " + std::to_string(i) + " addresses qubit " +
                                            std::to_string(qs[a]) + " of " + std::to_string(n_qubits));
            for (std::size_t b = 0; b < a; ++b)
                if (qs[a] == qs[b])
                    throw std::invalid_argument("circuit: instruction " + std::to_string(i) + " repeats a qubit");
        }
        if (const auto* op = std::get_if<Opaque>(&ops[i])) {
            const auto d = Eigen::Index(1) << op->qubits.size();
            if (op->matrix.rows() != d || op->matrix.cols() != d)
                throw std::invalid_argument("circuit: opaque '" + op->label + "' has wrong matrix size");
        }
        if (const auto* r = std::get_if<RetryFrom>(&ops[i]))
            if (r->restart < 0 || r->restart > int(i)) throw std::invalid_argument("circuit: bad retry target");
    }
}

Mat u1q_matrix(double t, double p, double l) {
    Mat m(2, 2);
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    m(0, 0) = c;
    m(0, 1) = -std::polar(1.0, l) * s;
    m(1, 0) = std::polar(1.0, p) * s;
    m(1, 1) = std::polar(1.0, p + l) * c;
    return m;
}

U1q u1q_from_matrix(const Mat& w, int qubit) {
    if (w.rows() != 2 || w.cols() != 2) throw std::invalid_argument("u1q_from_matrix: need 2x2");
    const double tiny = 1e-12;
    const double c = std::abs(w(0, 0)), s = std::abs(w(1, 0));
    U1q g;
    g.qubit = qubit;
    g.theta = 2.0 * std::atan2(s, c);
    const double alpha = c > tiny ? std::arg(w(0, 0)) : std::arg(w(1, 0));
    g.phi = s > tiny ? std::arg(w(1, 0)) - alpha : 0.0;
    if (c > tiny && s <= tiny) g.lambda = std::arg(w(1, 1)) - alpha - g.phi;
    else g.lambda = std::arg(-w(0, 1)) - alpha;
    const Mat back = std::polar(1.0, alpha) * u1q_matrix(g.theta, g.phi, g.lambda);
    if ((back - w).cwiseAbs().maxCoeff() > 1e-9) throw std::invalid_argument("u1q_from_matrix: matrix is not unitary");
    return g;
}

Mat instr_matrix(const Instr& in) {
    if (std::holds_alternative<Cnot>(in)) return cnot_matrix();
    if (const auto* g = std::get_if<U1q>(&in)) return u1q_matrix(g->theta, g->phi, g->lambda);
    if (const auto* g = std::get_if<Opaque>(&in)) return g->matrix;
    throw std::invalid_argument("instr_matrix: marker has no matrix");
}

Circuit inverse(const Circuit& c) {
    Circuit out(c.n_qubits);
    out.metadata = c.metadata;
    for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) {
        std::visit(overloaded{
                       [&](const Cnot& g) { out.ops.emplace_back(g); },
                       [&](const U1q& g) { out.ops.emplace_back(U1q{-g.theta, -g.lambda, -g.phi, g.qubit}); },
                       [&](const Opaque& g) {
                           Opaque inv = g;
                           inv.label = g.label + "_dg";
                           inv.matrix = g.matrix.adjoint();
                           if (g.basis) inv.basis = std::make_shared<const Circuit>(inverse(*g.basis));
                           out.ops.emplace_back(std::move(inv));
                       },
                       [&](const Barrier& g) { out.ops.emplace_back(g); },
                       [&](const auto&) { throw std::invalid_argument("inverse: circuit contains markers"); },
                   },
                   *it);
    }
    return out;
}

Mat circuit_unitary(const Circuit& c) {
    const Eigen::Index d = Eigen::Index(1) << c.n_qubits;
    Mat u(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        Statevector st;
        st.n_qubits = c.n_qubits;
        st.amps = Vec::Zero(d);
        st.amps(col) = 1.0;
        for (const auto& in : c.ops) {
            if (std::holds_alternative<Barrier>(in)) continue;
            if (std::holds_alternative<Measure>(in) || std::holds_alternative<Reset>(in) ||
                std::holds_alternative<RetryFrom>(in))
                throw std::invalid_argument("circuit_unitary: circuit contains markers");
            apply_unitary(st, instr_matrix(in), instr_qubits(in));
        }
        u.col(col) = st.amps;
    }
    return u;
}

SimResult simulate(const Circuit& c, Statevector& st) {
    if (st.n_qubits != c.n_qubits) throw std::invalid_argument("simulate: register size mismatch");
    c.validate();
    SimResult res;
    for (const auto& in : c.ops) {
        if (const auto* m = std::get_if<Measure>(&in)) {
            res.success_prob *= project_qubit(st, m->qubit, m->expect, true);
            res.outcomes.push_back(m->expect);
        } else if (const auto* r = std::get_if<RetryFrom>(&in)) {
            res.success_prob *= project_qubit(st, r->qubit, r->expect, true);
            res.outcomes.push_back(r->expect);
        } else if (const auto* z = std::get_if<Reset>(&in)) {
            const double p1 = outcome_probability(st, z->qubit, 1);
            if (p1 > 1e-12 && p1 < 1 - 1e-12)
                throw std::runtime_error("simulate: reset of an undetermined qubit needs a sampled run");
            if (p1 >= 1 - 1e-12) apply_unitary(st, u1q_matrix(std::numbers::pi, 0, std::numbers::pi), {z->qubit});
        } else if (!std::holds_alternative<Barrier>(in)) {
            apply_unitary(st, instr_matrix(in), instr_qubits(in));
        }
    }
    return res;
}

Statevector run_circuit(const Circuit& c, SimResult* res) {
    Statevector st = new_zero_state(c.n_qubits);
    SimResult r = simulate(c, st);
    if (res) *res = r;
    return st;
}

Trajectory run_trajectory(const Circuit& c, Statevector& st, std::mt19937_64& rng, int max_retries) {
    if (st.n_qubits != c.n_qubits) throw std::invalid_argument("run_trajectory: register size mismatch");
    Trajectory tr;
    std::map<std::size_t, int> retry_slot;
    for (std::size_t i = 0; i < c.ops.size(); ++i)
        if (std::holds_alternative<RetryFrom>(c.ops[i])) retry_slot.emplace(i, int(retry_slot.size()));
    tr.retries.assign(retry_slot.size(), 0);
    std::size_t pc = 0;
    while (pc < c.ops.size()) {
        const auto& in = c.ops[pc];
        if (const auto* m = std::get_if<Measure>(&in)) {
            const int bit = measure_qubit(st, m->qubit, rng);
            tr.outcomes.push_back(bit);
            if (bit != m->expect) {
                tr.success = false;
                return tr;
            }
        } else if (const auto* r = std::get_if<RetryFrom>(&in)) {
            const int bit = measure_qubit(st, r->qubit, rng);
            if (bit != r->expect) {
                int& count = tr.retries[retry_slot.at(pc)];
                if (++count > max_retries) {
                    tr.success = false;
                    return tr;
                }
                for (int q : r->reset_qubits) reset_qubit(st, q, rng);
                pc = std::size_t(r->restart);
                continue;
            }
            tr.outcomes.push_back(bit);
        } else if (const auto* z = std::get_if<Reset>(&in)) {
            reset_qubit(st, z->qubit, rng);
        } else if (!std::holds_alternative<Barrier>(in)) {
            apply_unitary(st, instr_matrix(in), instr_qubits(in));
        }
        ++pc;
    }
    return tr;
}

int cnot_count(const Circuit& c, const std::string& coupling) {
    int total = 0;
    for (const auto& in : c.ops) {
        if (std::holds_alternative<Cnot>(in)) {
            ++total;
        } else if (const auto* op = std::get_if<Opaque>(&in)) {
            const auto& cost = lookup_cost(*op, coupling);
            if (cost.count < 0)
                throw std::runtime_error("opaque '" + op->label + "' has only a declared depth on '" + coupling + "'");
            total += cost.count;
        }
    }
    return total;
}

int cnot_depth(const Circuit& c, const std::string& coupling) {
    std::vector<int> avail(c.n_qubits, 0);
    for (const auto& in : c.ops) {
        if (std::holds_alternative<Barrier>(in)) {
            const int m = avail.empty() ? 0 : *std::max_element(avail.begin(), avail.end());
            std::fill(avail.begin(), avail.end(), m);
            continue;
        }
        int d = 0;
        if (std::holds_alternative<Cnot>(in)) d = 1;
        else if (const auto* op = std::get_if<Opaque>(&in)) d = lookup_cost(*op, coupling).depth;
        const auto qs = instr_qubits(in);
        int start = 0;
        for (int q : qs) start = std::max(start, avail[q]);
        if (d > 0 || qs.size() > 1)
            for (int q : qs) avail[q] = start + d;
    }
    return avail.empty() ? 0 : *std::max_element(avail.begin(), avail.end());
}

int count_opaque(const Circuit& c, const std::string& prefix) {
    int n = 0;
    for (const auto& in : c.ops)
        if (const auto* op = std::get_if<Opaque>(&in))
            if (op->label.rfind(prefix, 0) == 0) ++n;
    return n;
}

Circuit expand_to_basis(const Circuit& c) {
    Circuit out(c.n_qubits);
    out.metadata = c.metadata;
    for (const auto& in : c.ops) {
        if (const auto* op = std::get_if<Opaque>(&in)) {
            if (!op->basis)
                throw std::runtime_error("opaque '" + op->label + "' has no registered basis expansion");
            out.append(expand_to_basis(*op->basis), op->qubits);
        } else {
            out.ops.push_back(in);
        }
    }
    return out;
}

}  // namespace vbs
