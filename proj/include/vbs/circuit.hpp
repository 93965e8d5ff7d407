#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "vbs/spinops.hpp"
#include "vbs/statesim.hpp"

namespace vbs {

// CNOT cost of an opaque block. count < 0 means the source only gives a depth.
struct DeclaredCost {
    int count = 0;
    int depth = 0;
};
using CostTable = std::map<std::string, DeclaredCost>;

struct Circuit;

struct Cnot {
    int control = 0;
    int target = 0;
    bool from_swap = false;  // inserted by the router
};

// U(theta, phi, lambda) = [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]
struct U1q {
    double theta = 0, phi = 0, lambda = 0;
    int qubit = 0;
};

struct Opaque {
    std::string label;
    std::vector<int> qubits;
    Mat matrix;
    CostTable costs;
    // Shape tag for couplings where the cost depends on the qubit layout
    // (heavy-hex T box vs linear box). Looked up as "<coupling>:<layout>".
    std::string layout;
    // Optional expansion in CNOT/U1q on local indices 0..k-1.
    std::shared_ptr<const Circuit> basis;
};

// Post-selection marker: the run is kept only if qubit reads `expect`.
struct Measure {
    int qubit = 0;
    int expect = 1;
};

struct Reset {
    int qubit = 0;
};

struct Barrier {};

// Measure qubit; on a result other than `expect`, reset `reset_qubits` and
// resume at instruction index `restart`. Post-selection mode treats it as a Measure.
struct RetryFrom {
    int qubit = 0;
    int expect = 1;
    int restart = 0;
    std::vector<int> reset_qubits;
};

using Instr = std::variant<Cnot, U1q, Opaque, Measure, Reset, Barrier, RetryFrom>;

struct Circuit {
    int n_qubits = 0;
    std::vector<Instr> ops;
    std::map<std::string, std::string> metadata;

    explicit Circuit(int n = 0) : n_qubits(n) {}

    void cx(int c, int t);
    void u(double theta, double phi, double lambda, int q);
    void h(int q);
    void x(int q);
    void z(int q);
    void ry(double angle, int q);
    void opaque(Opaque op);
    void measure(int q, int expect);
    void barrier();
    // Appends `frag`, mapping its qubit i to qubits[i] (identity when empty).
    void append(const Circuit& frag, const std::vector<int>& qubits = {});
    void validate() const;
};

std::vector<int> instr_qubits(const Instr& in);
Mat u1q_matrix(double theta, double phi, double lambda);
// theta, phi, lambda with u1q_matrix(...) equal to m up to a global phase.
U1q u1q_from_matrix(const Mat& m, int qubit);
// Gate matrix of a unitary instruction on its own qubit order.
Mat instr_matrix(const Instr& in);

Circuit inverse(const Circuit& c);
// Full unitary of a marker-free circuit (columns by simulation).
Mat circuit_unitary(const Circuit& c);

struct SimResult {
    double success_prob = 1.0;  // product of post-selected branch probabilities
    std::vector<int> outcomes;   // per Measure/RetryFrom in order, post-selection mode
};

// Post-selection mode: every Measure/RetryFrom projects onto its expected value.
SimResult simulate(const Circuit& c, Statevector& st);
Statevector run_circuit(const Circuit& c, SimResult* res = nullptr);

struct Trajectory {
    bool success = true;
    std::vector<int> outcomes;
    std::vector<int> retries;  // failed attempts per RetryFrom index in the circuit
};
// Sampled run: markers are measured with the rng; RetryFrom loops until success
// (bounded by max_retries per marker).
Trajectory run_trajectory(const Circuit& c, Statevector& st, std::mt19937_64& rng, int max_retries = 10000);

// Accounting. Opaque gates use their declared cost for the coupling name.
int cnot_count(const Circuit& c, const std::string& coupling = "all_to_all");
int cnot_depth(const Circuit& c, const std::string& coupling = "all_to_all");
int count_opaque(const Circuit& c, const std::string& label_prefix);
// Expands every Opaque with a basis fragment; throws when one has none.
Circuit expand_to_basis(const Circuit& c);

}  // namespace vbs
