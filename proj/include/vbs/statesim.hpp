#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "vbs/spinops.hpp"

namespace vbs {

// Qubit q is bit (n - 1 - q) of the amplitude index: qubit 0 is the most
// significant, matching the operator convention.
struct Statevector {
    int n_qubits = 0;
    Vec amps;
    double tracked_norm_sq = 1.0;

    double norm_sq() const { return amps.squaredNorm(); }
};

struct ImpossibleOutcome : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QubitCapExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Simulator cap, 26 unless VBS_MAX_QUBITS is set.
int max_qubits();

Statevector new_zero_state(int n_qubits);
Statevector state_from_amplitudes(const Vec& amps);

void apply_unitary(Statevector& st, const Mat& op, const std::vector<int>& qubits,
                   bool allow_nonunitary = false);
// Probability of `outcome` on qubit q relative to the current norm; no change to st.
double outcome_probability(const Statevector& st, int q, int outcome);
// Keeps the branch with the given outcome. Returns its probability.
double project_qubit(Statevector& st, int q, int outcome, bool renormalize = true);
// Applies op, returns <psi|op^dag op|psi>/<psi|psi>, renormalizes.
double apply_nonunitary(Statevector& st, const Mat& op, const std::vector<int>& qubits);
// Measures q with the rng and flips it back to |0>. Returns the measured bit.
int reset_qubit(Statevector& st, int q, std::mt19937_64& rng);
int measure_qubit(Statevector& st, int q, std::mt19937_64& rng);

cplx overlap(const Statevector& a, const Statevector& b);
double fidelity(const Statevector& a, const Statevector& b);
double fidelity(const Vec& a, const Vec& b);
double expectation(const Statevector& st, const Mat& op, const std::vector<int>& qubits);

// Full-register samples, keyed by basis index.
std::map<std::uint64_t, int> sample(const Statevector& st, std::uint64_t seed, int shots);

// Reduced amplitudes of `keep` qubits when the remaining qubits are in a
// definite basis state; throws when they are not (within tol).
Vec extract_subsystem(const Statevector& st, const std::vector<int>& keep, double tol = 1e-9);

// Embeds a state of `logical.size()` qubits into n_total qubits, logical qubit
// i sitting on physical qubit layout[i]; all other qubits are |0>.
Vec embed_state(const Vec& logical, int n_total, const std::vector<int>& layout);

}  // namespace vbs
