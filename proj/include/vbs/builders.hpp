#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vbs/circuit.hpp"
#include "vbs/lattice.hpp"

namespace vbs {

// Declared CNOT costs for blocks whose gate-level circuits come from external
// optimizers. One table, versioned by kDeclaredCostsVersion.
inline constexpr const char* kDeclaredCostsVersion = "declared-costs/1";
CostTable declared_hadamard_test_cost(int twice_s);
CostTable declared_cswap_cost();
CostTable declared_island_cost(int twice_s);
CostTable declared_generic_unitary_cost(int n_qubits);

// (|01> - |10>)/sqrt(2) on (top, bottom) from |00>.
Circuit valence_bond_subcircuit(int q_top, int q_bottom, int n_qubits);
Circuit pre_vbs_circuit(const Lattice& lat, const SiteEncoding& enc);

Circuit toffoli_fragment(int c1, int c2, int target, int n_qubits);
Circuit fredkin_fragment(int control, int a, int b, int n_qubits);

struct HadamardTestOptions {
    // Drops the global-phase Z of the spin-1 test; the wanted outcome becomes 0.
    bool drop_phase_z = false;
    // Layout tag for coupling-dependent costs ("T" or "linear" on heavy-hex).
    std::string layout;
};
// Opaque qubit order is (ancilla, site qubits...).
Circuit hadamard_test_fragment(const std::vector<int>& site_qubits, int ancilla, int n_qubits,
                               const HadamardTestOptions& opts = {});
int hadamard_test_expected_outcome(int twice_s, const HadamardTestOptions& opts = {});

Circuit probabilistic_method_circuit(const Lattice& lat, const SiteEncoding& enc,
                                     const HadamardTestOptions& opts = {});

// Two-qubit block moving amplitude sqrt(1 - p) from |10> to |01>; 2 CNOTs.
Circuit w_block(double p, int a, int b, int n_qubits);
double w_block_angle(double p);
Circuit w_state_circuit(int m);

// Each permutation as a SWAP sequence on qubits 0..n-1.
using SwapSeq = std::vector<std::pair<int, int>>;
std::vector<SwapSeq> permutation_circuits(int n_halves);
Mat swap_sequence_operator(const SwapSeq& seq, int n);

enum class LcuVariant { sparse, dense };
int lcu_ancilla_count(int n_halves, LcuVariant v);
// Post-selecting all ancillas on 0 applies the symmetrizer to site_qubits.
Circuit lcu_symmetrization_circuit(int n_halves, const std::vector<int>& site_qubits,
                                   const std::vector<int>& ancillas, LcuVariant variant, int n_qubits);

// Island: 2S valence bonds whose inner ends form one site. Spin-1 qubits are
// bonds (0,1),(2,3), site (1,2); spin-3/2 bonds (0,1),(2,3),(4,5), site (1,3,5).
Vec island_state(int twice_s);
Circuit island_prep_circuit(int twice_s);
// The island circuit as one block with the declared island cost, for routing
// and accounting on constrained couplings. Qubits 0..4S-1.
Opaque island_block(int twice_s);

// Per-block cost hints for schmidt_prepare; -1 keeps the generic value.
struct SchmidtCostHints {
    int b_unitary = -1;  // cost of the multi-qubit unitary inside B
    int u = -1;
    int v = -1;
};
// Prepares `target` on qubits[0..k) (qubits[0] most significant) from |0...0>.
Circuit schmidt_prepare(const Vec& target, const std::vector<int>& qubits, int n_qubits,
                        const SchmidtCostHints& hints = {});
Circuit schmidt_prepare(const Vec& target);

// Unitary whose columns at `positions` equal the columns of `cols`; the rest is
// an orthonormal completion. `seed_order` permutes the basis vectors used to
// seed the completion (empty = natural order).
Mat complete_unitary(const Mat& cols, const std::vector<int>& positions,
                     const std::vector<int>& seed_order = {});

}  // namespace vbs
