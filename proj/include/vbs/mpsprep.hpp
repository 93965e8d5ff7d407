#pragma once

#include <array>
#include <optional>
#include <vector>

#include "vbs/circuit.hpp"
#include "vbs/lattice.hpp"

namespace vbs {

// Site tensor with two physical qubits (sL, sR); a[s] is left_dim x right_dim
// with s = 2*sL + sR.
struct MpsTensor {
    int left_dim = 1;
    int right_dim = 1;
    std::array<Mat, 4> a;

    // (left_dim*4) x right_dim, row index alpha*4 + s.
    Mat as_matrix() const;
    static MpsTensor from_matrix(const Mat& m, int left_dim);
    bool left_normalized(double tol = 1e-12) const;  // sum_s a[s]^dag a[s] = I
};

// Translation-invariant spin-1 tensor of the ring.
MpsTensor vbs_bulk_tensor();

// Ring: N copies of the bulk tensor (trace closure). Open chain: the wrap bond is
// cut, the free ends fixed by the boundary spins (0 = up), then the chain is
// left-canonicalized.
std::vector<MpsTensor> vbs_mps(int n_sites, Boundary boundary, int left_state = 0, int right_state = 0);

// One left-to-right SVD sweep; the final norm is dropped. `max_discarded`
// receives the largest singular value cut away.
std::vector<MpsTensor> left_canonicalize(std::vector<MpsTensor> chain, double* max_discarded = nullptr);

// Amplitudes on 2N qubits, qubit order (sL_0, sR_0, sL_1, ...). Ring tensors are
// traced; open chains must have unit end dimensions. Not normalized.
Vec contract_mps(const std::vector<MpsTensor>& chain, bool periodic);

enum class DisentanglerRole { first_open, bulk, last_open, first_periodic_embedded, last_periodic_state };

// `matrix` is the preparation-direction operator (the inverse of the disentangler):
// a unitary whose constrained columns reproduce the tensor, or a state vector
// for last_* roles.
struct Disentangler {
    Mat matrix;
    DisentanglerRole role = DisentanglerRole::bulk;
    double scale = 1.0;  // embedding scale n for first_periodic_embedded
};

// first_open: 4x4, columns 0,1 = tensor. bulk: 8x8, columns 0,1 = tensor.
// last_open: normalized 8-vector. Throws if the tensor is not left-normalized
// (last_open only needs unit norm).
Disentangler build_disentangler(const MpsTensor& t, DisentanglerRole role, const std::vector<int>& seed_order = {});

// Ring, first site: rows s, columns delta*2 + alpha, entry a[s](delta, alpha).
Mat periodic_first_site_matrix(const MpsTensor& t);
// Ring, last site: 16-vector, index gamma*8 + s*2 + delta, normalized.
Vec periodic_last_site_state(const MpsTensor& t);

// Largest admissible embedding scale, 1/max singular value.
double embedding_scale_bound(const Mat& a_tilde);
// Default scale: 0.5 / sqrt(max singular value).
double default_embedding_scale(const Mat& a_tilde);

// 8x8 unitary [[n*A, B_top], [C, B_bot]] with C = U (I - n^2 S^2)^{1/2} V^dag.
// Throws std::invalid_argument for n outside (0, bound).
Disentangler embed_nonunitary_periodic(const Mat& a_tilde, double n, const std::vector<int>& seed_order = {});

// The bulk preparation operator with the closed-form constants printed in the
// source derivation. corrected = false uses the printed 2*sqrt(2)/3 in `a`,
// which makes b imaginary (entries come out NaN); corrected = true uses
// 2*sqrt(2)/5, the value forced by orthogonality of the first and fourth columns.
Mat printed_bulk_disentangler(bool corrected);

struct MpsOptions {
    std::optional<double> scale;      // periodic embedding scale; default_embedding_scale when empty
    std::vector<int> completion_seed;  // seed order for every completion (first open site keeps entries < 4)
    std::optional<Mat> bulk_override;  // ring only: use this 8x8 for the bulk sites
};

// Data qubits 0..2N-1, plus ancilla 2N on the ring. Prepares site N-1 first;
// the virtual index of bond (i-1, i) travels on qubit sR_{i-1}.
Circuit mps_preparation_circuit(int n_sites, Boundary boundary, int left_state = 0, int right_state = 0,
                                const MpsOptions& opts = {});

struct MpsPreparation {
    Circuit circuit;
    Vec state;                    // normalized, data qubits only
    double success_prob = 1.0;    // ancilla post-selection probability (1 for open chains)
    double scale = 1.0;
};
MpsPreparation prepare_via_mps(int n_sites, Boundary boundary, int left_state = 0, int right_state = 0,
                               const MpsOptions& opts = {});

// Ring post-selection probability for scale n: n^2 (1 + 3 (-1/3)^N) / 2.
double mps_periodic_success(int n_sites, double scale);

// Declared CNOT cost of the MPS route (about 20 per site).
inline constexpr int kMpsDeclaredCnotsPerSite = 20;

}  // namespace vbs
