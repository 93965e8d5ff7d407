#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vbs/builders.hpp"
#include "vbs/circuit.hpp"
#include "vbs/lattice.hpp"

namespace vbs {

// Direct construction: singlets on every link and fixed dangling spins written
// as amplitudes, then the symmetrizer applied site by site. Data qubits are in
// assign_qubits order. `norm_sq` receives the squared norm before normalization.
Vec pre_vbs_state(const Lattice& lat);
Vec oracle_vbs_state(const Lattice& lat, double* norm_sq = nullptr);

// Sites that get islands (sublattice A) and Hadamard tests (B).
std::vector<int> sublattice_sites(const Lattice& lat, Sublattice which);

// Islands on A sites (declared island blocks when the site has no dangling
// spin, a Schmidt circuit of the local island otherwise), then Hadamard tests
// on B sites.
Circuit islands_method_circuit(const Lattice& lat, const SiteEncoding& enc, const HadamardTestOptions& opts = {});

// A sites one at a time: prepare the island's bonds, test, and on failure reset
// the island and its ancilla and start the island again. B sites are tested once.
Circuit retry_method_circuit(const Lattice& lat, const SiteEncoding& enc);

// Symmetrizes every site with the LCU block, reusing one ancilla register.
// Data qubits first, ancillas after.
Circuit lcu_method_circuit(const Lattice& lat, LcuVariant variant);

struct RouteState {
    std::string route;
    Vec state;                  // normalized, data qubits only
    double success_prob = 1.0;  // post-selection probability (sampled runs: 1)
    int total_qubits = 0;
    Circuit circuit;
    std::vector<int> retries;   // sampled retry route only
    int attempts = 1;           // sampled retry route: whole-circuit attempts
};

// Routes: probabilistic, probabilistic_nophase (spin-1, phase Z dropped),
// mitigated_islands, mitigated_retry (sampled with `seed`), lcu_sparse,
// lcu_dense, mps. Throws std::invalid_argument for incompatible lattices.
// Circuit of a route without simulating it.
Circuit route_circuit(const Lattice& lat, const std::string& route);
RouteState run_route(const Lattice& lat, const std::string& route, std::uint64_t seed = 1);
std::vector<std::string> compatible_routes(const Lattice& lat);

// Largest ||P |psi>|| over neighbouring site pairs (AKLT two-site projector).
double max_projector_residual(const Lattice& lat, const Vec& state);
// Sum of the S=1 bilinear-biquadratic terms at beta = 1/3 over links.
double aklt_energy(const Lattice& lat, const Vec& state);

}  // namespace vbs
