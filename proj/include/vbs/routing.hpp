#pragma once

#include <vector>

#include "vbs/circuit.hpp"
#include "vbs/lattice.hpp"

namespace vbs {

struct RoutedCircuit {
    Circuit circuit;                   // on coupling.n_qubits physical qubits
    std::vector<int> initial_layout;   // logical -> physical
    std::vector<int> final_layout;     // logical -> physical after all SWAPs
    int swaps = 0;
};

// Greedy router. For every multi-qubit gate the first qubit is the anchor and
// the others are walked, one SWAP at a time along a shortest path that avoids
// the qubits already gathered, until the gate's qubits form a connected set.
// Empty initial_layout means the identity placement.
RoutedCircuit route(const Circuit& c, const CouplingMap& coupling, std::vector<int> initial_layout = {});

// Fidelity between the post-selected outputs of the original circuit and the
// routed one, after undoing the final permutation. Only physical qubits the
// routed circuit touches are simulated.
double routed_fidelity(const Circuit& original, const RoutedCircuit& routed);

// Marker-free circuit containing only the router's SWAP CNOTs.
Circuit swap_layer(const Circuit& routed);

// One heavy-hex row carrying a strip of the spin-3/2 honeycomb. Each six-qubit
// set holds the three valence bonds of one A site; B sites sit on the corners
// between sets and collect one qubit from each neighbouring set plus one across
// the bridge above.
struct HeavyHexDemo {
    CouplingMap coupling;
    Circuit logical;
    std::vector<int> initial_layout;
    std::vector<std::vector<int>> six_qubit_sets;
    int prep_stage_end = 0;  // index of the barrier closing the preparation stage
};
HeavyHexDemo heavy_hex_honeycomb_demo(int n_sets, bool islands);

struct HeavyHexComposite {
    int prep_depth = 0;
    int swap_depth = 0;
    int test_depth = 0;
    int total = 0;
    int swaps = 0;
    std::vector<int> swaps_per_set;
};
// Layered depth: preparation stage + SWAP layer + slowest spin-3/2 test box.
// Boxes of boundary sites with fewer qubits carry no heavy-hex cost and are skipped.
HeavyHexComposite heavy_hex_composite(const HeavyHexDemo& demo, const RoutedCircuit& routed);

}  // namespace vbs
