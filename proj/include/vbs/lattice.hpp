#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace vbs {

enum class Boundary { open_chain, ring, explicit_graph };
enum class Sublattice { A, B };

// Unbonded spin-1/2 attached to a site (open chain ends). state 0 = up, 1 = down.
struct DanglingSpin {
    int site = 0;
    int state = 0;
};

struct Lattice {
    std::string name;
    int n_sites = 0;
    // Link (a, b): the singlet is written with a's qubit first.
    std::vector<std::pair<int, int>> links;
    Boundary boundary = Boundary::explicit_graph;
    std::vector<DanglingSpin> dangling;
    // Per site, ordered incidences: value >= 0 is a link index, value < 0 is
    // dangling index -(v + 1). The order fixes the data-qubit order of the site.
    std::vector<std::vector<int>> ports;
    std::optional<std::vector<Sublattice>> sublattice;

    int coordination(int site) const;      // incident links, with multiplicity
    int qubits_at(int site) const;         // 2S of the site
    bool uniform_spin(int twice_s) const;
    void validate() const;
};

Lattice build_chain(int n_sites, Boundary boundary, int left_state = 0, int right_state = 0);
Lattice build_three_link_pair();
Lattice build_honeycomb_patch(int rows, int cols);
// Even ring whose links alternate between doubled and single, so every site
// has coordination 3.
Lattice build_multigraph_ring(int n_sites);
// Ports default to link order, dangling spins last.
Lattice lattice_from_links(int n_sites, std::vector<std::pair<int, int>> links,
                           std::vector<DanglingSpin> dangling = {}, std::string name = "graph");

// Two-colouring by BFS from site 0 (site 0 is A). Throws std::invalid_argument
// naming the offending link when an odd cycle exists.
std::vector<Sublattice> two_coloring(const Lattice& lat);
bool is_bipartite(const Lattice& lat);

nlohmann::json lattice_to_json(const Lattice& lat);
Lattice lattice_from_json(const nlohmann::json& j);

enum class EncodingMethod { hadamard_all, islands_plus_sublattice, mps };

struct SiteEncoding {
    std::vector<std::vector<int>> site_qubits;     // per site, in port order
    std::vector<int> ancilla;                      // per site, -1 when none
    std::vector<int> ancilla_pool;                 // all ancilla qubits
    std::vector<std::pair<int, int>> link_qubits;  // per link: (qubit on first site, qubit on second)
    std::vector<int> dangling_qubits;
    int n_data = 0;
    int total_qubits = 0;
};

SiteEncoding assign_qubits(const Lattice& lat, EncodingMethod method);

struct CouplingMap {
    std::string name;
    int n_qubits = 0;
    std::vector<std::pair<int, int>> edges;
    bool all_to_all = false;

    bool coupled(int a, int b) const;
    std::vector<std::vector<int>> adjacency() const;
    bool connected() const;
};

CouplingMap all_to_all_coupling(int n);
CouplingMap linear_coupling(int n);

// Straight segment of one heavy-hex row with its bridge qubits. Row qubits are
// 0..12*n_cells; every even row qubit is a degree-3 corner whose bridge qubit is
// numbered after the row. Bridges alternate between the rows above and below,
// as in the heavy-hex lattice, and are truncated at the patch edge.
CouplingMap heavy_hex_patch(int n_cells);
int heavy_hex_row_length(int n_cells);
int heavy_hex_bridge(int n_cells, int corner);  // bridge qubit of an even row position

}  // namespace vbs
