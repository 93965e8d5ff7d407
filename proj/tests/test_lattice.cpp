#include <doctest.h>

#include <algorithm>
#include <set>

#include "vbs/lattice.hpp"

using namespace vbs;

TEST_CASE("open chain ports, dangling spins and name") {
    const Lattice lat = build_chain(4, Boundary::open_chain, 0, 1);
    CHECK(lat.name == "chain:4:open:anti");
    CHECK(lat.links.size() == 3);
    CHECK(lat.dangling.size() == 2);
    CHECK(lat.ports[0] == std::vector<int>{-1, 0});
    CHECK(lat.ports[3] == std::vector<int>{2, -2});
    for (int s = 0; s < 4; ++s) CHECK(lat.qubits_at(s) == 2);
    CHECK(lat.uniform_spin(2));
    CHECK(lat.coordination(0) == 1);
    CHECK(lat.coordination(1) == 2);
}

TEST_CASE("ring ports bond to previous then next site") {
    const Lattice lat = build_chain(5, Boundary::ring);
    CHECK(lat.ports[0] == std::vector<int>{4, 0});
    CHECK(lat.ports[3] == std::vector<int>{2, 3});
    CHECK(lat.links[4] == std::pair<int, int>{4, 0});
    CHECK_FALSE(is_bipartite(lat));
    CHECK_THROWS_AS(two_coloring(lat), std::invalid_argument);
}

TEST_CASE("two-colouring of even rings and open chains puts site 0 on A") {
    for (int n : {2, 3, 4, 7}) {
        const Lattice lat = build_chain(n, Boundary::open_chain);
        const auto c = two_coloring(lat);
        for (int s = 0; s < n; ++s) CHECK(c[s] == (s % 2 ? Sublattice::B : Sublattice::A));
    }
    CHECK(is_bipartite(build_chain(6, Boundary::ring)));
}

TEST_CASE("three-link pair and multigraph ring have coordination 3") {
    const Lattice p = build_three_link_pair();
    CHECK(p.n_sites == 2);
    CHECK(p.uniform_spin(3));
    CHECK(is_bipartite(p));
    const Lattice m = build_multigraph_ring(4);
    CHECK(m.uniform_spin(3));
    CHECK(is_bipartite(m));
    CHECK_THROWS(build_multigraph_ring(3));
}

TEST_CASE("honeycomb patch: one hexagon is a six-ring, boundary coordination below 3") {
    const Lattice h = build_honeycomb_patch(1, 1);
    CHECK(h.n_sites == 6);
    CHECK(h.links.size() == 6);
    CHECK(h.uniform_spin(2));
    const Lattice big = build_honeycomb_patch(2, 2);
    CHECK(is_bipartite(big));
    int interior = 0, boundary = 0;
    for (int s = 0; s < big.n_sites; ++s) {
        CHECK(big.coordination(s) <= 3);
        (big.coordination(s) == 3 ? interior : boundary)++;
    }
    CHECK(interior > 0);
    CHECK(boundary > 0);
    // every link goes from A to B
    const auto c = two_coloring(big);
    for (const auto& [a, b] : big.links) CHECK(c[a] != c[b]);
}

TEST_CASE("JSON round trip keeps links, dangling spins and ports") {
    const Lattice lat = build_chain(3, Boundary::open_chain, 1, 0);
    const Lattice back = lattice_from_json(lattice_to_json(lat));
    CHECK(back.n_sites == lat.n_sites);
    CHECK(back.links == lat.links);
    CHECK(back.ports == lat.ports);
    REQUIRE(back.dangling.size() == 2);
    CHECK(back.dangling[0].state == 1);
    CHECK(back.boundary == Boundary::open_chain);
    CHECK_THROWS(lattice_from_json(nlohmann::json::parse(R"({"links": []})")));
}

TEST_CASE("validation rejects out-of-range links") {
    CHECK_THROWS(lattice_from_links(2, {{0, 2}}));
}

TEST_CASE("assign_qubits: site-major data qubits, ancillas after") {
    const Lattice lat = build_chain(3, Boundary::open_chain);
    const auto all = assign_qubits(lat, EncodingMethod::hadamard_all);
    CHECK(all.n_data == 6);
    CHECK(all.total_qubits == 9);
    CHECK(all.site_qubits[1] == std::vector<int>{2, 3});
    CHECK(all.link_qubits[0] == std::pair<int, int>{1, 2});
    CHECK(all.dangling_qubits == std::vector<int>{0, 5});
    CHECK(all.ancilla == std::vector<int>{6, 7, 8});

    const auto isl = assign_qubits(lat, EncodingMethod::islands_plus_sublattice);
    CHECK(isl.ancilla_pool.size() == 2);  // ceil(3/2)
    CHECK(isl.ancilla[0] == -1);
    CHECK(isl.ancilla[1] >= 6);

    const auto mps = assign_qubits(build_chain(3, Boundary::ring), EncodingMethod::mps);
    CHECK(mps.total_qubits == 7);
    CHECK_THROWS(assign_qubits(build_three_link_pair(), EncodingMethod::mps));
    CHECK_THROWS(assign_qubits(build_chain(3, Boundary::ring), EncodingMethod::islands_plus_sublattice));
}

TEST_CASE("every data qubit belongs to exactly one link or dangling spin") {
    for (const Lattice& lat : {build_honeycomb_patch(1, 2), build_multigraph_ring(4), build_chain(5, Boundary::open_chain)}) {
        const auto enc = assign_qubits(lat, EncodingMethod::hadamard_all);
        std::multiset<int> used;
        for (const auto& [a, b] : enc.link_qubits) {
            used.insert(a);
            used.insert(b);
        }
        for (int d : enc.dangling_qubits) used.insert(d);
        CHECK(int(used.size()) == enc.n_data);
        for (int q = 0; q < enc.n_data; ++q) CHECK(used.count(q) == 1);
    }
}

TEST_CASE("coupling maps") {
    const auto lin = linear_coupling(5);
    CHECK(lin.coupled(1, 2));
    CHECK_FALSE(lin.coupled(1, 3));
    CHECK(lin.connected());
    const auto a2a = all_to_all_coupling(4);
    CHECK(a2a.coupled(0, 3));
    const auto hh = heavy_hex_patch(2);
    CHECK(hh.name == "heavy_hex");
    CHECK(hh.connected());
    CHECK(heavy_hex_row_length(2) == 25);
    // every even row position is a degree-3 corner except where bridges are truncated
    const auto adj = hh.adjacency();
    for (int x = 0; x < heavy_hex_row_length(2); ++x) {
        CHECK(int(adj[x].size()) <= 3);
        if (x % 2) CHECK(adj[x].size() == 2);
    }
    const int b = heavy_hex_bridge(2, 12);
    CHECK(hh.coupled(12, b));
    CHECK(adj[b].size() <= 2);
}
