#include "vbs/lattice.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace vbs {

int Lattice::coordination(int site) const {
    int c = 0;
    for (const auto& [a, b] : links) c += (a == site) + (b == site);
    return c;
}

int Lattice::qubits_at(int site) const { return int(ports.at(site).size()); }

bool Lattice::uniform_spin(int twice_s) const {
    for (int s = 0; s < n_sites; ++s)
        if (qubits_at(s) != twice_s) return false;
    return true;
}

void Lattice::validate() const {
    if (n_sites < 1) throw std::invalid_argument("lattice: needs at least one site");
    if (int(ports.size()) != n_sites) throw std::invalid_argument("lattice: ports size mismatch");
    for (const auto& [a, b] : links) {
        if (a < 0 || b < 0 || a >= n_sites || b >= n_sites)
            throw std::invalid_argument("lattice: link references unknown site");
        if (a == b) throw std::invalid_argument("lattice: self-loop at site " + std::to_string(a));
    }
    for (const auto& d : dangling)
        if (d.site < 0 || d.site >= n_sites || (d.state != 0 && d.state != 1))
            throw std::invalid_argument("lattice: bad dangling spin");
    // every incidence appears exactly once in the port lists
    std::multiset<std::pair<int, int>> expected, seen;
    for (int l = 0; l < int(links.size()); ++l) {
        expected.insert({links[l].first, l});
        expected.insert({links[l].second, l});
    }
    for (int d = 0; d < int(dangling.size()); ++d) expected.insert({dangling[d].site, -(d + 1)});
    for (int s = 0; s < n_sites; ++s) {
        if (ports[s].empty()) throw std::invalid_argument("lattice: site " + std::to_string(s) + " has no qubits");
        for (int p : ports[s]) seen.insert({s, p});
    }
    if (expected != seen) throw std::invalid_argument("lattice: ports do not cover incidences exactly once");
    if (sublattice) {
        for (const auto& [a, b] : links)
            if ((*sublattice)[a] == (*sublattice)[b])
                throw std::invalid_argument("lattice: sublattice labels violated on a link");
    }
}

Lattice lattice_from_links(int n_sites, std::vector<std::pair<int, int>> links,
                           std::vector<DanglingSpin> dangling, std::string name) {
    Lattice lat;
    lat.name = std::move(name);
    lat.n_sites = n_sites;
    lat.links = std::move(links);
    lat.dangling = std::move(dangling);
    lat.boundary = Boundary::explicit_graph;
    lat.ports.assign(n_sites, {});
    for (int l = 0; l < int(lat.links.size()); ++l) {
        const auto [a, b] = lat.links[l];
        if (a >= 0 && a < n_sites) lat.ports[a].push_back(l);
        if (b >= 0 && b < n_sites && b != a) lat.ports[b].push_back(l);
    }
    for (int d = 0; d < int(lat.dangling.size()); ++d) {
        const int s = lat.dangling[d].site;
        if (s >= 0 && s < n_sites) lat.ports[s].push_back(-(d + 1));
    }
    lat.validate();
    if (is_bipartite(lat)) lat.sublattice = two_coloring(lat);
    return lat;
}

Lattice build_chain(int n, Boundary boundary, int left_state, int right_state) {
    if (n < 2) throw std::invalid_argument("build_chain: n_sites must be >= 2");
    Lattice lat;
    lat.n_sites = n;
    lat.boundary = boundary;
    lat.ports.assign(n, {});
    if (boundary == Boundary::ring) {
        lat.name = "chain:" + std::to_string(n) + ":ring";
        for (int i = 0; i < n; ++i) lat.links.push_back({i, (i + 1) % n});
        // left port bonds to the previous site, right port to the next one
        for (int i = 0; i < n; ++i) lat.ports[i] = {(i + n - 1) % n, i};
    } else if (boundary == Boundary::open_chain) {
        lat.name = "chain:" + std::to_string(n) + ":open:" + (left_state == right_state ? "aligned" : "anti");
        for (int i = 0; i + 1 < n; ++i) lat.links.push_back({i, i + 1});
        lat.dangling = {{0, left_state}, {n - 1, right_state}};
        lat.ports[0] = {-1, 0};
        for (int i = 1; i + 1 < n; ++i) lat.ports[i] = {i - 1, i};
        lat.ports[n - 1] = {n - 2, -2};
    } else {
        throw std::invalid_argument("build_chain: boundary must be open_chain or ring");
    }
    lat.validate();
    if (is_bipartite(lat)) lat.sublattice = two_coloring(lat);
    return lat;
}

Lattice build_three_link_pair() {
    return lattice_from_links(2, {{0, 1}, {0, 1}, {0, 1}}, {}, "three-link-pair");
}

Lattice build_multigraph_ring(int n) {
    if (n < 2 || n % 2) throw std::invalid_argument("build_multigraph_ring: n_sites must be even and >= 2");
    std::vector<std::pair<int, int>> links;
    for (int i = 0; i < n; i += 2) {
        links.push_back({i, i + 1});
        links.push_back({i, i + 1});
        links.push_back({i + 1, (i + 2) % n});
    }
    return lattice_from_links(n, links, {}, "multiring:" + std::to_string(n));
}

// Brick-wall embedding: rows+1 horizontal chains; hexagon (r, c) spans
// columns x0..x0+2 of chains r and r+1 with x0 = 2c + (r mod 2).
Lattice build_honeycomb_patch(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("build_honeycomb_patch: rows and cols must be >= 1");
    std::set<std::pair<int, int>> verts;
    std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const int x0 = 2 * c + (r % 2);
            for (int dr = 0; dr < 2; ++dr)
                for (int dx = 0; dx < 3; ++dx) verts.insert({r + dr, x0 + dx});
            for (int dr = 0; dr < 2; ++dr)
                for (int dx = 0; dx < 2; ++dx) edges.insert({{r + dr, x0 + dx}, {r + dr, x0 + dx + 1}});
            edges.insert({{r, x0}, {r + 1, x0}});
            edges.insert({{r, x0 + 2}, {r + 1, x0 + 2}});
        }
    std::map<std::pair<int, int>, int> id;
    for (const auto& v : verts) id.emplace(v, int(id.size()));
    std::vector<std::pair<int, int>> links;
    for (const auto& [u, v] : edges) {
        int a = id.at(u), b = id.at(v);
        // orient every link from the A colour ((row + col) even) to B
        if ((u.first + u.second) % 2) std::swap(a, b);
        links.push_back({a, b});
    }
    return lattice_from_links(int(id.size()), links, {},
                              "honeycomb:" + std::to_string(rows) + ":" + std::to_string(cols));
}

std::vector<Sublattice> two_coloring(const Lattice& lat) {
    std::vector<std::vector<int>> adj(lat.n_sites);
    for (const auto& [a, b] : lat.links) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> color(lat.n_sites, -1);
    for (int start = 0; start < lat.n_sites; ++start) {
        if (color[start] >= 0) continue;
        color[start] = 0;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : adj[u]) {
                if (color[v] < 0) {
                    color[v] = 1 - color[u];
                    q.push(v);
                } else if (color[v] == color[u]) {
                    throw std::invalid_argument("lattice is not bipartite: odd cycle through link " +
                                                std::to_string(u) + "-" + std::to_string(v));
                }
            }
        }
    }
    std::vector<Sublattice> out(lat.n_sites);
    for (int s = 0; s < lat.n_sites; ++s) out[s] = color[s] == 0 ? Sublattice::A : Sublattice::B;
    return out;
}

bool is_bipartite(const Lattice& lat) {
    try {
        two_coloring(lat);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

namespace {

const char* boundary_name(Boundary b) {
    switch (b) {
        case Boundary::open_chain: return "open_chain";
        case Boundary::ring: return "ring";
        default: return "explicit_graph";
    }
}

}  // namespace

nlohmann::json lattice_to_json(const Lattice& lat) {
    nlohmann::json j;
    j["name"] = lat.name;
    std::vector<int> sites(lat.n_sites);
    for (int s = 0; s < lat.n_sites; ++s) sites[s] = s;
    j["sites"] = sites;
    j["links"] = nlohmann::json::array();
    for (const auto& [a, b] : lat.links) j["links"].push_back({a, b});
    j["boundary"] = boundary_name(lat.boundary);
    j["dangling"] = nlohmann::json::array();
    for (const auto& d : lat.dangling)
        j["dangling"].push_back({{"site", d.site}, {"state", d.state == 0 ? "up" : "down"}});
    j["ports"] = lat.ports;
    if (lat.sublattice) {
        std::string labels;
        for (auto s : *lat.sublattice) labels += s == Sublattice::A ? 'A' : 'B';
        j["sublattice"] = labels;
    }
    return j;
}

Lattice lattice_from_json(const nlohmann::json& j) {
    if (!j.contains("sites") || !j.contains("links"))
        throw std::invalid_argument("lattice JSON needs 'sites' and 'links'");
    const auto sites = j.at("sites").get<std::vector<int>>();
    for (int s = 0; s < int(sites.size()); ++s)
        if (sites[s] != s) throw std::invalid_argument("lattice JSON: sites must be 0..N-1 in order");
    std::vector<std::pair<int, int>> links;
    for (const auto& l : j.at("links")) {
        if (!l.is_array() || l.size() != 2) throw std::invalid_argument("lattice JSON: link must be [a,b]");
        links.push_back({l[0].get<int>(), l[1].get<int>()});
    }
    std::vector<DanglingSpin> dangling;
    if (j.contains("dangling"))
        for (const auto& d : j.at("dangling")) {
            const auto st = d.at("state").get<std::string>();
            if (st != "up" && st != "down") throw std::invalid_argument("lattice JSON: dangling state must be up|down");
            dangling.push_back({d.at("site").get<int>(), st == "up" ? 0 : 1});
        }
    Lattice lat = lattice_from_links(int(sites.size()), links, dangling, j.value("name", "file"));
    if (j.contains("ports")) {
        lat.ports = j.at("ports").get<std::vector<std::vector<int>>>();
    }
    const auto b = j.value("boundary", std::string("explicit_graph"));
    if (b == "open_chain") lat.boundary = Boundary::open_chain;
    else if (b == "ring") lat.boundary = Boundary::ring;
    else if (b == "explicit_graph") lat.boundary = Boundary::explicit_graph;
    else throw std::invalid_argument("lattice JSON: unknown boundary '" + b + "'");
    lat.validate();
    return lat;
}

SiteEncoding assign_qubits(const Lattice& lat, EncodingMethod method) {
    lat.validate();
    SiteEncoding enc;
    enc.site_qubits.assign(lat.n_sites, {});
    enc.ancilla.assign(lat.n_sites, -1);
    enc.link_qubits.assign(lat.links.size(), {-1, -1});
    enc.dangling_qubits.assign(lat.dangling.size(), -1);
    int q = 0;
    for (int s = 0; s < lat.n_sites; ++s)
        for (int p : lat.ports[s]) {
            enc.site_qubits[s].push_back(q);
            if (p >= 0) {
                auto& lq = enc.link_qubits[p];
                if (lat.links[p].first == s) lq.first = q;
                else lq.second = q;
            } else {
                enc.dangling_qubits[-(p + 1)] = q;
            }
            ++q;
        }
    enc.n_data = q;
    switch (method) {
        case EncodingMethod::hadamard_all:
            for (int s = 0; s < lat.n_sites; ++s) {
                enc.ancilla[s] = q;
                enc.ancilla_pool.push_back(q++);
            }
            break;
        case EncodingMethod::islands_plus_sublattice: {
            const auto colors = two_coloring(lat);  // throws on odd cycles
            const int n_a = int(std::count(colors.begin(), colors.end(), Sublattice::A));
            const int pool = std::max(n_a, lat.n_sites - n_a);
            for (int k = 0; k < pool; ++k) enc.ancilla_pool.push_back(q++);
            int k = 0;
            for (int s = 0; s < lat.n_sites; ++s)
                if (colors[s] == Sublattice::B) enc.ancilla[s] = enc.ancilla_pool[k++];
            break;
        }
        case EncodingMethod::mps:
            if (lat.boundary != Boundary::open_chain && lat.boundary != Boundary::ring)
                throw std::invalid_argument("assign_qubits: mps encoding needs a chain");
            if (lat.boundary == Boundary::ring) enc.ancilla_pool.push_back(q++);
            break;
    }
    enc.total_qubits = q;
    return enc;
}

bool CouplingMap::coupled(int a, int b) const {
    if (a == b) return false;
    if (all_to_all) return a < n_qubits && b < n_qubits;
    for (const auto& [x, y] : edges)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

std::vector<std::vector<int>> CouplingMap::adjacency() const {
    std::vector<std::vector<int>> adj(n_qubits);
    if (all_to_all) {
        for (int a = 0; a < n_qubits; ++a)
            for (int b = 0; b < n_qubits; ++b)
                if (a != b) adj[a].push_back(b);
        return adj;
    }
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

bool CouplingMap::connected() const {
    if (n_qubits <= 1 || all_to_all) return true;
    const auto adj = adjacency();
    std::vector<char> seen(n_qubits, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                q.push(v);
            }
    }
    return count == n_qubits;
}

CouplingMap all_to_all_coupling(int n) {
    CouplingMap c;
    c.name = "all_to_all";
    c.n_qubits = n;
    c.all_to_all = true;
    return c;
}

CouplingMap linear_coupling(int n) {
    CouplingMap c;
    c.name = "linear";
    c.n_qubits = n;
    for (int i = 0; i + 1 < n; ++i) c.edges.push_back({i, i + 1});
    return c;
}

int heavy_hex_row_length(int n_cells) { return 12 * n_cells + 1; }

int heavy_hex_bridge(int n_cells, int corner) {
    if (corner < 0 || corner >= heavy_hex_row_length(n_cells) || corner % 2)
        throw std::invalid_argument("heavy_hex_bridge: not a corner");
    return heavy_hex_row_length(n_cells) + corner / 2;
}

CouplingMap heavy_hex_patch(int n_cells) {
    if (n_cells < 1) throw std::invalid_argument("heavy_hex_patch: n_cells must be >= 1");
    CouplingMap c;
    c.name = "heavy_hex";
    const int len = heavy_hex_row_length(n_cells);
    for (int x = 0; x + 1 < len; ++x) c.edges.push_back({x, x + 1});
    for (int x = 0; x < len; x += 2) c.edges.push_back({x, heavy_hex_bridge(n_cells, x)});
    c.n_qubits = len + (len + 1) / 2;
    return c;
}

}  // namespace vbs
