#include "vbs/routing.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "vbs/builders.hpp"

namespace vbs {

namespace {

// BFS from `start` through nodes outside `group` to the nearest node adjacent to
// the group. Neighbours are visited in ascending order so paths are deterministic.
std::vector<int> path_to_group(const std::vector<std::vector<int>>& adj, int start, const std::set<int>& group) {
    auto touches = [&](int v) {
        for (int w : adj[v])
            if (group.count(w)) return true;
        return false;
    };
    std::vector<int> prev(adj.size(), -2);
    std::deque<int> queue{start};
    prev[start] = -1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (touches(v)) {
            std::vector<int> path;
            for (int u = v; u != -1; u = prev[u]) path.push_back(u);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int w : adj[v]) {
            if (prev[w] != -2 || group.count(w)) continue;
            prev[w] = v;
            queue.push_back(w);
        }
    }
    throw std::runtime_error("route: no path to the gathered qubits");
}

}  // namespace

RoutedCircuit route(const Circuit& c, const CouplingMap& coupling, std::vector<int> initial_layout) {
    if (c.n_qubits > coupling.n_qubits) throw std::invalid_argument("route: circuit larger than coupling map");
    if (!coupling.connected()) throw std::invalid_argument("route: coupling map '" + coupling.name + "' is disconnected");
    if (initial_layout.empty()) {
        initial_layout.resize(std::size_t(c.n_qubits));
        std::iota(initial_layout.begin(), initial_layout.end(), 0);
    }
    if (int(initial_layout.size()) != c.n_qubits) throw std::invalid_argument("route: layout size mismatch");

    std::vector<int> l2p = initial_layout, p2l(std::size_t(coupling.n_qubits), -1);
    for (int l = 0; l < c.n_qubits; ++l) {
        const int p = l2p[l];
        if (p < 0 || p >= coupling.n_qubits || p2l[p] != -1) throw std::invalid_argument("route: invalid initial layout");
        p2l[p] = l;
    }
    const auto adj = coupling.adjacency();

    RoutedCircuit out;
    out.circuit = Circuit(coupling.n_qubits);
    out.circuit.metadata = c.metadata;
    out.circuit.metadata["coupling"] = coupling.name;
    out.initial_layout = initial_layout;

    auto do_swap = [&](int a, int b) {
        out.circuit.ops.emplace_back(Cnot{a, b, true});
        out.circuit.ops.emplace_back(Cnot{b, a, true});
        out.circuit.ops.emplace_back(Cnot{a, b, true});
        std::swap(p2l[a], p2l[b]);
        if (p2l[a] >= 0) l2p[p2l[a]] = a;
        if (p2l[b] >= 0) l2p[p2l[b]] = b;
        ++out.swaps;
    };
    auto gather = [&](const std::vector<int>& logical) {
        if (coupling.all_to_all || logical.size() < 2) return;
        // already connected: nothing to move
        std::set<int> placed;
        for (int l : logical) placed.insert(l2p[l]);
        std::set<int> reached{l2p[logical[0]]};
        std::vector<int> stack{l2p[logical[0]]};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (placed.count(w) && reached.insert(w).second) stack.push_back(w);
        }
        if (reached.size() == placed.size()) return;

        std::set<int> group{l2p[logical[0]]};
        for (std::size_t i = 1; i < logical.size(); ++i) {
            const auto path = path_to_group(adj, l2p[logical[i]], group);
            for (std::size_t k = 0; k + 1 < path.size(); ++k) do_swap(path[k], path[k + 1]);
            group.insert(l2p[logical[i]]);
        }
    };

    for (const auto& in : c.ops) {
        if (std::holds_alternative<RetryFrom>(in))
            throw std::invalid_argument("route: retry markers cannot be routed (layouts differ between attempts)");
        const auto qs = instr_qubits(in);
        gather(qs);
        Instr mapped = in;
        std::visit(
            [&](auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, Cnot>) {
                    g.control = l2p[g.control];
                    g.target = l2p[g.target];
                } else if constexpr (std::is_same_v<T, Opaque>) {
                    for (auto& q : g.qubits) q = l2p[q];
                } else if constexpr (std::is_same_v<T, Barrier>) {
                } else {
                    g.qubit = l2p[g.qubit];
                }
            },
            mapped);
        out.circuit.ops.push_back(std::move(mapped));
    }
    out.final_layout = l2p;
    return out;
}

double routed_fidelity(const Circuit& original, const RoutedCircuit& routed) {
    // compact register: physical qubits that hold a logical qubit or get touched
    std::set<int> used(routed.initial_layout.begin(), routed.initial_layout.end());
    for (const auto& in : routed.circuit.ops)
        for (int q : instr_qubits(in)) used.insert(q);
    std::vector<int> compact(std::size_t(routed.circuit.n_qubits), -1);
    int n = 0;
    for (int p : used) compact[p] = n++;

    Circuit small(n);
    for (const auto& in : routed.circuit.ops) {
        Instr mapped = in;
        std::visit(
            [&](auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, Cnot>) {
                    g.control = compact[g.control];
                    g.target = compact[g.target];
                } else if constexpr (std::is_same_v<T, Opaque>) {
                    for (auto& q : g.qubits) q = compact[q];
                } else if constexpr (std::is_same_v<T, Barrier>) {
                } else if constexpr (std::is_same_v<T, RetryFrom>) {
                    g.qubit = compact[g.qubit];
                    for (auto& q : g.reset_qubits) q = compact[q];
                } else {
                    g.qubit = compact[g.qubit];
                }
            },
            mapped);
        small.ops.push_back(std::move(mapped));
    }
    std::vector<int> layout;
    for (int p : routed.final_layout) layout.push_back(compact[p]);

    const Statevector logical = run_circuit(original);
    const Statevector physical = run_circuit(small);
    return fidelity(embed_state(logical.amps, n, layout), physical.amps);
}

Circuit swap_layer(const Circuit& routed) {
    Circuit s(routed.n_qubits);
    for (const auto& in : routed.ops)
        if (const auto* g = std::get_if<Cnot>(&in); g && g->from_swap) s.ops.push_back(in);
    return s;
}

HeavyHexDemo heavy_hex_honeycomb_demo(int n_sets, bool islands) {
    if (n_sets < 1) throw std::invalid_argument("heavy_hex_honeycomb_demo: n_sets must be >= 1");
    const int k = n_sets;
    HeavyHexDemo d;
    d.coupling = heavy_hex_patch(k);
    // corner qubit of the row above, one per B-site bridge (corners 0, 12, 24, ...)
    std::vector<int> upper(std::size_t(k + 1));
    for (int j = 0; j <= k; ++j) {
        upper[j] = d.coupling.n_qubits++;
        d.coupling.edges.push_back({heavy_hex_bridge(k, 12 * j), upper[j]});
    }

    // logical numbering: sets first (island order b, a1, b', a2, b'', a3),
    // then A ancillas, then per B site (ancilla, bridge partner, upper A end)
    const int anc_a0 = 6 * k, b_site0 = 7 * k;
    const int n_logical = b_site0 + 3 * (k + 1);
    d.logical = Circuit(n_logical);
    d.initial_layout.assign(std::size_t(n_logical), -1);
    for (int j = 0; j < k; ++j) {
        const int c = 12 * j + 6, base = 6 * j;
        const int phys[6] = {c - 2, c - 1, heavy_hex_bridge(k, c), c, c + 2, c + 1};
        for (int i = 0; i < 6; ++i) d.initial_layout[base + i] = phys[i];
        d.initial_layout[anc_a0 + j] = c - 3;
        d.six_qubit_sets.push_back({base, base + 1, base + 2, base + 3, base + 4, base + 5});
    }
    for (int j = 0; j <= k; ++j) {
        d.initial_layout[b_site0 + 3 * j] = 12 * j;
        d.initial_layout[b_site0 + 3 * j + 1] = heavy_hex_bridge(k, 12 * j);
        d.initial_layout[b_site0 + 3 * j + 2] = upper[j];
    }

    // preparation stage
    for (int j = 0; j < k; ++j) {
        const int base = 6 * j;
        if (islands) {
            Opaque isl = island_block(3);
            isl.qubits = {base, base + 1, base + 2, base + 3, base + 4, base + 5};
            d.logical.opaque(std::move(isl));
        } else {
            for (int i = 0; i < 3; ++i)
                d.logical.append(valence_bond_subcircuit(0, 1, 2), {base + 2 * i, base + 2 * i + 1});
        }
    }
    for (int j = 0; j <= k; ++j)
        d.logical.append(valence_bond_subcircuit(0, 1, 2), {b_site0 + 3 * j + 1, b_site0 + 3 * j + 2});
    d.prep_stage_end = int(d.logical.ops.size());
    d.logical.barrier();

    // B-site tests (T boxes): right mover of the set on the left, left mover of the set on the right
    for (int j = 0; j <= k; ++j) {
        std::vector<int> site;
        if (j >= 1) site.push_back(6 * (j - 1) + 4);
        if (j < k) site.push_back(6 * j);
        site.push_back(b_site0 + 3 * j + 1);
        HadamardTestOptions opts;
        opts.layout = "T";
        std::vector<int> qs{b_site0 + 3 * j};
        qs.insert(qs.end(), site.begin(), site.end());
        std::vector<int> local(site.size());
        std::iota(local.begin(), local.end(), 1);
        d.logical.append(hadamard_test_fragment(local, 0, int(qs.size()), opts), qs);
    }
    // A-site tests (linear boxes)
    if (!islands) {
        for (int j = 0; j < k; ++j) {
            const int base = 6 * j;
            HadamardTestOptions opts;
            opts.layout = "linear";
            d.logical.append(hadamard_test_fragment({1, 2, 3}, 0, 4, opts),
                             {anc_a0 + j, base + 1, base + 3, base + 5});
        }
    }
    d.logical.metadata["method"] = islands ? "mitigated_islands" : "probabilistic";
    d.logical.metadata["layout"] = "heavy_hex_strip";
    return d;
}

HeavyHexComposite heavy_hex_composite(const HeavyHexDemo& demo, const RoutedCircuit& routed) {
    HeavyHexComposite r;
    Circuit prep(demo.logical.n_qubits);
    prep.ops.assign(demo.logical.ops.begin(), demo.logical.ops.begin() + demo.prep_stage_end);
    r.prep_depth = cnot_depth(prep, "heavy_hex");
    const Circuit swaps = swap_layer(routed.circuit);
    r.swap_depth = cnot_depth(swaps, "heavy_hex");
    r.swaps = routed.swaps;
    for (const auto& in : demo.logical.ops) {
        const auto* g = std::get_if<Opaque>(&in);
        if (!g || g->label != "ctrl_exp_sym3") continue;
        const auto it = g->costs.find("heavy_hex:" + g->layout);
        if (it == g->costs.end()) throw std::runtime_error("heavy_hex_composite: missing declared cost for " + g->label);
        r.test_depth = std::max(r.test_depth, it->second.depth);
    }
    r.total = r.prep_depth + r.swap_depth + r.test_depth;

    // SWAPs charged to the set whose qubit moved
    r.swaps_per_set.assign(demo.six_qubit_sets.size(), 0);
    std::vector<int> owner(std::size_t(routed.circuit.n_qubits), -1);
    for (std::size_t s = 0; s < demo.six_qubit_sets.size(); ++s)
        for (int l : demo.six_qubit_sets[s]) owner[routed.initial_layout[l]] = int(s);
    int seen = 0;
    for (const auto& in : routed.circuit.ops) {
        const auto* g = std::get_if<Cnot>(&in);
        if (!g || !g->from_swap) continue;
        if (seen++ % 3) continue;
        // the mover sits on the control of the first CNOT of each SWAP triple
        const int from = g->control, to = g->target;
        const int set = owner[from];
        if (set >= 0) ++r.swaps_per_set[std::size_t(set)];
        std::swap(owner[from], owner[to]);
    }
    return r;
}

}  // namespace vbs
