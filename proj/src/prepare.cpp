#include "vbs/prepare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "vbs/mpsprep.hpp"

namespace vbs {

namespace {

std::vector<int> data_qubits(int n) {
    std::vector<int> q(static_cast<std::size_t>(n));
    std::iota(q.begin(), q.end(), 0);
    return q;
}

int partner_qubit(const SiteEncoding& enc, const Lattice& lat, int link, int site) {
    const auto& [qa, qb] = enc.link_qubits[link];
    return lat.links[link].first == site ? qb : qa;
}

// Island of one A site on a local register: site qubits first, then one partner
// per bond port. Amplitudes built directly, then the site is symmetrized.
Vec local_island_vector(const Lattice& lat, const SiteEncoding& enc, int s, std::vector<int>& qubits) {
    const auto& ports = lat.ports[s];
    const int k = int(ports.size());
    qubits = enc.site_qubits[s];
    std::vector<int> partner_slot(static_cast<std::size_t>(k), -1);
    for (int i = 0; i < k; ++i)
        if (ports[i] >= 0) {
            partner_slot[i] = int(qubits.size());
            qubits.push_back(partner_qubit(enc, lat, ports[i], s));
        }
    const int n = int(qubits.size());
    if (n > 6) throw std::invalid_argument("island larger than 6 qubits");
    const auto bit = [n](Eigen::Index idx, int q) { return int((idx >> (n - 1 - q)) & 1); };
    Vec v = Vec::Zero(Eigen::Index(1) << n);
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
        double amp = 1.0;
        for (int i = 0; i < k && amp != 0.0; ++i) {
            const int sb = bit(idx, i);
            if (ports[i] < 0) {
                amp *= sb == lat.dangling[-(ports[i] + 1)].state ? 1.0 : 0.0;
                continue;
            }
            const int pb = bit(idx, partner_slot[i]);
            // singlet written with the link's first site first
            const bool site_first = lat.links[ports[i]].first == s;
            const int first = site_first ? sb : pb, second = site_first ? pb : sb;
            amp *= first == second ? 0.0 : (first == 0 ? 1.0 : -1.0) / std::sqrt(2.0);
        }
        v(idx) = amp;
    }
    Statevector st = state_from_amplitudes(v);
    std::vector<int> site_local(static_cast<std::size_t>(k));
    std::iota(site_local.begin(), site_local.end(), 0);
    apply_nonunitary(st, symmetrizer(k).m, site_local);
    return st.amps;
}

void add_dangling_flips(Circuit& c, const Lattice& lat, const SiteEncoding& enc, const std::vector<Sublattice>& colors,
                        Sublattice which) {
    for (std::size_t d = 0; d < lat.dangling.size(); ++d)
        if (lat.dangling[d].state == 1 && colors[lat.dangling[d].site] == which) c.x(enc.dangling_qubits[d]);
}

}  // namespace

Vec pre_vbs_state(const Lattice& lat) {
    const SiteEncoding enc = assign_qubits(lat, EncodingMethod::hadamard_all);
    const int n = enc.n_data;
    if (n > max_qubits()) throw QubitCapExceeded("pre_vbs_state: " + std::to_string(n) + " qubits exceed the cap");
    const auto bit = [n](Eigen::Index idx, int q) { return int((idx >> (n - 1 - q)) & 1); };
    Vec v = Vec::Zero(Eigen::Index(1) << n);
    const double h = 1.0 / std::sqrt(2.0);
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
        double amp = 1.0;
        for (const auto& [qa, qb] : enc.link_qubits) {
            const int a = bit(idx, qa), b = bit(idx, qb);
            amp *= a == b ? 0.0 : (a == 0 ? h : -h);
            if (amp == 0.0) break;
        }
        for (std::size_t d = 0; d < lat.dangling.size() && amp != 0.0; ++d)
            if (bit(idx, enc.dangling_qubits[d]) != lat.dangling[d].state) amp = 0.0;
        v(idx) = amp;
    }
    return v;
}

Vec oracle_vbs_state(const Lattice& lat, double* norm_sq) {
    const SiteEncoding enc = assign_qubits(lat, EncodingMethod::hadamard_all);
    Statevector st = state_from_amplitudes(pre_vbs_state(lat));
    double ratio = 1.0;
    for (int s = 0; s < lat.n_sites; ++s) {
        const int k = int(enc.site_qubits[s].size());
        if (k > 1) ratio *= apply_nonunitary(st, symmetrizer(k).m, enc.site_qubits[s]);
    }
    if (norm_sq) *norm_sq = ratio;
    return st.amps;
}

std::vector<int> sublattice_sites(const Lattice& lat, Sublattice which) {
    const auto colors = lat.sublattice ? *lat.sublattice : two_coloring(lat);
    std::vector<int> out;
    for (int s = 0; s < lat.n_sites; ++s)
        if (colors[s] == which) out.push_back(s);
    return out;
}

Circuit islands_method_circuit(const Lattice& lat, const SiteEncoding& enc, const HadamardTestOptions& opts) {
    const auto colors = lat.sublattice ? *lat.sublattice : two_coloring(lat);
    Circuit c(enc.total_qubits);
    add_dangling_flips(c, lat, enc, colors, Sublattice::B);
    for (int s = 0; s < lat.n_sites; ++s) {
        if (colors[s] != Sublattice::A) continue;
        const auto& ports = lat.ports[s];
        const int k = int(ports.size());
        const bool plain = (k == 2 || k == 3) && std::all_of(ports.begin(), ports.end(), [](int p) { return p >= 0; });
        if (plain) {
            // canonical island order: spin-1 (p0, s0, s1, p1); spin-3/2 (p0, s0, p1, s1, p2, s2).
            // A bond written site-first only flips the global sign.
            const auto& sq = enc.site_qubits[s];
            std::vector<int> pq;
            for (int p : ports) pq.push_back(partner_qubit(enc, lat, p, s));
            Opaque blk = island_block(k);
            blk.qubits = k == 2 ? std::vector<int>{pq[0], sq[0], sq[1], pq[1]}
                                : std::vector<int>{pq[0], sq[0], pq[1], sq[1], pq[2], sq[2]};
            c.opaque(std::move(blk));
        } else {
            std::vector<int> qs;
            const Vec v = local_island_vector(lat, enc, s, qs);
            c.append(schmidt_prepare(v, qs, enc.total_qubits));
        }
    }
    for (int s = 0; s < lat.n_sites; ++s)
        if (colors[s] == Sublattice::B)
            c.append(hadamard_test_fragment(enc.site_qubits[s], enc.ancilla[s], enc.total_qubits, opts));
    c.metadata["method"] = "mitigated_islands";
    c.metadata["lattice"] = lat.name;
    return c;
}

Circuit retry_method_circuit(const Lattice& lat, const SiteEncoding& enc) {
    const auto colors = lat.sublattice ? *lat.sublattice : two_coloring(lat);
    if (enc.ancilla_pool.empty()) throw std::invalid_argument("retry_method_circuit: encoding has no ancillas");
    const int anc = enc.ancilla_pool[0];
    Circuit c(enc.total_qubits);
    add_dangling_flips(c, lat, enc, colors, Sublattice::B);
    for (int s = 0; s < lat.n_sites; ++s) {
        if (colors[s] != Sublattice::A) continue;
        const int start = int(c.ops.size());
        std::vector<int> island = enc.site_qubits[s];
        for (int p : lat.ports[s]) {
            if (p >= 0) {
                const auto& [qa, qb] = enc.link_qubits[p];
                c.append(valence_bond_subcircuit(qa, qb, enc.total_qubits));
                island.push_back(partner_qubit(enc, lat, p, s));
            } else {
                const auto& d = lat.dangling[-(p + 1)];
                if (d.state == 1) c.x(enc.dangling_qubits[-(p + 1)]);
            }
        }
        Circuit test = hadamard_test_fragment(enc.site_qubits[s], anc, enc.total_qubits);
        const auto m = std::get<Measure>(test.ops.back());
        test.ops.pop_back();
        c.append(test);
        RetryFrom r{anc, m.expect, start, island};
        r.reset_qubits.push_back(anc);
        c.ops.emplace_back(r);
        c.ops.emplace_back(Reset{anc});
    }
    for (int s = 0; s < lat.n_sites; ++s)
        if (colors[s] == Sublattice::B)
            c.append(hadamard_test_fragment(enc.site_qubits[s], enc.ancilla[s], enc.total_qubits));
    c.metadata["method"] = "mitigated_retry";
    c.metadata["lattice"] = lat.name;
    return c;
}

Circuit lcu_method_circuit(const Lattice& lat, LcuVariant variant) {
    SiteEncoding enc = assign_qubits(lat, EncodingMethod::hadamard_all);
    int n_anc = 0;
    for (int s = 0; s < lat.n_sites; ++s) {
        const int k = lat.qubits_at(s);
        if (k >= 2) n_anc = std::max(n_anc, lcu_ancilla_count(k, variant));
    }
    enc.total_qubits = enc.n_data + n_anc;
    std::vector<int> anc(static_cast<std::size_t>(n_anc));
    std::iota(anc.begin(), anc.end(), enc.n_data);
    Circuit c = pre_vbs_circuit(lat, enc);
    for (int s = 0; s < lat.n_sites; ++s) {
        const int k = int(enc.site_qubits[s].size());
        if (k < 2) continue;
        const std::vector<int> use(anc.begin(), anc.begin() + lcu_ancilla_count(k, variant));
        c.append(lcu_symmetrization_circuit(k, enc.site_qubits[s], use, variant, enc.total_qubits));
    }
    c.metadata["method"] = variant == LcuVariant::sparse ? "lcu_sparse" : "lcu_dense";
    c.metadata["lattice"] = lat.name;
    return c;
}

std::vector<std::string> compatible_routes(const Lattice& lat) {
    std::vector<std::string> r{"probabilistic"};
    if (lat.uniform_spin(2)) r.push_back("probabilistic_nophase");
    if (is_bipartite(lat)) {
        r.push_back("mitigated_islands");
        r.push_back("mitigated_retry");
    }
    r.push_back("lcu_sparse");
    r.push_back("lcu_dense");
    const bool chain = lat.boundary == Boundary::open_chain || lat.boundary == Boundary::ring;
    if (chain && lat.uniform_spin(2) && lat.n_sites <= 6 && (lat.boundary == Boundary::open_chain || lat.n_sites >= 3))
        r.push_back("mps");
    return r;
}

Circuit route_circuit(const Lattice& lat, const std::string& route) {
    if (route == "probabilistic" || route == "probabilistic_nophase") {
        HadamardTestOptions opts;
        if (route == "probabilistic_nophase") {
            if (!lat.uniform_spin(2)) throw std::invalid_argument("probabilistic_nophase needs spin-1 sites");
            opts.drop_phase_z = true;
        }
        return probabilistic_method_circuit(lat, assign_qubits(lat, EncodingMethod::hadamard_all), opts);
    }
    if (route == "mitigated_islands")
        return islands_method_circuit(lat, assign_qubits(lat, EncodingMethod::islands_plus_sublattice));
    if (route == "mitigated_retry")
        return retry_method_circuit(lat, assign_qubits(lat, EncodingMethod::islands_plus_sublattice));
    if (route == "lcu_sparse") return lcu_method_circuit(lat, LcuVariant::sparse);
    if (route == "lcu_dense") return lcu_method_circuit(lat, LcuVariant::dense);
    if (route == "mps") {
        const bool chain = lat.boundary == Boundary::open_chain || lat.boundary == Boundary::ring;
        if (!chain || !lat.uniform_spin(2)) throw std::invalid_argument("mps route needs a spin-1 chain");
        int left = 0, right = 0;
        for (const auto& d : lat.dangling) (d.site == 0 ? left : right) = d.state;
        return mps_preparation_circuit(lat.n_sites, lat.boundary, left, right);
    }
    throw std::invalid_argument("unknown route '" + route + "'");
}

RouteState run_route(const Lattice& lat, const std::string& route, std::uint64_t seed) {
    RouteState out;
    out.route = route;
    if (route == "mps") {
        const bool chain = lat.boundary == Boundary::open_chain || lat.boundary == Boundary::ring;
        if (!chain || !lat.uniform_spin(2)) throw std::invalid_argument("mps route needs a spin-1 chain");
        int left = 0, right = 0;
        for (const auto& d : lat.dangling) (d.site == 0 ? left : right) = d.state;
        auto prep = prepare_via_mps(lat.n_sites, lat.boundary, left, right);
        out.circuit = std::move(prep.circuit);
        out.state = std::move(prep.state);
        out.success_prob = prep.success_prob;
        out.total_qubits = out.circuit.n_qubits;
        return out;
    }
    out.circuit = route_circuit(lat, route);
    out.total_qubits = out.circuit.n_qubits;
    const int n_data = assign_qubits(lat, EncodingMethod::hadamard_all).n_data;
    if (out.total_qubits > max_qubits())
        throw QubitCapExceeded(route + ": " + std::to_string(out.total_qubits) + " qubits exceed the simulator cap of " +
                                    std::to_string(max_qubits()));
    Statevector st;
    if (route == "mitigated_retry") {
        std::mt19937_64 rng(seed);
        const int max_attempts = 100000;
        for (out.attempts = 1;; ++out.attempts) {
            st = new_zero_state(out.circuit.n_qubits);
            const Trajectory tr = run_trajectory(out.circuit, st, rng);
            if (tr.success) {
                out.retries = tr.retries;
                break;
            }
            if (out.attempts >= max_attempts) throw std::runtime_error("mitigated_retry: no successful trajectory");
        }
    } else {
        SimResult res;
        st = run_circuit(out.circuit, &res);
        out.success_prob = res.success_prob;
    }
    out.state = extract_subsystem(st, data_qubits(n_data));
    return out;
}

namespace {

template <class F>
void for_each_neighbour_pair(const Lattice& lat, F&& f) {
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : lat.links) {
        if (a == b) continue;
        const auto key = std::minmax(a, b);
        if (seen.insert(key).second) f(key.first, key.second);
    }
}

}  // namespace

double max_projector_residual(const Lattice& lat, const Vec& state) {
    const SiteEncoding enc = assign_qubits(lat, EncodingMethod::hadamard_all);
    const int n = enc.n_data;
    double worst = 0.0;
    for_each_neighbour_pair(lat, [&](int a, int b) {
        const int ka = lat.qubits_at(a), kb = lat.qubits_at(b);
        if (ka != kb || (ka != 2 && ka != 3)) return;  // mixed or boundary spins are skipped
        std::vector<int> qs = enc.site_qubits[a];
        qs.insert(qs.end(), enc.site_qubits[b].begin(), enc.site_qubits[b].end());
        Statevector st;
        st.n_qubits = n;
        st.amps = state;
        apply_unitary(st, aklt_two_site_projector(SpinValue(ka)).m, qs, true);
        worst = std::max(worst, st.amps.norm());
    });
    return worst;
}

double aklt_energy(const Lattice& lat, const Vec& state) {
    if (!lat.uniform_spin(2)) throw std::invalid_argument("aklt_energy: spin-1 lattices only");
    const SiteEncoding enc = assign_qubits(lat, EncodingMethod::hadamard_all);
    Statevector st;
    st.n_qubits = enc.n_data;
    st.amps = state;
    const Mat term = blbq_hamiltonian_term(1.0 / 3.0).m;
    double e = 0.0;
    for_each_neighbour_pair(lat, [&](int a, int b) {
        std::vector<int> qs = enc.site_qubits[a];
        qs.insert(qs.end(), enc.site_qubits[b].begin(), enc.site_qubits[b].end());
        e += expectation(st, term, qs);
    });
    return e;
}

}  // namespace vbs
