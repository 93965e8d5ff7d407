#include "vbs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "vbs/analysis.hpp"
#include "vbs/mpsprep.hpp"
#include "vbs/prepare.hpp"
#include "vbs/statesim.hpp"

namespace vbs {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

int parse_positive(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || v < 1) throw ConfigError(what + " must be a positive integer, got '" + text + "'");
    return v;
}

bool postselecting(const std::string& route) { return route != "mitigated_retry" && route != "mps"; }

int neighbour_pairs(const Lattice& lat) {
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : lat.links)
        if (a != b) seen.insert(std::minmax(a, b));
    return int(seen.size());
}

std::optional<double> closed_form_norm(const Lattice& lat) {
    if (!lat.uniform_spin(2)) return std::nullopt;
    if (lat.boundary == Boundary::ring && lat.n_sites >= 2) return vbs_norm(2, lat.n_sites, Boundary::ring);
    if (lat.boundary == Boundary::open_chain) {
        int left = 0, right = 0;
        for (const auto& d : lat.dangling) (d.site == 0 ? left : right) = d.state;
        return vbs_norm(2, lat.n_sites, Boundary::open_chain, left, right);
    }
    return std::nullopt;
}

// Probability the route's own post-selection succeeds, from the exact norm.
std::optional<double> expected_success(const Lattice& lat, const std::string& route, double norm_sq) {
    if (route == "probabilistic" || route == "probabilistic_nophase" || route == "lcu_sparse" || route == "lcu_dense")
        return norm_sq;
    if (route == "mitigated_islands") {
        double islands = 1.0;
        for (int s : sublattice_sites(lat, Sublattice::A)) islands *= site_success_probability(lat, s);
        return norm_sq / islands;
    }
    if (route == "mps") {
        if (lat.boundary != Boundary::ring) return 1.0;
        const double n = default_embedding_scale(periodic_first_site_matrix(vbs_bulk_tensor()));
        return mps_periodic_success(lat.n_sites, n);
    }
    return 1.0;
}

nlohmann::json resources_of(const Circuit& c, const std::string& coupling) {
    nlohmann::json r;
    r["coupling"] = coupling;
    r["qubits"] = c.n_qubits;
    try {
        r["cnot_count"] = cnot_count(c, coupling);
    } catch (const std::runtime_error&) {
        r["cnot_count"] = nullptr;  // declared depth only
    }
    try {
        r["cnot_depth"] = cnot_depth(c, coupling);
    } catch (const std::runtime_error& e) {
        r["cnot_depth"] = nullptr;
        r["note"] = e.what();
    }
    return r;
}

// Checks shared by prepare and verify for one route.
void route_checks(const Lattice& lat, const RouteState& rs, const Vec& oracle, double norm_sq, std::vector<Check>& out,
                  nlohmann::json& sim) {
    const std::string& r = rs.route;
    const double f = fidelity(rs.state, oracle);
    sim["fidelity_to_oracle"] = f;
    sim["success_probability"] = rs.success_prob;
    sim["total_qubits"] = rs.total_qubits;
    out.push_back(check_at_least(r + ": fidelity to oracle", 1.0 - 1e-10, f));
    if (const auto e = expected_success(lat, r, norm_sq); e && r != "mitigated_retry")
        out.push_back(check_close(r + ": post-selection probability", *e, rs.success_prob, 1e-10));
    if (r == "mitigated_retry") {
        sim["attempts"] = rs.attempts;
        sim["retries"] = rs.retries;
    }
    const double res = max_projector_residual(lat, rs.state);
    sim["max_projector_residual"] = res;
    out.push_back(check_at_most(r + ": AKLT projector residual", 1e-10, res));
    if (lat.uniform_spin(2)) {
        const double e = aklt_energy(lat, rs.state);
        sim["energy"] = e;
        out.push_back(check_close(r + ": energy", -2.0 * neighbour_pairs(lat) / 3.0, e, 1e-10));
    }
}

}  // namespace

Lattice parse_lattice_spec(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.empty()) throw ConfigError("empty lattice spec");
    const std::string& kind = parts[0];
    try {
        if (kind == "chain") {
            if (parts.size() == 3 && parts[2] == "ring")
                return build_chain(parse_positive(parts[1], "chain length"), Boundary::ring);
            if (parts.size() == 4 && parts[2] == "open" && (parts[3] == "aligned" || parts[3] == "anti"))
                return build_chain(parse_positive(parts[1], "chain length"), Boundary::open_chain, 0,
                                   parts[3] == "aligned" ? 0 : 1);
            throw ConfigError("chain spec must be chain:N:ring or chain:N:open:aligned|anti");
        }
        if (kind == "three-link-pair" && parts.size() == 1) return build_three_link_pair();
        if (kind == "honeycomb" && parts.size() == 3)
            return build_honeycomb_patch(parse_positive(parts[1], "rows"), parse_positive(parts[2], "cols"));
        if (kind == "multiring" && parts.size() == 2) return build_multigraph_ring(parse_positive(parts[1], "ring size"));
        if (kind == "file" && parts.size() >= 2) {
            const std::string path = spec.substr(5);
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot read lattice file '" + path + "'");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("lattice file '" + path + "' is not valid JSON: " + e.what());
            }
            Lattice lat = lattice_from_json(j);
            lat.validate();
            return lat;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown lattice spec '" + spec +
                      "' (expected chain:N:open:aligned|anti, chain:N:ring, three-link-pair, honeycomb:R:C, "
                      "multiring:N or file:path)");
}

std::string normalize_method(const std::string& method) {
    static const std::vector<std::string> routes{"probabilistic", "probabilistic_nophase", "mitigated_islands",
                                                 "mitigated_retry", "lcu_sparse", "lcu_dense", "mps"};
    if (method == "lcu") return "lcu_sparse";
    if (std::find(routes.begin(), routes.end(), method) != routes.end()) return method;
    throw ConfigError("unknown method '" + method +
                      "' (expected probabilistic, probabilistic_nophase, mitigated_islands, mitigated_retry, lcu, "
                      "lcu_sparse, lcu_dense or mps)");
}

Lattice validate_config(const RunConfig& cfg) {
    const Lattice lat = parse_lattice_spec(cfg.lattice);
    const std::string route = normalize_method(cfg.method);
    if (cfg.twice_s) {
        if (*cfg.twice_s < 1) throw ConfigError("--spin is 2S and must be positive");
        if (!lat.uniform_spin(*cfg.twice_s))
            throw ConfigError("lattice '" + cfg.lattice + "' does not have spin 2S=" + std::to_string(*cfg.twice_s) +
                              " on every site");
    }
    if (route == "mps") {
        const bool chain = lat.boundary == Boundary::open_chain || lat.boundary == Boundary::ring;
        if (!chain || !lat.uniform_spin(2))
            throw ConfigError("method mps needs a one-dimensional spin-1 chain (--spin 2, chain:...)");
        if (lat.n_sites > 6 || (lat.boundary == Boundary::ring && lat.n_sites < 3))
            throw ConfigError("method mps supports open chains with 2..6 sites and rings with 3..6 sites");
    }
    if ((route == "mitigated_islands" || route == "mitigated_retry") && !is_bipartite(lat))
        throw ConfigError("method " + route + " needs a bipartite lattice");
    if (route == "probabilistic_nophase" && !lat.uniform_spin(2))
        throw ConfigError("method probabilistic_nophase needs spin-1 sites");
    if (cfg.coupling != "all_to_all" && cfg.coupling != "linear" && cfg.coupling != "heavy_hex")
        throw ConfigError("unknown coupling '" + cfg.coupling + "' (expected all_to_all, linear or heavy_hex)");
    if (cfg.shots < 0) throw ConfigError("--shots must be non-negative");
    return lat;
}

Check check_close(std::string name, double expected, double actual, double tol) {
    return {std::move(name), "==", expected, actual, tol, std::abs(actual - expected) <= tol};
}
Check check_at_most(std::string name, double bound, double actual) {
    return {std::move(name), "<=", bound, actual, 0.0, actual <= bound};
}
Check check_at_least(std::string name, double bound, double actual) {
    return {std::move(name), ">=", bound, actual, 0.0, actual >= bound};
}

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["method"] = method;
    j["lattice"] = lattice;
    j["analytic"] = analytic;
    j["simulated"] = simulated;
    j["shots"] = shots;
    j["resources"] = resources;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"relation", c.relation},
                               {"expected", c.expected},
                               {"actual", c.actual},
                               {"tol", c.tol},
                               {"pass", c.pass}});
    j["pass"] = all_pass();
    return j;
}

Report run_prepare(const RunConfig& cfg) {
    const Lattice lat = validate_config(cfg);
    const std::string route = normalize_method(cfg.method);
    Report rep;
    rep.method = route;
    rep.lattice = lattice_to_json(lat);

    double norm_sq = 0;
    const Vec oracle = oracle_vbs_state(lat, &norm_sq);
    rep.analytic["norm_sq"] = norm_sq;
    if (const auto cf = closed_form_norm(lat)) {
        rep.analytic["norm_sq_closed_form"] = *cf;
        rep.checks.push_back(check_close("closed-form norm", *cf, norm_sq, 1e-12));
    }
    if (const auto e = expected_success(lat, route, norm_sq)) rep.analytic["success_probability"] = *e;

    const RouteState rs = run_route(lat, route, cfg.seed);
    route_checks(lat, rs, oracle, norm_sq, rep.checks, rep.simulated);

    if (cfg.shots > 0 && postselecting(route)) {
        const double p = *expected_success(lat, route, norm_sq);
        const MonteCarlo mc = monte_carlo_success(rs.circuit, p, cfg.shots, cfg.seed);
        rep.shots = {{"shots", mc.shots}, {"successes", mc.successes}, {"rate", mc.rate}, {"z_score", mc.z_score},
                     {"seed", cfg.seed}};
        rep.checks.push_back(check_at_most("monte carlo |z|", 3.0, std::abs(mc.z_score)));
    } else if (cfg.shots > 0) {
        rep.shots = {{"shots", cfg.shots}, {"note", "route has no post-selection to sample"}};
    }
    rep.resources = resources_of(rs.circuit, cfg.coupling);
    return rep;
}

Report run_verify(const RunConfig& cfg) {
    const Lattice lat = validate_config(cfg);
    Report rep;
    rep.method = "verify";
    rep.lattice = lattice_to_json(lat);

    double norm_sq = 0;
    const Vec oracle = oracle_vbs_state(lat, &norm_sq);
    rep.analytic["norm_sq"] = norm_sq;
    if (const auto cf = closed_form_norm(lat)) {
        rep.analytic["norm_sq_closed_form"] = *cf;
        rep.checks.push_back(check_close("closed-form norm", *cf, norm_sq, 1e-12));
    }
    rep.checks.push_back(check_at_most("oracle: AKLT projector residual", 1e-10, max_projector_residual(lat, oracle)));

    std::vector<RouteState> states;
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& r : compatible_routes(lat)) {
        try {
            states.push_back(run_route(lat, r, cfg.seed));
        } catch (const QubitCapExceeded& e) {
            skipped.push_back({{"route", r}, {"reason", e.what()}});
            continue;
        }
        nlohmann::json sim;
        route_checks(lat, states.back(), oracle, norm_sq, rep.checks, sim);
        rep.simulated["routes"][r] = sim;
        rep.resources[r] = resources_of(states.back().circuit, cfg.coupling);
    }
    rep.simulated["skipped"] = skipped;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            rep.checks.push_back(check_at_least(states[i].route + " vs " + states[j].route + ": fidelity", 1.0 - 1e-10,
                                                fidelity(states[i].state, states[j].state)));
    return rep;
}

nlohmann::json resources_grid() {
    nlohmann::json g;
    g["cells"] = nlohmann::json::array();
    for (const auto& c : depth_table())
        g["cells"].push_back({{"twice_s", c.twice_s},
                              {"method", c.method},
                              {"coupling", c.coupling},
                              {"depth", c.depth},
                              {"count", c.count < 0 ? nlohmann::json(nullptr) : nlohmann::json(c.count)},
                              {"breakdown", c.breakdown}});
    const auto lcu = resource_summary(4, "lcu", "all_to_all");
    g["lcu_spin2"] = {{"count", lcu.count}, {"depth", lcu.depth}, {"breakdown", lcu.breakdown}};
    return g;
}

std::string resources_text(const nlohmann::json& grid) {
    std::string out = "spin  coupling    probabilistic  islands+probabilistic\n";
    const auto& cells = grid.at("cells");
    for (std::size_t i = 0; i + 1 < cells.size(); i += 2) {
        const auto& a = cells[i];
        const auto& b = cells[i + 1];
        const int ts = a.at("twice_s").get<int>();
        char line[160];
        std::snprintf(line, sizeof line, "%-5s %-11s %-14d %d\n", ts == 2 ? "1" : "3/2",
                      a.at("coupling").get<std::string>().c_str(), a.at("depth").get<int>(), b.at("depth").get<int>());
        out += line;
    }
    out += "spin-2 LCU CNOTs: " + std::to_string(grid.at("lcu_spin2").at("count").get<int>()) + " (" +
           grid.at("lcu_spin2").at("breakdown").get<std::string>() + ")\n";
    return out;
}

std::string emit_for_config(const RunConfig& cfg) {
    const Lattice lat = validate_config(cfg);
    return emit_qasm(route_circuit(lat, normalize_method(cfg.method)), cfg.qasm_mode);
}

}  // namespace vbs
