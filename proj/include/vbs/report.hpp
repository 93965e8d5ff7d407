#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbs/lattice.hpp"
#include "vbs/qasm.hpp"

namespace vbs {

inline constexpr const char* kReportSchema = "vbs-report/1";

// Bad lattice spec, unknown method, or a method that does not fit the lattice.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::optional<int> twice_s;  // checked against the lattice when given
    std::string lattice = "chain:4:open:aligned";
    std::string method = "probabilistic";
    std::string coupling = "all_to_all";
    int shots = 0;
    std::uint64_t seed = 1;
    QasmMode qasm_mode = QasmMode::structural;
};

// chain:N:open:aligned|anti, chain:N:ring, three-link-pair, honeycomb:R:C,
// multiring:N, file:path (lattice JSON).
Lattice parse_lattice_spec(const std::string& spec);

// "lcu" means lcu_sparse; every route name of run_route is accepted as is.
std::string normalize_method(const std::string& method);

// Resolves the lattice and checks spin, method and coupling before any work.
Lattice validate_config(const RunConfig& cfg);

struct Check {
    std::string name;
    std::string relation;  // "==" (within tol), "<=" or ">="
    double expected = 0;
    double actual = 0;
    double tol = 0;
    bool pass = false;
};
Check check_close(std::string name, double expected, double actual, double tol);
Check check_at_most(std::string name, double bound, double actual);
Check check_at_least(std::string name, double bound, double actual);

struct Report {
    std::string method;
    nlohmann::json lattice;
    nlohmann::json analytic = nlohmann::json::object();
    nlohmann::json simulated = nlohmann::json::object();
    nlohmann::json shots = nlohmann::json::object();
    nlohmann::json resources = nlohmann::json::object();
    std::vector<Check> checks;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

Report run_prepare(const RunConfig& cfg);
// Every compatible route within the qubit cap, checked against the oracle and
// against each other.
Report run_verify(const RunConfig& cfg);
// Depth grid for the four spin/coupling rows, plus the spin-2 LCU count.
nlohmann::json resources_grid();
std::string resources_text(const nlohmann::json& grid);
std::string emit_for_config(const RunConfig& cfg);

}  // namespace vbs
