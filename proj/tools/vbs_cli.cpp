// Command-line front end: prepare, verify, resources, emit-qasm.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vbs/report.hpp"
#include "vbs/statesim.hpp"

namespace {

// Exit codes, listed in the README.
enum Exit : int {
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
    kConfig = 3,
    kQubitCap = 4,
    kIo = 5,
    kEmission = 6,
    kInternal = 7,
};

int write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return kIo;
    }
    return kOk;
}

std::string summary(const vbs::Report& r) {
    std::string s;
    for (const auto& c : r.checks)
        s += std::string(c.pass ? "ok   " : "FAIL ") + c.name + "\n";
    s += r.all_pass() ? "all checks passed\n" : "some checks failed\n";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Valence-bond-solid state preparation circuits: build, simulate, verify, count."};
    app.require_subcommand(1);

    vbs::RunConfig cfg;
    int spin = 0;
    std::string out_path, qasm_mode = "structural";
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spin", spin, "2S of every site (2 = spin-1, 3 = spin-3/2)");
        sub->add_option("--lattice", cfg.lattice,
                        "chain:N:open:aligned|anti, chain:N:ring, three-link-pair, honeycomb:R:C, multiring:N, file:path")
            ->capture_default_str();
        sub->add_option("--method", cfg.method,
                        "probabilistic, probabilistic_nophase, mitigated_islands, mitigated_retry, lcu, lcu_sparse, "
                        "lcu_dense, mps")
            ->capture_default_str();
        sub->add_option("--coupling", cfg.coupling, "all_to_all, linear or heavy_hex (resource accounting)")
            ->capture_default_str();
        sub->add_option("--seed", cfg.seed, "seed for sampled routes and shots")->capture_default_str();
        sub->add_option("--out", out_path, "output file (default stdout)");
    };

    auto* prepare = app.add_subcommand("prepare", "build and simulate one route, write a JSON report");
    add_common(prepare);
    prepare->add_option("--shots", cfg.shots, "Monte-Carlo shots of the post-selection (0 = none)")->capture_default_str();
    auto* verify = app.add_subcommand("verify", "run every compatible route and cross-check the states");
    add_common(verify);
    auto* resources = app.add_subcommand("resources", "print the CNOT depth grid");
    resources->add_option("--out", out_path, "write the grid as JSON to this file");
    auto* emit = app.add_subcommand("emit-qasm", "write the route circuit as OpenQASM 2.0");
    add_common(emit);
    emit->add_option("--qasm-mode", qasm_mode, "structural (opaque blocks) or basis (CNOT + one-qubit gates)")
        ->check(CLI::IsMember({"structural", "basis"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    if (spin != 0) cfg.twice_s = spin;
    cfg.qasm_mode = qasm_mode == "basis" ? vbs::QasmMode::basis : vbs::QasmMode::structural;

    try {
        if (*prepare || *verify) {
            const vbs::Report rep = *prepare ? vbs::run_prepare(cfg) : vbs::run_verify(cfg);
            if (const int rc = write_out(out_path, rep.to_json().dump(2) + "\n"); rc != kOk) return rc;
            std::cerr << summary(rep);
            return rep.all_pass() ? kOk : kCheckFailed;
        }
        if (*resources) {
            const auto grid = vbs::resources_grid();
            std::cout << vbs::resources_text(grid);
            return out_path.empty() ? kOk : write_out(out_path, grid.dump(2) + "\n");
        }
        if (*emit) {
            std::string text;
            try {
                text = vbs::emit_for_config(cfg);
            } catch (const std::runtime_error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kEmission;
            }
            return write_out(out_path, text);
        }
    } catch (const vbs::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const vbs::QubitCapExceeded& e) {
        std::cerr << "error: " << e.what() << " (raise VBS_MAX_QUBITS or use a smaller lattice)\n";
        return kQubitCap;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
