#include "vbs/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vbs {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool near(double a, double b) { return std::abs(std::remainder(a - b, 2 * kPi)) < 1e-12; }

std::string ident(const std::string& label) {
    std::string s;
    for (char ch : label) s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') ? ch : '_';
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) s = "g_" + s;
    return s;
}

std::string qref(int q) { return "q[" + std::to_string(q) + "]"; }

std::string u1q_line(const U1q& g) {
    const std::string q = qref(g.qubit);
    if (near(g.theta, kPi / 2) && near(g.phi, 0) && near(g.lambda, kPi)) return "h " + q + ";";
    if (near(g.theta, kPi) && near(g.phi, 0) && near(g.lambda, kPi)) return "x " + q + ";";
    if (near(g.theta, 0) && near(g.phi, 0) && near(g.lambda, kPi)) return "z " + q + ";";
    if (near(g.phi, 0) && near(g.lambda, 0)) return "ry(" + num(g.theta) + ") " + q + ";";
    return "u3(" + num(g.theta) + "," + num(g.phi) + "," + num(g.lambda) + ") " + q + ";";
}

// ---- parsing helpers ----

struct ExprParser {
    const std::string& s;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    double primary() {
        skip();
        if (i < s.size() && s[i] == '(') {
            ++i;
            const double v = sum();
            skip();
            if (i >= s.size() || s[i] != ')') throw std::invalid_argument("qasm: unbalanced parenthesis");
            ++i;
            return v;
        }
        if (i < s.size() && s[i] == '-') {
            ++i;
            return -primary();
        }
        if (i < s.size() && s[i] == '+') {
            ++i;
            return primary();
        }
        if (s.compare(i, 2, "pi") == 0) {
            i += 2;
            return kPi;
        }
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s.substr(i), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("qasm: bad number in '" + s + "'");
        }
        i += used;
        return v;
    }
    double product() {
        double v = primary();
        for (;;) {
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                v *= primary();
            } else if (i < s.size() && s[i] == '/') {
                ++i;
                v /= primary();
            } else {
                return v;
            }
        }
    }
    double sum() {
        double v = product();
        for (;;) {
            skip();
            if (i < s.size() && s[i] == '+') {
                ++i;
                v += product();
            } else if (i < s.size() && s[i] == '-') {
                ++i;
                v -= product();
            } else {
                return v;
            }
        }
    }
};

double eval(const std::string& e) {
    ExprParser p{e};
    const double v = p.sum();
    p.skip();
    if (p.i != e.size()) throw std::invalid_argument("qasm: trailing characters in '" + e + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_qubit(const std::string& tok) {
    static const std::regex re(R"(\s*q\s*\[\s*(\d+)\s*\]\s*)");
    std::smatch m;
    if (!std::regex_match(tok, m, re)) throw std::invalid_argument("qasm: expected q[i], got '" + tok + "'");
    return std::stoi(m[1]);
}

}  // namespace

std::string emit_qasm(const Circuit& input, QasmMode mode) {
    const Circuit c = mode == QasmMode::basis ? expand_to_basis(input) : input;
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

    std::map<std::string, std::size_t> declared;
    for (const auto& in : c.ops)
        if (const auto* g = std::get_if<Opaque>(&in)) {
            const std::string name = ident(g->label);
            const auto it = declared.find(name);
            if (it != declared.end() && it->second != g->qubits.size())
                throw std::invalid_argument("emit_qasm: label " + name + " used with different arities");
            if (it == declared.end()) {
                declared[name] = g->qubits.size();
                out << "opaque " << name << " ";
                for (std::size_t k = 0; k < g->qubits.size(); ++k) out << (k ? "," : "") << "a" << k;
                out << ";\n";
            }
        }

    int n_meas = 0;
    for (const auto& in : c.ops)
        if (std::holds_alternative<Measure>(in) || std::holds_alternative<RetryFrom>(in)) ++n_meas;
    out << "qreg q[" << c.n_qubits << "];\n";
    if (n_meas) out << "creg c[" << n_meas << "];\n";

    int k = 0;
    for (const auto& in : c.ops) {
        std::visit(
            [&](const auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, Cnot>) {
                    out << "cx " << qref(g.control) << "," << qref(g.target) << ";\n";
                } else if constexpr (std::is_same_v<T, U1q>) {
                    out << u1q_line(g) << "\n";
                } else if constexpr (std::is_same_v<T, Opaque>) {
                    out << ident(g.label) << " ";
                    for (std::size_t i = 0; i < g.qubits.size(); ++i) out << (i ? "," : "") << qref(g.qubits[i]);
                    out << ";\n";
                } else if constexpr (std::is_same_v<T, Measure>) {
                    out << "measure " << qref(g.qubit) << " -> c[" << k++ << "]; // postselect " << g.expect << "\n";
                } else if constexpr (std::is_same_v<T, Reset>) {
                    out << "reset " << qref(g.qubit) << ";\n";
                } else if constexpr (std::is_same_v<T, Barrier>) {
                    out << "barrier q;\n";
                } else {
                    out << "measure " << qref(g.qubit) << " -> c[" << k++ << "]; // retry " << g.expect << " "
                        << g.restart;
                    for (int r : g.reset_qubits) out << " " << r;
                    out << "\n";
                }
            },
            in);
    }
    return out.str();
}

Circuit parse_qasm(const std::string& text) {
    Circuit c;
    bool have_qreg = false;
    std::set<std::string> opaque_names;
    std::istringstream lines(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        std::string comment;
        if (const auto pos = raw.find("//"); pos != std::string::npos) {
            comment = trim(raw.substr(pos + 2));
            raw = raw.substr(0, pos);
        }
        const auto where = [&] { return " (line " + std::to_string(line_no) + ")"; };
        for (std::string stmt : split(raw, ';')) {
            stmt = trim(stmt);
            if (stmt.empty()) continue;
            std::string head = stmt.substr(0, stmt.find_first_of(" \t("));
            std::string rest = trim(stmt.substr(head.size()));
            if (head == "OPENQASM" || head == "include" || head == "creg") continue;
            if (head == "qreg") {
                static const std::regex re(R"(q\s*\[\s*(\d+)\s*\])");
                std::smatch m;
                if (!std::regex_match(rest, m, re)) throw std::invalid_argument("qasm: only 'qreg q[n]' supported" + where());
                c.n_qubits = std::stoi(m[1]);
                have_qreg = true;
                continue;
            }
            if (head == "opaque") {
                opaque_names.insert(trim(rest.substr(0, rest.find_first_of(" \t("))));
                continue;
            }
            if (!have_qreg) throw std::invalid_argument("qasm: gate before qreg" + where());
            if (head == "barrier") {
                c.barrier();
                continue;
            }
            if (head == "reset") {
                c.ops.emplace_back(Reset{parse_qubit(rest)});
                continue;
            }
            if (head == "measure") {
                const int q = parse_qubit(rest.substr(0, rest.find("->")));
                std::istringstream cs(comment);
                std::string kind;
                cs >> kind;
                if (kind == "postselect") {
                    int expect = 1;
                    cs >> expect;
                    c.measure(q, expect);
                } else if (kind == "retry") {
                    RetryFrom r;
                    r.qubit = q;
                    cs >> r.expect >> r.restart;
                    for (int x; cs >> x;) r.reset_qubits.push_back(x);
                    c.ops.emplace_back(r);
                } else {
                    throw std::invalid_argument("qasm: measurement without postselect annotation" + where());
                }
                continue;
            }

            std::vector<double> params;
            std::string args = rest;
            if (!rest.empty() && rest[0] == '(') {
                const auto close = rest.find(')');
                if (close == std::string::npos) throw std::invalid_argument("qasm: unbalanced parameters" + where());
                for (const auto& e : split(rest.substr(1, close - 1), ',')) params.push_back(eval(trim(e)));
                args = trim(rest.substr(close + 1));
            }
            std::vector<int> qs;
            for (const auto& a : split(args, ',')) qs.push_back(parse_qubit(a));
            auto need = [&](std::size_t np, std::size_t nq) {
                if (params.size() != np || qs.size() != nq)
                    throw std::invalid_argument("qasm: wrong arity for '" + head + "'" + where());
            };
            if (head == "cx" || head == "CX") {
                need(0, 2);
                c.cx(qs[0], qs[1]);
            } else if (head == "u3" || head == "U") {
                need(3, 1);
                c.u(params[0], params[1], params[2], qs[0]);
            } else if (head == "u2") {
                need(2, 1);
                c.u(kPi / 2, params[0], params[1], qs[0]);
            } else if (head == "u1" || head == "rz") {
                need(1, 1);
                c.u(0, 0, params[0], qs[0]);
            } else if (head == "ry") {
                need(1, 1);
                c.u(params[0], 0, 0, qs[0]);
            } else if (head == "rx") {
                need(1, 1);
                c.u(params[0], -kPi / 2, kPi / 2, qs[0]);
            } else if (head == "h") {
                need(0, 1);
                c.h(qs[0]);
            } else if (head == "x") {
                need(0, 1);
                c.x(qs[0]);
            } else if (head == "y") {
                need(0, 1);
                c.u(kPi, kPi / 2, kPi / 2, qs[0]);
            } else if (head == "z") {
                need(0, 1);
                c.z(qs[0]);
            } else if (head == "s" || head == "sdg" || head == "t" || head == "tdg") {
                need(0, 1);
                const double l = (head[0] == 's' ? kPi / 2 : kPi / 4) * (head.size() == 3 ? -1 : 1);
                c.u(0, 0, l, qs[0]);
            } else if (opaque_names.count(head)) {
                Opaque op;
                op.label = head;
                op.qubits = qs;
                c.ops.emplace_back(std::move(op));
            } else {
                throw std::invalid_argument("qasm: unknown gate '" + head + "'" + where());
            }
        }
    }
    if (!have_qreg) throw std::invalid_argument("qasm: no qreg declaration");
    return c;
}

}  // namespace vbs
