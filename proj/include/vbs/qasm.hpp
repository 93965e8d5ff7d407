#pragma once

#include <string>

#include "vbs/circuit.hpp"

namespace vbs {

enum class QasmMode { structural, basis };

// OpenQASM 2.0. Structural mode keeps Opaque gates as `opaque` declarations;
// basis mode expands them first and throws if one has no expansion.
// Post-selection markers become measurements followed by a `// postselect`
// comment that parse_qasm reads back.
std::string emit_qasm(const Circuit& c, QasmMode mode);

// Parses the subset emit_qasm produces (plus u1/u2/u3/rz/ry/rx/h/x/y/z/s/t/cx).
// Opaque gates come back with their label and qubits but no matrix.
Circuit parse_qasm(const std::string& text);

}  // namespace vbs
