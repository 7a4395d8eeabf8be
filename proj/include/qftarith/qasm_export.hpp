#ifndef QFTARITH_QASM_EXPORT_HPP
#define QFTARITH_QASM_EXPORT_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "qftarith/circuit_ir.hpp"

namespace qftarith {

enum class QasmDialect { Qasm2, Qasm3 };

QasmDialect parse_dialect(std::string_view text);

struct ExportOptions {
    QasmDialect dialect = QasmDialect::Qasm3;
    /// Emit `swap` directly; otherwise each swap becomes three CNOTs.
    bool include_swaps = true;
    /// Extra header comment; the circuit metadata is always written.
    std::string header;
};

/// OpenQASM text, one gate per line. Each layout register becomes one qubit
/// array with index 0 holding its most significant bit. Rotation angles are
/// printed as exact pi/2^k fractions. In qasm2 a doubly controlled phase
/// theta becomes cu1(theta/2) c1,t; cx c1,c2; cu1(-theta/2) c2,t; cx c1,c2;
/// cu1(theta/2) c2,t.
std::string export_qasm(const CircuitIR& circuit, const ExportOptions& options = {});

class QasmParseError : public std::invalid_argument {
public:
    QasmParseError(int line, const std::string& message)
        : std::invalid_argument("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Reads back the exporter's own subset of either dialect. CNOTs are mapped
/// to H . CZ . H on the target, so the result stays within the IR gate set.
CircuitIR import_for_test(std::string_view text);

/// "pi", "pi/2", "-pi/4", ... for sign * pi / 2^exponent.
std::string pi_fraction(int sign, int exponent);

}  // namespace qftarith

#endif  // QFTARITH_QASM_EXPORT_HPP
