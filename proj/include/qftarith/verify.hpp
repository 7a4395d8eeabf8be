#ifndef QFTARITH_VERIFY_HPP
#define QFTARITH_VERIFY_HPP

// Exhaustive checks of synthesized circuits against the classical oracles.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qftarith/arith_core.hpp"
#include "qftarith/simulator.hpp"
#include "qftarith/synthesis.hpp"

namespace qftarith {

using Assignment = std::map<std::string, std::uint64_t>;
using LogicalAssignment = std::map<std::string, std::int64_t>;

/// What the result register should read for one input.
struct Expectation {
    std::optional<std::uint64_t> point;   // set when the result is a basis state
    OutcomeDistribution distribution;     // full expected distribution otherwise
};

/// Register codes for logical inputs (two's complement for signed adders).
/// Throws std::out_of_range for values the op cannot take.
Assignment encode_inputs(const ArithmeticSpec& spec, const RegisterLayout& layout, const LogicalAssignment& logical);

/// Logical value of a result-register outcome.
std::int64_t decode_result(const ArithmeticSpec& spec, const RegisterLayout& layout, std::uint64_t outcome);

Expectation expected_readout(const ArithmeticSpec& spec, const RegisterLayout& layout, const Assignment& inputs);

/// Every input assignment the verifier enumerates for this spec.
std::uint64_t case_count(const ArithmeticSpec& spec);

class CaseCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

struct VerifyOptions {
    std::uint64_t max_cases = 4096;
    double tolerance = 1e-9;
    SynthOptions synth;
    SimOptions sim;
};

struct VerifyReport {
    std::string label;
    std::uint64_t cases = 0;
    std::uint64_t passed = 0;
    /// Largest of: 1 - P(expected outcome), per-outcome distribution error,
    /// input-register disturbance, amplitude error (QFT).
    double worst_deficit = 0.0;
    std::vector<std::string> failures;   // first few only

    bool ok() const { return cases > 0 && passed == cases; }
};

VerifyReport verify(const ArithmeticSpec& spec, const VerifyOptions& opts = {});

/// Prepared input, simulated circuit.
StateVector simulate(const CircuitIR& circuit, const Assignment& inputs, const SimOptions& opts = {});

}  // namespace qftarith

#endif  // QFTARITH_VERIFY_HPP
