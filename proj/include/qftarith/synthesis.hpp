#ifndef QFTARITH_SYNTHESIS_HPP
#define QFTARITH_SYNTHESIS_HPP

// Qubit circuits for Fourier-domain arithmetic. Every register stores its most
// significant bit on its first site. Between the forward and inverse
// transforms of the result register all gates are diagonal, so a controlled
// R_l on transformed bit s adds the phase 2pi * (control product) * k_s / 2^l.

#include <cstdint>
#include <optional>
#include <string>

#include "qftarith/circuit_ir.hpp"

namespace qftarith {

enum class Operation { Qft, Adder, ConstMultiplier, Multiplier, WeightedSum };

std::string_view to_string(Operation op);
Operation parse_operation(std::string_view text);

struct ArithmeticSpec {
    Operation op = Operation::Adder;
    int n = 1;                     // operand / value bits
    bool exact = false;            // adder: extra leading result bit
    bool is_signed = false;        // adder: two's-complement operands
    std::uint64_t constant = 0;    // const multiplier
    int count = 1;                 // weighted sum: N
    int q = 1;                     // weighted sum: weight bits
    int p = 0;                     // weighted sum: weight precision
    std::optional<int> t;          // result bits (multiplier, weighted sum)

    friend bool operator==(const ArithmeticSpec&, const ArithmeticSpec&) = default;
};

/// Throws std::invalid_argument for combinations the op cannot take. Fills
/// nothing in; see resolved().
void validate(const ArithmeticSpec& spec);

/// Copy with defaulted fields made explicit (t for multiplier and weighted sum).
ArithmeticSpec resolved(const ArithmeticSpec& spec);

/// Single-line "op=add n=3 exact=1 ..." form stored as circuit metadata.
std::string summary(const ArithmeticSpec& spec);
ArithmeticSpec parse_summary(std::string_view text);

struct SynthOptions {
    /// Emit the bit-reversal swaps after each transform. Without them,
    /// transformed bit s lives on the reversed site and later gates are
    /// reindexed to match.
    bool explicit_swaps = true;
    /// Drop rotations with l above this (approximate synthesis). Off by default.
    std::optional<int> max_l;
};

/// Fourier transform on a `width`-qubit register "x".
CircuitIR synth_qft(int width, const SynthOptions& opts = {});

/// Registers b (n) and a (n + 1 when exact, else n); a receives a + b.
CircuitIR synth_adder(int n, bool exact, bool is_signed = false, const SynthOptions& opts = {});

/// Registers x (n) and r (n + bit_width(b)); r receives b * x.
CircuitIR synth_const_multiplier(int n, std::uint64_t constant, const SynthOptions& opts = {});

/// Registers a (n), b (n), r (2n); r receives a * b.
CircuitIR synth_multiplier(int n, const SynthOptions& opts = {});

/// As synth_multiplier with a t-bit result holding a * b mod 2^t.
CircuitIR synth_modular_multiplier(int n, int t, const SynthOptions& opts = {});

/// Registers a1, x1, ..., aN, xN and r (t); r receives
/// (sum raw_m * x_m) / 2^p mod 2^t in phase, read out after the inverse QFT.
CircuitIR synth_weighted_sum(int count, int n, int q, int p, int t, const SynthOptions& opts = {});

CircuitIR synthesize(const ArithmeticSpec& spec, const SynthOptions& opts = {});

}  // namespace qftarith

#endif  // QFTARITH_SYNTHESIS_HPP
