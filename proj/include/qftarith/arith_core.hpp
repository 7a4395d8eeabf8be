#ifndef QFTARITH_ARITH_CORE_HPP
#define QFTARITH_ARITH_CORE_HPP

// Classical encodings, register sizing rules and exact oracles. Everything in
// this header is integer arithmetic except fractional_readout_distribution,
// which turns an exact rational phase value into readout probabilities.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qftarith {

/// Exact rational with a positive denominator, always in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    /// Parses "r/s" or "r".
    static Rational parse(const std::string& text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    std::int64_t floor() const;
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

class ModularInt {
public:
    ModularInt(std::uint64_t value, std::uint64_t modulus);

    std::uint64_t value() const { return value_; }
    std::uint64_t modulus() const { return modulus_; }
    friend bool operator==(const ModularInt&, const ModularInt&) = default;

private:
    std::uint64_t value_;
    std::uint64_t modulus_;
};

/// Inclusive window of logical values a signed code of modulus d can hold.
/// Negative values -x live at code d - x, so even moduli give the
/// two's-complement range [-d/2, d/2 - 1].
std::pair<std::int64_t, std::int64_t> signed_window(std::uint64_t modulus);

class SignedCode {
public:
    static SignedCode encode(std::int64_t logical, std::uint64_t modulus);
    static SignedCode decode(std::uint64_t code, std::uint64_t modulus);

    std::int64_t logical() const { return logical_; }
    std::uint64_t code() const { return code_; }
    std::uint64_t modulus() const { return modulus_; }

private:
    SignedCode(std::int64_t logical, std::uint64_t code, std::uint64_t modulus)
        : logical_(logical), code_(code), modulus_(modulus) {}

    std::int64_t logical_;
    std::uint64_t code_;
    std::uint64_t modulus_;
};

/// q-bit unsigned integer `raw` read as raw / 2^p.
class FixedPointWeight {
public:
    FixedPointWeight(std::uint64_t raw, int q, int p);

    std::uint64_t raw() const { return raw_; }
    int q() const { return q_; }
    int p() const { return p_; }
    Rational value() const;

private:
    std::uint64_t raw_;
    int q_;
    int p_;
};

/// Readout probabilities of one register, indexed by outcome.
struct OutcomeDistribution {
    std::string register_name;
    std::vector<double> probabilities;

    double total() const;
    /// Most probable outcome; ties go to the smaller outcome.
    std::pair<std::uint64_t, double> peak() const;
};

/// Exact value of a (possibly fractional) sum, with its reduction modulo the
/// result register size.
struct OracleValue {
    Rational value;
    bool is_exact = false;
    std::uint64_t integer_part = 0;   // floor(value) mod modulus
};

ModularInt oracle_add(const ModularInt& a, const ModularInt& b);

OracleValue oracle_weighted_sum(std::span<const std::uint64_t> values,
                                std::span<const FixedPointWeight> weights,
                                int result_bits);

OracleValue oracle_mean(std::span<const std::uint64_t> values, std::uint64_t modulus);

/// Dimension that holds the exact sum of `count` values each below `dim`.
std::uint64_t dimension_for_exact_sum(std::uint64_t count, std::uint64_t dim);

/// Result register width for the sum of `count` products of an n-bit value and
/// a q-bit weight: q + n + ceil(log2 count).
int result_width_for_weighted_sum(int count, int n, int q);

/// ceil(log2 x) for x >= 1.
int ceil_log2(std::uint64_t x);

/// Distribution read out after an inverse Fourier transform of a modulus-M
/// phase state carrying value v: P(l) = |(1/M) sum_k e^{i2pi(v-l)k/M}|^2.
/// Each term's phase is reduced exactly in integers before conversion.
OutcomeDistribution fractional_readout_distribution_mod(const Rational& v, std::uint64_t modulus);

/// The qubit case, M = 2^result_bits.
OutcomeDistribution fractional_readout_distribution(const Rational& v, int result_bits);

}  // namespace qftarith

#endif  // QFTARITH_ARITH_CORE_HPP
