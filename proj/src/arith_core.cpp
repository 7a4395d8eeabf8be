#include "qftarith/arith_core.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qftarith {

namespace {

__extension__ typedef __int128 i128;

std::int64_t narrow(i128 x) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(x);
}

Rational make_reduced(i128 num, i128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
        i128 r = a % b;
        a = b;
        b = r;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return Rational(narrow(num), narrow(den));
}

// Positive remainder of x mod m.
i128 pmod(i128 x, i128 m) {
    i128 r = x % m;
    return r < 0 ? r + m : r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            auto v = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return Rational(v);
        }
        auto num_text = text.substr(0, slash);
        auto den_text = text.substr(slash + 1);
        auto n = std::stoll(num_text, &used);
        if (used != num_text.size()) throw std::invalid_argument(text);
        auto d = std::stoll(den_text, &used);
        if (used != den_text.size()) throw std::invalid_argument(text);
        if (d == 0) throw std::invalid_argument(text);
        return Rational(n, d);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("invalid rational '" + text + "'");
    }
}

std::int64_t Rational::floor() const {
    auto q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return make_reduced(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make_reduced(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    return make_reduced(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

ModularInt::ModularInt(std::uint64_t value, std::uint64_t modulus) : value_(value), modulus_(modulus) {
    if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
    if (value >= modulus)
        throw std::out_of_range("value " + std::to_string(value) + " not below modulus " +
                                std::to_string(modulus));
}

std::pair<std::int64_t, std::int64_t> signed_window(std::uint64_t modulus) {
    if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
    auto d = static_cast<std::int64_t>(modulus);
    return {-(d / 2), (d + 1) / 2 - 1};
}

SignedCode SignedCode::encode(std::int64_t logical, std::uint64_t modulus) {
    auto [lo, hi] = signed_window(modulus);
    if (logical < lo || logical > hi)
        throw std::out_of_range("signed value " + std::to_string(logical) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    auto code = logical >= 0 ? static_cast<std::uint64_t>(logical)
                             : modulus - static_cast<std::uint64_t>(-logical);
    return SignedCode(logical, code, modulus);
}

SignedCode SignedCode::decode(std::uint64_t code, std::uint64_t modulus) {
    ModularInt checked(code, modulus);
    auto hi = signed_window(modulus).second;
    auto logical = static_cast<std::int64_t>(code);
    if (logical > hi) logical -= static_cast<std::int64_t>(modulus);
    return SignedCode(logical, code, modulus);
}

FixedPointWeight::FixedPointWeight(std::uint64_t raw, int q, int p) : raw_(raw), q_(q), p_(p) {
    if (q < 1 || q > 62) throw std::invalid_argument("weight width q must be in [1, 62]");
    if (p < 0 || p > 62) throw std::invalid_argument("weight precision p must be in [0, 62]");
    if (raw >= (std::uint64_t{1} << q))
        throw std::out_of_range("weight raw value does not fit in q bits");
}

Rational FixedPointWeight::value() const {
    return Rational(static_cast<std::int64_t>(raw_), std::int64_t{1} << p_);
}

double OutcomeDistribution::total() const {
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

std::pair<std::uint64_t, double> OutcomeDistribution::peak() const {
    std::uint64_t best = 0;
    double best_p = -1.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] > best_p) {
            best = i;
            best_p = probabilities[i];
        }
    }
    return {best, best_p};
}

ModularInt oracle_add(const ModularInt& a, const ModularInt& b) {
    if (a.modulus() != b.modulus()) throw std::invalid_argument("oracle_add: modulus mismatch");
    auto m = a.modulus();
    return ModularInt(static_cast<std::uint64_t>((i128(a.value()) + b.value()) % m), m);
}

namespace {

OracleValue reduce(const Rational& v, std::uint64_t modulus) {
    OracleValue out;
    out.value = v;
    out.is_exact = v.is_integer();
    out.integer_part = static_cast<std::uint64_t>(pmod(v.floor(), modulus));
    return out;
}

}  // namespace

OracleValue oracle_weighted_sum(std::span<const std::uint64_t> values,
                                std::span<const FixedPointWeight> weights, int result_bits) {
    if (values.empty() || weights.empty()) throw std::invalid_argument("oracle_weighted_sum: empty input");
    if (values.size() != weights.size())
        throw std::invalid_argument("oracle_weighted_sum: values and weights differ in length");
    if (result_bits < 1 || result_bits > 62) throw std::invalid_argument("result width out of range");
    Rational sum;
    for (std::size_t m = 0; m < values.size(); ++m)
        sum = sum + weights[m].value() * Rational(static_cast<std::int64_t>(values[m]));
    return reduce(sum, std::uint64_t{1} << result_bits);
}

OracleValue oracle_mean(std::span<const std::uint64_t> values, std::uint64_t modulus) {
    if (values.empty()) throw std::invalid_argument("oracle_mean: empty input");
    if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
    i128 total = 0;
    for (auto v : values) total += v;
    return reduce(make_reduced(total, static_cast<i128>(values.size())), modulus);
}

std::uint64_t dimension_for_exact_sum(std::uint64_t count, std::uint64_t dim) {
    if (count < 2 || dim < 2) throw std::invalid_argument("dimension_for_exact_sum needs count, dim >= 2");
    return count * dim - count + 1;
}

int ceil_log2(std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("ceil_log2(0)");
    return x == 1 ? 0 : std::bit_width(x - 1);
}

int result_width_for_weighted_sum(int count, int n, int q) {
    if (count < 1 || n < 1 || q < 1) throw std::invalid_argument("weighted-sum widths must be positive");
    return q + n + ceil_log2(static_cast<std::uint64_t>(count));
}

OutcomeDistribution fractional_readout_distribution_mod(const Rational& v, std::uint64_t modulus) {
    if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
    if (v.num() < 0) throw std::invalid_argument("readout value must be non-negative");
    const i128 period = i128(v.den()) * modulus;
    OutcomeDistribution dist;
    dist.register_name = "oracle";
    dist.probabilities.resize(modulus);
    for (std::uint64_t l = 0; l < modulus; ++l) {
        const i128 offset = i128(v.num()) - i128(l) * v.den();
        std::complex<double> acc{0.0, 0.0};
        for (std::uint64_t k = 0; k < modulus; ++k) {
            auto r = pmod(offset * i128(k), period);
            acc += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(period));
        }
        acc /= static_cast<double>(modulus);
        dist.probabilities[l] = std::norm(acc);
    }
    return dist;
}

OutcomeDistribution fractional_readout_distribution(const Rational& v, int result_bits) {
    if (result_bits < 1 || result_bits > 24) throw std::invalid_argument("result width out of range");
    return fractional_readout_distribution_mod(v, std::uint64_t{1} << result_bits);
}

}  // namespace qftarith
