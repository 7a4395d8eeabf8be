#include "qftarith/qudit_model.hpp"

#include <map>
#include <string>

#include "qftarith/simulator.hpp"

namespace qftarith {

namespace {

__extension__ typedef __int128 i128;

constexpr double kPointMassTolerance = 1e-9;

void check_dim(int d) {
    if (d < 2) throw std::invalid_argument("qudit dimension must be at least 2");
    if (d > kMaxQuditDim) throw std::length_error("qudit dimension above 256");
}

void check_value(std::uint64_t v, int d) {
    if (v >= static_cast<std::uint64_t>(d))
        throw std::out_of_range("qudit value " + std::to_string(v) + " not below d = " + std::to_string(d));
}

struct Accumulation {
    std::vector<std::uint64_t> values;
    std::vector<Rational> factors;   // CZ^F factor per value; target excluded
    int d = 2;
    int target_dim = 2;
    bool ancilla = true;
};

// Fourier transform on the target, CZ^F from every other input, then the
// inverse transform. Without an ancilla the last input is the target.
StateVector accumulate(const Accumulation& job) {
    check_dim(job.d);
    check_dim(job.target_dim);
    if (job.values.empty()) throw std::invalid_argument("need at least one input value");
    for (auto v : job.values) check_value(v, job.d);

    std::uint64_t amplitudes = static_cast<std::uint64_t>(job.ancilla ? job.target_dim : 1);
    for (std::size_t m = 0; m < job.values.size(); ++m) {
        amplitudes *= static_cast<std::uint64_t>(job.d);
        if (amplitudes > kMaxQuditAmplitudes) throw std::length_error("qudit state above 2^22 amplitudes");
    }

    RegisterLayout layout;
    std::map<std::string, std::uint64_t> assignment;
    const std::size_t n = job.values.size();
    for (std::size_t m = 0; m < n; ++m) {
        const bool is_target = !job.ancilla && m + 1 == n;
        const auto name = "x" + std::to_string(m + 1);
        layout.add(name, is_target ? RegisterRole::Result : RegisterRole::Value, 1, job.d);
        assignment[name] = job.values[m];
    }
    if (job.ancilla) layout.add("acc", RegisterRole::Result, 1, job.target_dim);

    StateVector state = prepare_basis(layout, assignment);
    const int target = layout.num_sites() - 1;
    const std::size_t controls = job.ancilla ? n : n - 1;
    apply(state, QuditGate::fourier(target));
    for (std::size_t m = controls; m-- > 0;)
        apply(state, QuditGate::controlled_phase(static_cast<int>(m), target, job.factors.at(m)));
    apply(state, QuditGate::inverse_fourier(target));
    return state;
}

std::uint64_t point_mass(const OutcomeDistribution& dist) {
    auto [outcome, p] = dist.peak();
    if (p < 1.0 - kPointMassTolerance)
        throw std::logic_error("qudit adder did not produce a basis state (peak probability " +
                               std::to_string(p) + ")");
    return outcome;
}

}  // namespace

double controlled_phase_angle(std::int64_t x, std::int64_t y, int d_target, const Rational& factor) {
    if (factor.num() <= 0) throw std::invalid_argument("controlled-phase factor must be positive");
    // xy / (F d) with F = r/s is xy s / (r d); reduce the numerator mod r d.
    const i128 period = i128(factor.num()) * d_target;
    i128 turns = (i128(x) * y * factor.den()) % period;
    if (turns < 0) turns += period;
    return 2.0 * std::numbers::pi * static_cast<double>(turns) / static_cast<double>(period);
}

Eigen::MatrixXcd adder_pipeline_unitary(int d) {
    check_dim(d);
    if (d * d > 4096) throw std::length_error("adder unitary too large to build densely");
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd qft2 = kron<double>(id, qft_matrix<double>(d));
    const Eigen::MatrixXcd iqft2 = kron<double>(id, iqft_matrix<double>(d));
    const Eigen::MatrixXcd cz = controlled_phase_matrix<double>(d, d, Rational(1));
    return iqft2 * cz * qft2;
}

Eigen::MatrixXcd addition_permutation(int d) {
    check_dim(d);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) p(x * d + (x + y) % d, x * d + y) = 1.0;
    return p;
}

void apply(StateVector& state, const QuditGate& gate) {
    switch (gate.kind) {
    case QuditGate::Kind::Fourier:
        apply_site_unitary(state, gate.target, qft_matrix<double>(state.dim(gate.target)));
        break;
    case QuditGate::Kind::InverseFourier:
        apply_site_unitary(state, gate.target, iqft_matrix<double>(state.dim(gate.target)));
        break;
    case QuditGate::Kind::ControlledPhase: {
        if (gate.control == gate.target) throw std::invalid_argument("controlled phase with control = target");
        const int d_target = state.dim(gate.target);
        const int sites[2] = {gate.control, gate.target};
        const Rational factor = gate.factor;
        apply_diagonal(state, sites, [d_target, factor](std::span<const int> digits) {
            return std::polar(1.0, controlled_phase_angle(digits[0], digits[1], d_target, factor));
        });
        break;
    }
    }
}

StateVector qudit_add_state(std::uint64_t x, std::uint64_t y, int d) {
    return accumulate({{x, y}, {Rational(1)}, d, d, false});
}

ModularInt qudit_add(std::uint64_t x, std::uint64_t y, int d) {
    const auto state = qudit_add_state(x, y, d);
    return ModularInt(point_mass(readout(state, "x2")), static_cast<std::uint64_t>(d));
}

StateVector qudit_multi_add_state(std::span<const std::uint64_t> values, int d, bool ancilla) {
    if (values.empty()) throw std::invalid_argument("qudit_multi_add needs at least one value");
    Accumulation job{{values.begin(), values.end()}, std::vector<Rational>(values.size(), Rational(1)), d, d, ancilla};
    return accumulate(job);
}

ModularInt qudit_multi_add(std::span<const std::uint64_t> values, int d, bool ancilla) {
    const auto state = qudit_multi_add_state(values, d, ancilla);
    return ModularInt(point_mass(readout(state, *state.layout().result())), static_cast<std::uint64_t>(d));
}

StateVector qudit_exact_add_state(std::uint64_t x, std::uint64_t y, int d) {
    check_dim(d);
    const auto wide = static_cast<int>(dimension_for_exact_sum(2, static_cast<std::uint64_t>(d)));
    return accumulate({{x, y}, {Rational(1), Rational(1)}, d, wide, true});
}

std::uint64_t qudit_exact_add(std::uint64_t x, std::uint64_t y, int d) {
    return point_mass(readout(qudit_exact_add_state(x, y, d), "acc"));
}

OutcomeDistribution qudit_mean(std::span<const std::uint64_t> values, int d) {
    if (values.empty()) throw std::invalid_argument("qudit_mean needs at least one value");
    const Rational factor(static_cast<std::int64_t>(values.size()));
    Accumulation job{{values.begin(), values.end()}, std::vector<Rational>(values.size(), factor), d, d, true};
    return readout(accumulate(job), "acc");
}

OutcomeDistribution qudit_weighted_sum(std::span<const std::uint64_t> values, std::span<const Rational> weights,
                                       int d) {
    if (values.empty()) throw std::invalid_argument("qudit_weighted_sum needs at least one value");
    if (values.size() != weights.size()) throw std::invalid_argument("values and weights differ in length");
    Accumulation job{{values.begin(), values.end()}, {}, d, d, true};
    for (const auto& w : weights) {
        if (w.num() <= 0) throw std::invalid_argument("weights must be positive, got " + w.str());
        job.factors.push_back(Rational(1) / w);
    }
    return readout(accumulate(job), "acc");
}

SignedCode qudit_signed_add(std::int64_t x, std::int64_t y, int d) {
    check_dim(d);
    const auto modulus = static_cast<std::uint64_t>(d);
    const auto [lo, hi] = signed_window(modulus);
    if (x + y < lo || x + y > hi)
        throw std::overflow_error("signed sum " + std::to_string(x + y) + " outside [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    const auto a = SignedCode::encode(x, modulus);
    const auto b = SignedCode::encode(y, modulus);
    return SignedCode::decode(qudit_add(a.code(), b.code(), d).value(), modulus);
}

}  // namespace qftarith
