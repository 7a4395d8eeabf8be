#include "qftarith/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qftarith/qudit_model.hpp"

namespace qftarith {

namespace {

constexpr std::size_t kMaxReportedFailures = 8;

std::vector<std::string> input_registers(const ArithmeticSpec& spec, const RegisterLayout& layout) {
    std::vector<std::string> names;
    for (const auto& r : layout.registers())
        if (r.role != RegisterRole::Result || spec.op == Operation::Adder || spec.op == Operation::Qft)
            names.push_back(r.name);
    return names;
}

OutcomeDistribution point_distribution(const std::string& name, std::uint64_t capacity, std::uint64_t outcome) {
    OutcomeDistribution d;
    d.register_name = name;
    d.probabilities.assign(capacity, 0.0);
    d.probabilities[outcome] = 1.0;
    return d;
}

std::string describe(const Assignment& inputs) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : inputs) {
        os << (first ? "" : ",") << k << "=" << v;
        first = false;
    }
    return os.str();
}

// Mixed-radix enumeration of every assignment of the input registers.
std::vector<Assignment> enumerate_inputs(const ArithmeticSpec& spec, const RegisterLayout& layout) {
    std::vector<std::pair<std::string, std::uint64_t>> ranges;
    for (const auto& name : input_registers(spec, layout)) {
        const auto& reg = layout.at(name);
        std::uint64_t range = reg.capacity();
        // Exact adders keep the extra leading bit of a at zero.
        if (spec.op == Operation::Adder && name == "a" && spec.exact) range /= 2;
        ranges.emplace_back(name, range);
    }
    std::vector<Assignment> out;
    std::vector<std::uint64_t> counter(ranges.size(), 0);
    while (true) {
        Assignment a;
        for (std::size_t i = 0; i < ranges.size(); ++i) a[ranges[i].first] = counter[i];
        out.push_back(std::move(a));
        std::size_t i = ranges.size();
        while (i > 0) {
            --i;
            if (++counter[i] < ranges[i].second) break;
            counter[i] = 0;
            if (i == 0) return out;
        }
        if (ranges.empty()) return out;
    }
}

// For signed exact adders the enumerated a code is an n-bit pattern; widen it
// to the n + 1 bit register by sign extension.
Assignment widen_signed(const ArithmeticSpec& spec, const RegisterLayout& layout, Assignment a) {
    if (spec.op == Operation::Adder && spec.exact && spec.is_signed) {
        const std::uint64_t narrow = std::uint64_t{1} << spec.n;
        const auto logical = SignedCode::decode(a["a"], narrow).logical();
        a["a"] = SignedCode::encode(logical, layout.at("a").capacity()).code();
    }
    return a;
}

}  // namespace

Assignment encode_inputs(const ArithmeticSpec& spec, const RegisterLayout& layout, const LogicalAssignment& logical) {
    const auto required = input_registers(spec, layout);
    for (const auto& [name, value] : logical) {
        if (std::find(required.begin(), required.end(), name) == required.end())
            throw std::invalid_argument("'" + name + "' is not an input register");
    }
    Assignment codes;
    for (const auto& name : required) {
        auto it = logical.find(name);
        if (it == logical.end()) throw std::invalid_argument("missing input for register '" + name + "'");
        const auto& reg = layout.at(name);
        const std::int64_t v = it->second;
        if (spec.op == Operation::Adder && spec.is_signed) {
            const std::uint64_t operand_modulus = std::uint64_t{1} << spec.n;
            auto [lo, hi] = signed_window(operand_modulus);
            if (v < lo || v > hi)
                throw std::out_of_range("signed input " + name + "=" + std::to_string(v) + " outside [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
            codes[name] = SignedCode::encode(v, reg.capacity()).code();
            continue;
        }
        if (v < 0) throw std::out_of_range("negative input " + name + "=" + std::to_string(v) + " needs --signed");
        std::uint64_t limit = reg.capacity();
        if (spec.op == Operation::Adder && spec.exact && name == "a") limit /= 2;
        if (static_cast<std::uint64_t>(v) >= limit)
            throw std::out_of_range("input " + name + "=" + std::to_string(v) + " must be below " +
                                    std::to_string(limit));
        codes[name] = static_cast<std::uint64_t>(v);
    }
    return codes;
}

std::int64_t decode_result(const ArithmeticSpec& spec, const RegisterLayout& layout, std::uint64_t outcome) {
    if (spec.op == Operation::Adder && spec.is_signed)
        return SignedCode::decode(outcome, layout.result()->capacity()).logical();
    return static_cast<std::int64_t>(outcome);
}

Expectation expected_readout(const ArithmeticSpec& raw, const RegisterLayout& layout, const Assignment& in) {
    const ArithmeticSpec spec = resolved(raw);
    const Register& res = *layout.result();
    const std::uint64_t cap = res.capacity();
    auto point = [&](std::uint64_t v) {
        return Expectation{v % cap, point_distribution(res.name, cap, v % cap)};
    };
    switch (spec.op) {
    case Operation::Qft: {
        Expectation e;
        e.distribution.register_name = res.name;
        e.distribution.probabilities.assign(cap, 1.0 / static_cast<double>(cap));
        return e;
    }
    case Operation::Adder: {
        std::uint64_t b = in.at("b");
        if (spec.exact && spec.is_signed)
            b = SignedCode::encode(SignedCode::decode(b, std::uint64_t{1} << spec.n).logical(), cap).code();
        return point(in.at("a") + b);
    }
    case Operation::ConstMultiplier: return point(in.at("x") * spec.constant);
    case Operation::Multiplier: return point(in.at("a") * in.at("b"));
    case Operation::WeightedSum: {
        std::vector<std::uint64_t> values;
        std::vector<FixedPointWeight> weights;
        for (int m = 1; m <= spec.count; ++m) {
            values.push_back(in.at("x" + std::to_string(m)));
            weights.emplace_back(in.at("a" + std::to_string(m)), spec.q, spec.p);
        }
        const auto oracle = oracle_weighted_sum(values, weights, *spec.t);
        if (oracle.is_exact) return point(oracle.integer_part);
        Expectation e{std::nullopt, fractional_readout_distribution(oracle.value, *spec.t)};
        e.distribution.register_name = res.name;
        return e;
    }
    }
    throw std::invalid_argument("unknown operation");
}

std::uint64_t case_count(const ArithmeticSpec& raw) {
    const ArithmeticSpec spec = resolved(raw);
    auto pow2 = [](long long bits) -> std::uint64_t {
        return bits >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << bits;
    };
    switch (spec.op) {
    case Operation::Qft:
    case Operation::ConstMultiplier: return pow2(spec.n);
    case Operation::Adder:
    case Operation::Multiplier: return pow2(2LL * spec.n);
    case Operation::WeightedSum: return pow2(static_cast<long long>(spec.count) * (spec.n + spec.q));
    }
    return 0;
}

StateVector simulate(const CircuitIR& circuit, const Assignment& inputs, const SimOptions& opts) {
    StateVector state = prepare_basis(circuit.layout(), inputs);
    run(state, circuit, opts);
    return state;
}

VerifyReport verify(const ArithmeticSpec& raw, const VerifyOptions& opts) {
    const ArithmeticSpec spec = resolved(raw);
    VerifyReport report;
    report.label = summary(spec);
    const auto cases = case_count(spec);
    if (cases > opts.max_cases)
        throw CaseCapExceeded(std::to_string(cases) + " cases exceed the cap of " + std::to_string(opts.max_cases) +
                              "; reduce the widths or raise --max-cases");

    const CircuitIR circuit = synthesize(spec, opts.synth);
    const auto& layout = circuit.layout();
    const Register& res = *layout.result();
    Eigen::MatrixXcd fourier;
    if (spec.op == Operation::Qft) fourier = qft_matrix<double>(static_cast<int>(res.capacity()));

    for (const auto& enumerated : enumerate_inputs(spec, layout)) {
        const Assignment inputs = widen_signed(spec, layout, enumerated);
        const StateVector state = simulate(circuit, inputs, opts.sim);
        double deficit = 0.0;
        if (spec.op == Operation::Qft) {
            const auto column = static_cast<Eigen::Index>(inputs.at("x"));
            deficit = (state.amplitudes() - fourier.col(column)).cwiseAbs().maxCoeff();
        } else {
            const auto expected = expected_readout(spec, layout, inputs);
            const auto got = readout(state, res);
            if (expected.point) {
                deficit = 1.0 - got.probabilities[*expected.point];
            } else {
                for (std::size_t l = 0; l < got.probabilities.size(); ++l)
                    deficit = std::max(deficit, std::abs(got.probabilities[l] - expected.distribution.probabilities[l]));
            }
            for (const auto& [name, value] : inputs) {
                if (&layout.at(name) == &res) continue;
                deficit = std::max(deficit, 1.0 - readout(state, name).probabilities[value]);
            }
        }
        ++report.cases;
        report.worst_deficit = std::max(report.worst_deficit, deficit);
        if (deficit <= opts.tolerance) {
            ++report.passed;
        } else if (report.failures.size() < kMaxReportedFailures) {
            report.failures.push_back(describe(inputs) + " deficit=" + std::to_string(deficit));
        }
    }
    return report;
}

}  // namespace qftarith
