#include "qftarith/synthesis.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qftarith/arith_core.hpp"

namespace qftarith {

namespace {

constexpr int kMaxWidth = 62;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

void require_width(int w, const char* what) {
    require(w >= 1 && w <= kMaxWidth, std::string(what) + " must be in [1, 62], got " + std::to_string(w));
}

// Appends the Fourier transform of `reg`. The swap network puts transformed
// bit s (1-based, most significant first) on the register's s-th site.
void emit_qft(CircuitIR& c, const Register& reg, const SynthOptions& opts) {
    const int w = reg.sites;
    for (int j = 0; j < w; ++j) {
        c.append(Gate::fourier(reg.site(j)));
        for (int m = j + 1; m < w; ++m) {
            const int l = m - j + 1;
            if (opts.max_l && l > *opts.max_l) continue;
            c.append(Gate::phase(l, reg.site(j), {reg.site(m)}));
        }
    }
    if (opts.explicit_swaps)
        for (int j = 0; j < w / 2; ++j) c.append(Gate::swap(reg.site(j), reg.site(w - 1 - j)));
}

CircuitIR qft_block(const RegisterLayout& layout, const Register& reg, const SynthOptions& opts) {
    CircuitIR block(layout);
    emit_qft(block, reg, opts);
    return block;
}

// Site holding transformed bit s (1-based) of `reg`.
int transformed_site(const Register& reg, int s, const SynthOptions& opts) {
    return opts.explicit_swaps ? reg.site(s - 1) : reg.site(reg.sites - s);
}

void emit_rotation(CircuitIR& c, int l, int target, std::vector<int> controls, const SynthOptions& opts) {
    if (l < 1) return;   // phase is a whole number of turns
    if (opts.max_l && l > *opts.max_l) return;
    c.append(Gate::phase(l, target, std::move(controls)));
}

// Forward transform on `result`, the diagonal body, then the inverse transform.
CircuitIR sandwich(const RegisterLayout& layout, const Register& result, const CircuitIR& body,
                   const SynthOptions& opts, const ArithmeticSpec& spec) {
    const CircuitIR forward = qft_block(layout, result, opts);
    CircuitIR out = compose(compose(forward, body), inverse(forward));
    out.set_metadata(summary(spec));
    return out;
}

int bits_of(std::uint64_t v) { return static_cast<int>(std::bit_width(v)); }

ArithmeticSpec make_spec(Operation op, int n) {
    ArithmeticSpec spec;
    spec.op = op;
    spec.n = n;
    return spec;
}

}  // namespace

std::string_view to_string(Operation op) {
    switch (op) {
    case Operation::Qft: return "qft";
    case Operation::Adder: return "add";
    case Operation::ConstMultiplier: return "cmul";
    case Operation::Multiplier: return "mul";
    case Operation::WeightedSum: return "wsum";
    }
    return "add";
}

Operation parse_operation(std::string_view text) {
    for (auto op : {Operation::Qft, Operation::Adder, Operation::ConstMultiplier, Operation::Multiplier,
                    Operation::WeightedSum})
        if (to_string(op) == text) return op;
    throw std::invalid_argument("unknown operation '" + std::string(text) + "'");
}

void validate(const ArithmeticSpec& spec) {
    require_width(spec.n, "n");
    const bool adder = spec.op == Operation::Adder;
    require(adder || !spec.exact, "--exact only applies to the adder");
    require(adder || !spec.is_signed, "--signed only applies to the adder");
    if (spec.op == Operation::Adder) require_width(spec.n + 1, "n + 1");
    if (spec.op == Operation::ConstMultiplier) {
        require(bits_of(spec.constant) <= spec.n, "constant " + std::to_string(spec.constant) +
                                                     " does not fit in n = " + std::to_string(spec.n) + " bits");
        require_width(spec.n + bits_of(spec.constant), "n + bits(constant)");
    }
    if (spec.op == Operation::Multiplier) {
        require_width(2 * spec.n, "2n");
        if (spec.t) require_width(*spec.t, "t");
    }
    if (spec.op == Operation::WeightedSum) {
        require(spec.count >= 1, "N must be at least 1");
        require_width(spec.q, "q");
        require(spec.p >= 0 && spec.p <= kMaxWidth, "p must be in [0, 62]");
        if (spec.t) require_width(*spec.t, "t");
        else require_width(result_width_for_weighted_sum(spec.count, spec.n, spec.q), "t");
    }
}

ArithmeticSpec resolved(const ArithmeticSpec& spec) {
    validate(spec);
    ArithmeticSpec out = spec;
    if (out.op == Operation::Multiplier && !out.t) out.t = 2 * out.n;
    if (out.op == Operation::WeightedSum && !out.t) out.t = result_width_for_weighted_sum(out.count, out.n, out.q);
    return out;
}

std::string summary(const ArithmeticSpec& spec) {
    std::ostringstream os;
    os << "op=" << to_string(spec.op) << " n=" << spec.n;
    switch (spec.op) {
    case Operation::Qft: break;
    case Operation::Adder: os << " exact=" << int(spec.exact) << " signed=" << int(spec.is_signed); break;
    case Operation::ConstMultiplier: os << " const=" << spec.constant; break;
    case Operation::Multiplier:
        if (spec.t) os << " t=" << *spec.t;
        break;
    case Operation::WeightedSum:
        os << " N=" << spec.count << " q=" << spec.q << " p=" << spec.p;
        if (spec.t) os << " t=" << *spec.t;
        break;
    }
    return os.str();
}

ArithmeticSpec parse_summary(std::string_view text) {
    ArithmeticSpec spec;
    std::istringstream is{std::string(text)};
    std::string token;
    bool have_op = false;
    while (is >> token) {
        const auto eq = token.find('=');
        require(eq != std::string::npos, "malformed summary token '" + token + "'");
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        try {
            if (key == "op") {
                spec.op = parse_operation(value);
                have_op = true;
            } else if (key == "n") spec.n = std::stoi(value);
            else if (key == "exact") spec.exact = value == "1";
            else if (key == "signed") spec.is_signed = value == "1";
            else if (key == "const") spec.constant = std::stoull(value);
            else if (key == "N") spec.count = std::stoi(value);
            else if (key == "q") spec.q = std::stoi(value);
            else if (key == "p") spec.p = std::stoi(value);
            else if (key == "t") spec.t = std::stoi(value);
            else throw std::invalid_argument("unknown summary key '" + key + "'");
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("summary value out of range in '" + token + "'");
        }
    }
    require(have_op, "summary has no op");
    validate(spec);
    return spec;
}

CircuitIR synth_qft(int width, const SynthOptions& opts) {
    require_width(width, "QFT width");
    RegisterLayout layout;
    layout.add("x", RegisterRole::Result, width);
    CircuitIR c = qft_block(layout, layout.at("x"), opts);
    const ArithmeticSpec spec = make_spec(Operation::Qft, width);
    c.set_metadata(summary(spec));
    return c;
}

CircuitIR synth_adder(int n, bool exact, bool is_signed, const SynthOptions& opts) {
    ArithmeticSpec spec = make_spec(Operation::Adder, n);
    spec.exact = exact;
    spec.is_signed = is_signed;
    spec = resolved(spec);
    RegisterLayout layout;
    layout.add("b", RegisterRole::Operand, n);
    layout.add("a", RegisterRole::Result, exact ? n + 1 : n);
    const auto& b = layout.at("b");
    const auto& a = layout.at("a");

    // b_j k_s / 2^{j+s-n}: the transform width cancels out of the exponent.
    CircuitIR body(layout);
    for (int j = 1; j <= n; ++j)
        for (int s = 1; s <= a.sites; ++s)
            emit_rotation(body, j + s - n, transformed_site(a, s, opts), {b.site(j - 1)}, opts);
    // Sign extension of b into the wider result: -2^n b_1 = 2^n b_1 mod 2^{n+1}.
    if (exact && is_signed) emit_rotation(body, 1, transformed_site(a, n + 1, opts), {b.site(0)}, opts);
    return sandwich(layout, a, body, opts, spec);
}

CircuitIR synth_const_multiplier(int n, std::uint64_t constant, const SynthOptions& opts) {
    ArithmeticSpec spec = make_spec(Operation::ConstMultiplier, n);
    spec.constant = constant;
    spec = resolved(spec);
    const int nb = bits_of(constant);
    RegisterLayout layout;
    layout.add("x", RegisterRole::Operand, n);
    layout.add("r", RegisterRole::Result, n + nb);
    const auto& x = layout.at("x");
    const auto& r = layout.at("r");

    // Bit m of the constant (weight 2^{nb-m}) adds 2^{nb-m} x with x_i as the
    // only control: exponent i + m + s - n - nb.
    CircuitIR body(layout);
    for (int m = 1; m <= nb; ++m) {
        if (((constant >> (nb - m)) & 1U) == 0) continue;
        for (int i = 1; i <= n; ++i)
            for (int s = 1; s <= r.sites; ++s)
                emit_rotation(body, i + m + s - n - nb, transformed_site(r, s, opts), {x.site(i - 1)}, opts);
    }
    return sandwich(layout, r, body, opts, spec);
}

CircuitIR synth_modular_multiplier(int n, int t, const SynthOptions& opts) {
    ArithmeticSpec spec = make_spec(Operation::Multiplier, n);
    spec.t = t;
    spec = resolved(spec);
    RegisterLayout layout;
    layout.add("a", RegisterRole::Operand, n);
    layout.add("b", RegisterRole::Operand, n);
    layout.add("r", RegisterRole::Result, t);
    const auto& a = layout.at("a");
    const auto& b = layout.at("b");
    const auto& r = layout.at("r");

    // Blocks run from the least significant bit of b upward.
    CircuitIR body(layout);
    for (int j = n; j >= 1; --j)
        for (int i = 1; i <= n; ++i)
            for (int s = 1; s <= t; ++s)
                emit_rotation(body, i + j + s - 2 * n, transformed_site(r, s, opts), {b.site(j - 1), a.site(i - 1)},
                              opts);
    return sandwich(layout, r, body, opts, spec);
}

CircuitIR synth_multiplier(int n, const SynthOptions& opts) {
    require_width(n, "n");
    return synth_modular_multiplier(n, 2 * n, opts);
}

CircuitIR synth_weighted_sum(int count, int n, int q, int p, int t, const SynthOptions& opts) {
    ArithmeticSpec spec = make_spec(Operation::WeightedSum, n);
    spec.count = count;
    spec.q = q;
    spec.p = p;
    spec.t = t;
    spec = resolved(spec);
    RegisterLayout layout;
    for (int m = 1; m <= count; ++m) {
        layout.add("a" + std::to_string(m), RegisterRole::Weight, q);
        layout.add("x" + std::to_string(m), RegisterRole::Value, n);
    }
    layout.add("r", RegisterRole::Result, t);
    const auto& r = layout.at("r");

    CircuitIR body(layout);
    for (int m = 1; m <= count; ++m) {
        const auto& w = layout.at("a" + std::to_string(m));
        const auto& x = layout.at("x" + std::to_string(m));
        for (int j = 1; j <= q; ++j)
            for (int i = 1; i <= n; ++i)
                for (int u = 1; u <= t; ++u)
                    emit_rotation(body, i + j + u + p - n - q, transformed_site(r, u, opts),
                                  {w.site(j - 1), x.site(i - 1)}, opts);
    }
    return sandwich(layout, r, body, opts, spec);
}

CircuitIR synthesize(const ArithmeticSpec& raw, const SynthOptions& opts) {
    const ArithmeticSpec spec = resolved(raw);
    switch (spec.op) {
    case Operation::Qft: return synth_qft(spec.n, opts);
    case Operation::Adder: return synth_adder(spec.n, spec.exact, spec.is_signed, opts);
    case Operation::ConstMultiplier: return synth_const_multiplier(spec.n, spec.constant, opts);
    case Operation::Multiplier: return synth_modular_multiplier(spec.n, *spec.t, opts);
    case Operation::WeightedSum: return synth_weighted_sum(spec.count, spec.n, spec.q, spec.p, *spec.t, opts);
    }
    throw std::invalid_argument("unknown operation");
}

}  // namespace qftarith
