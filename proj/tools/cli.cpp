#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "qftarith/arith_core.hpp"
#include "qftarith/circuit_ir.hpp"
#include "qftarith/qasm_export.hpp"
#include "qftarith/qudit_model.hpp"
#include "qftarith/simulator.hpp"
#include "qftarith/synthesis.hpp"
#include "qftarith/verify.hpp"

namespace qftarith::cli {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SpecFlags {
    std::string op;
    int n = 1;
    bool exact = false;
    bool is_signed = false;
    std::uint64_t constant = 0;
    int count = 1;
    int q = 1;
    int p = 0;
    std::optional<int> t;
    bool no_swaps = false;
    std::optional<int> max_l;
};

void add_spec_flags(CLI::App* sub, SpecFlags& f) {
    sub->add_option("--op", f.op, "Operation")->check(CLI::IsMember({"qft", "add", "cmul", "mul", "wsum"}));
    sub->add_option("--n", f.n, "Operand / value bits");
    sub->add_flag("--exact", f.exact, "Adder: widen the result so the sum never wraps");
    sub->add_flag("--signed", f.is_signed, "Adder: two's-complement operands");
    sub->add_option("--const", f.constant, "Constant for cmul");
    sub->add_option("--N", f.count, "Number of weighted terms");
    sub->add_option("--q", f.q, "Weight bits");
    sub->add_option("--p", f.p, "Weight precision (weights are raw / 2^p)");
    sub->add_option("--t", f.t, "Result bits");
    sub->add_flag("--no-swaps", f.no_swaps, "Omit bit-reversal swaps and reindex instead");
    sub->add_option("--max-l", f.max_l, "Drop rotations R_l with l above this");
}

ArithmeticSpec to_spec(const SpecFlags& f) {
    if (f.op.empty()) throw UsageError("--op is required");
    ArithmeticSpec spec;
    spec.op = parse_operation(f.op);
    spec.n = f.n;
    spec.exact = f.exact;
    spec.is_signed = f.is_signed;
    spec.constant = f.constant;
    spec.count = f.count;
    spec.q = f.q;
    spec.p = f.p;
    spec.t = f.t;
    return resolved(spec);
}

SynthOptions to_synth_options(const SpecFlags& f) {
    SynthOptions o;
    o.explicit_swaps = !f.no_swaps;
    if (f.max_l) {
        if (*f.max_l < 1) throw UsageError("--max-l must be at least 1");
        o.max_l = f.max_l;
    }
    return o;
}

std::string prob(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", p);
    return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) parts.push_back(item);
    return parts;
}

std::int64_t parse_int(const std::string& text) {
    try {
        std::size_t used = 0;
        const auto v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("invalid integer '" + text + "'");
    }
}

LogicalAssignment parse_assignment(const std::string& text) {
    LogicalAssignment out;
    if (text.empty()) return out;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("expected name=value, got '" + item + "'");
        const auto name = item.substr(0, eq);
        if (out.count(name)) throw UsageError("register '" + name + "' assigned twice");
        out[name] = parse_int(item.substr(eq + 1));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CircuitIR load_circuit(const std::string& path) {
    const auto text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 8, "OPENQASM") == 0) return import_for_test(text);
    return circuit_from_json(text);
}

void print_distribution(std::ostream& out, const OutcomeDistribution& dist, bool full,
                        const std::function<std::int64_t(std::uint64_t)>& decode) {
    if (full) {
        for (std::size_t l = 0; l < dist.probabilities.size(); ++l)
            out << decode(l) << " " << prob(dist.probabilities[l]) << "\n";
        return;
    }
    const auto [outcome, p] = dist.peak();
    out << decode(outcome) << " " << prob(p) << "\n";
}

// ---- subcommands ----

int cmd_synth(const SpecFlags& flags, const std::string& format, const std::string& path, std::ostream& out,
              std::ostream& err) {
    const auto spec = to_spec(flags);
    const auto circuit = synthesize(spec, to_synth_options(flags));
    std::string text;
    if (format == "json") {
        text = to_json(circuit);
    } else {
        ExportOptions eo;
        eo.dialect = parse_dialect(format);
        text = export_qasm(circuit, eo);
    }
    std::ostream& info = path.empty() ? err : out;
    if (path.empty()) {
        out << text;
    } else {
        std::ofstream file(path, std::ios::binary);
        if (!file) throw UsageError("cannot write '" + path + "'");
        file << text;
        if (!file) throw std::runtime_error("write to '" + path + "' failed");
    }
    info << "circuit: " << summary(spec) << "\n";
    info << "stats: " << format_stats(stats(circuit)) << "\n";
    return kOk;
}

int cmd_simulate(const SpecFlags& flags, const std::string& circuit_path, const std::string& inputs, bool dist,
                 unsigned threads, std::ostream& out, std::ostream& err) {
    CircuitIR circuit;
    std::optional<ArithmeticSpec> spec;
    if (!circuit_path.empty()) {
        if (!flags.op.empty()) throw UsageError("give either --circuit or --op, not both");
        circuit = load_circuit(circuit_path);
        if (!circuit.metadata().empty()) spec = parse_summary(circuit.metadata());
    } else {
        spec = to_spec(flags);
        circuit = synthesize(*spec, to_synth_options(flags));
    }
    const Register* result = circuit.layout().result();
    if (!result) throw UsageError("circuit has no result register");

    const auto logical = parse_assignment(inputs);
    Assignment codes;
    if (spec) {
        codes = encode_inputs(*spec, circuit.layout(), logical);
    } else {
        for (const auto& r : circuit.layout().registers()) {
            auto it = logical.find(r.name);
            if (it == logical.end()) {
                if (r.role == RegisterRole::Result) continue;
                throw UsageError("missing input for register '" + r.name + "'");
            }
            if (it->second < 0) throw UsageError("negative input for '" + r.name + "'");
            codes[r.name] = static_cast<std::uint64_t>(it->second);
        }
        for (const auto& [name, v] : logical)
            if (!circuit.layout().find(name)) throw UsageError("unknown register '" + name + "'");
    }
    SimOptions so;
    so.threads = threads;
    const auto state = simulate(circuit, codes, so);
    const auto distribution = readout(state, *result);

    if (spec && spec->op == Operation::WeightedSum) {
        const auto expected = expected_readout(*spec, circuit.layout(), codes);
        if (!expected.point)
            err << "note: 2^p does not divide the weighted sum; the result is spread over several outcomes\n";
    }
    const auto& layout = circuit.layout();
    auto decode = [&](std::uint64_t outcome) {
        return spec ? decode_result(*spec, layout, outcome) : static_cast<std::int64_t>(outcome);
    };
    print_distribution(out, distribution, dist, decode);
    return kOk;
}

int cmd_verify(const SpecFlags& flags, std::uint64_t max_cases, unsigned threads, std::ostream& out) {
    VerifyOptions vo;
    vo.max_cases = max_cases;
    vo.synth = to_synth_options(flags);
    vo.sim.threads = threads;
    const auto report = verify(to_spec(flags), vo);
    char deficit[32];
    std::snprintf(deficit, sizeof deficit, "%.3e", report.worst_deficit);
    out << report.label << ": " << report.passed << "/" << report.cases << " " << (report.ok() ? "pass" : "FAIL")
        << " worst_deficit=" << deficit << "\n";
    for (const auto& f : report.failures) out << "  failed " << f << "\n";
    return report.ok() ? kOk : kInternal;
}

int cmd_stats(const SpecFlags& flags, const std::string& circuit_path, std::ostream& out) {
    CircuitIR circuit;
    if (!circuit_path.empty()) {
        if (!flags.op.empty()) throw UsageError("give either --circuit or --op, not both");
        circuit = load_circuit(circuit_path);
    } else {
        circuit = synthesize(to_spec(flags), to_synth_options(flags));
    }
    out << format_stats(stats(circuit)) << "\n";
    return kOk;
}

int cmd_qudit(int d, const std::string& op, const std::string& values_text, const std::string& weights_text,
              bool ancilla, bool dist, std::ostream& out) {
    std::vector<std::int64_t> logical;
    for (const auto& v : split(values_text, ',')) logical.push_back(parse_int(v));
    if (logical.empty()) throw UsageError("--values is required");
    auto unsigned_values = [&] {
        std::vector<std::uint64_t> out_values;
        for (auto v : logical) {
            if (v < 0) throw UsageError("negative values are only accepted by signed-add");
            out_values.push_back(static_cast<std::uint64_t>(v));
        }
        return out_values;
    };
    auto exactly_two = [&] {
        if (logical.size() != 2) throw UsageError(op + " takes exactly two values");
    };
    auto identity = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };

    if (op == "add") {
        exactly_two();
        const auto v = unsigned_values();
        print_distribution(out, readout(qudit_add_state(v[0], v[1], d), "x2"), dist, identity);
    } else if (op == "multi-add") {
        const auto state = qudit_multi_add_state(unsigned_values(), d, ancilla);
        print_distribution(out, readout(state, *state.layout().result()), dist, identity);
    } else if (op == "exact-add") {
        exactly_two();
        const auto v = unsigned_values();
        print_distribution(out, readout(qudit_exact_add_state(v[0], v[1], d), "acc"), dist, identity);
    } else if (op == "mean") {
        print_distribution(out, qudit_mean(unsigned_values(), d), dist, identity);
    } else if (op == "wsum") {
        std::vector<Rational> weights;
        for (const auto& w : split(weights_text, ',')) weights.push_back(Rational::parse(w));
        print_distribution(out, qudit_weighted_sum(unsigned_values(), weights, d), dist, identity);
    } else if (op == "signed-add") {
        exactly_two();
        const auto modulus = static_cast<std::uint64_t>(d);
        qudit_signed_add(logical[0], logical[1], d);   // range and overflow checks
        const auto a = SignedCode::encode(logical[0], modulus);
        const auto b = SignedCode::encode(logical[1], modulus);
        const auto state = qudit_add_state(a.code(), b.code(), d);
        print_distribution(out, readout(state, "x2"), dist,
                           [modulus](std::uint64_t c) { return SignedCode::decode(c, modulus).logical(); });
    } else {
        throw UsageError("unknown qudit op '" + op + "'");
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fourier-domain arithmetic circuits: synthesis, simulation and verification", "qftarith"};
    app.require_subcommand(1);

    SpecFlags synth_flags, sim_flags, verify_flags, stats_flags;
    std::string format = "json", out_path, circuit_path, stats_circuit, inputs;
    bool dist = false, peak = false;
    unsigned sim_threads = 1, verify_threads = 1;
    std::uint64_t max_cases = 4096;

    auto* synth = app.add_subcommand("synth", "Synthesize a circuit and write it as JSON or OpenQASM");
    add_spec_flags(synth, synth_flags);
    synth->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "qasm2", "qasm3"}));
    synth->add_option("--out", out_path, "Output file (default: standard output)");

    auto* sim = app.add_subcommand("simulate", "Simulate a circuit on basis inputs and read the result register");
    add_spec_flags(sim, sim_flags);
    sim->add_option("--circuit", circuit_path, "Circuit file (JSON or exported OpenQASM)");
    sim->add_option("--in", inputs, "Inputs as name=value,name=value");
    auto* dist_flag = sim->add_flag("--dist", dist, "Print the full result distribution");
    sim->add_flag("--peak", peak, "Print the most probable outcome (default)")->excludes(dist_flag);
    sim->add_option("--threads", sim_threads, "Simulation worker threads")->check(CLI::Range(1u, 256u));

    auto* ver = app.add_subcommand("verify", "Exhaustively check a circuit against its classical oracle");
    add_spec_flags(ver, verify_flags);
    ver->add_option("--max-cases", max_cases, "Refuse to run more cases than this");
    ver->add_option("--threads", verify_threads, "Simulation worker threads")->check(CLI::Range(1u, 256u));

    auto* st = app.add_subcommand("stats", "Print gate counts and depth");
    add_spec_flags(st, stats_flags);
    st->add_option("--circuit", stats_circuit, "Circuit file (JSON or exported OpenQASM)");

    int d = 0;
    std::string qudit_op, values, weights;
    bool ancilla = false, qudit_dist = false;
    auto* qd = app.add_subcommand("qudit", "Run a d-dimensional Fourier arithmetic pipeline");
    qd->add_option("--d", d, "Qudit dimension")->required();
    qd->add_option("--op", qudit_op, "Operation")
        ->required()
        ->check(CLI::IsMember({"add", "multi-add", "exact-add", "mean", "wsum", "signed-add"}));
    qd->add_option("--values", values, "Comma-separated input values")->required()->allow_extra_args(false);
    qd->add_option("--weights", weights, "Comma-separated rational weights r/s (wsum)");
    qd->add_flag("--ancilla", ancilla, "multi-add: accumulate into a fresh register");
    qd->add_flag("--dist", qudit_dist, "Print the full result distribution");

    std::vector<std::string> storage{"qftarith"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_flags, format, out_path, out, err);
        if (sim->parsed()) return cmd_simulate(sim_flags, circuit_path, inputs, dist, sim_threads, out, err);
        if (ver->parsed()) return cmd_verify(verify_flags, max_cases, verify_threads, out);
        if (st->parsed()) return cmd_stats(stats_flags, stats_circuit, out);
        if (qd->parsed()) return cmd_qudit(d, qudit_op, values, weights, ancilla, qudit_dist, out);
    } catch (const CaseCapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

}  // namespace qftarith::cli
