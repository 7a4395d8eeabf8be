#include "qftarith/qasm_export.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace qftarith {

namespace {

std::string power_of_two_decimal(int exponent) {
    std::string digits = "1";   // little-endian
    for (int i = 0; i < exponent; ++i) {
        int carry = 0;
        for (auto& ch : digits) {
            const int v = (ch - '0') * 2 + carry;
            ch = static_cast<char>('0' + v % 10);
            carry = v / 10;
        }
        if (carry) digits.push_back(static_cast<char>('0' + carry));
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

// Inverse of power_of_two_decimal; nullopt when text is not a power of two.
std::optional<int> decimal_log2(std::string text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    if (text[0] == '0') return std::nullopt;
    int exponent = 0;
    while (text != "1") {
        std::string half;
        int rem = 0;
        for (char c : text) {
            const int v = rem * 10 + (c - '0');
            if (!half.empty() || v / 2 != 0) half.push_back(static_cast<char>('0' + v / 2));
            rem = v % 2;
        }
        if (rem != 0) return std::nullopt;
        text = half;
        ++exponent;
    }
    return exponent;
}

struct SiteName {
    std::string reg;
    int index;
};

class QasmWriter {
public:
    QasmWriter(const CircuitIR& c, const ExportOptions& o) : circuit_(c), opts_(o) {
        for (const auto& r : c.layout().registers())
            for (int i = 0; i < r.sites; ++i) names_.push_back({r.name, i});
    }

    std::string write() {
        const bool v3 = opts_.dialect == QasmDialect::Qasm3;
        out_ << (v3 ? "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n" : "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        if (!opts_.header.empty()) out_ << "// " << opts_.header << "\n";
        if (!circuit_.metadata().empty()) out_ << "// circuit: " << circuit_.metadata() << "\n";
        out_ << "// site order: index 0 of each register is its most significant bit\n";
        for (const auto& r : circuit_.layout().registers())
            out_ << "// register " << r.name << " role=" << to_string(r.role) << "\n";
        for (const auto& r : circuit_.layout().registers()) {
            if (v3) out_ << "qubit[" << r.sites << "] " << r.name << ";\n";
            else out_ << "qreg " << r.name << "[" << r.sites << "];\n";
        }
        for (const auto& g : circuit_.gates()) gate(g);
        return out_.str();
    }

private:
    std::string site(int s) const {
        const auto& n = names_[static_cast<std::size_t>(s)];
        return n.reg + "[" + std::to_string(n.index) + "]";
    }

    void gate(const Gate& g) {
        const bool v3 = opts_.dialect == QasmDialect::Qasm3;
        switch (g.kind) {
        case GateKind::Fourier:
        case GateKind::InverseFourier:
            out_ << "h " << site(g.target) << ";\n";
            return;
        case GateKind::Swap:
            if (opts_.include_swaps) {
                out_ << "swap " << site(g.target) << ", " << site(g.controls[0]) << ";\n";
            } else {
                const auto a = site(g.target), b = site(g.controls[0]);
                out_ << "cx " << a << ", " << b << ";\ncx " << b << ", " << a << ";\ncx " << a << ", " << b << ";\n";
            }
            return;
        case GateKind::PhaseRot: break;
        }
        // theta = sign * 2pi / 2^l = sign * pi / 2^{l-1}
        const auto theta = pi_fraction(g.sign, g.l - 1);
        const auto t = site(g.target);
        if (g.controls.empty()) {
            out_ << (v3 ? "p(" : "u1(") << theta << ") " << t << ";\n";
        } else if (g.controls.size() == 1) {
            out_ << (v3 ? "ctrl @ p(" : "cu1(") << theta << ") " << site(g.controls[0]) << ", " << t << ";\n";
        } else if (v3) {
            out_ << "ctrl(2) @ p(" << theta << ") " << site(g.controls[0]) << ", " << site(g.controls[1]) << ", " << t
                 << ";\n";
        } else {
            const auto half = pi_fraction(g.sign, g.l);
            const auto neg_half = pi_fraction(-g.sign, g.l);
            const auto c1 = site(g.controls[0]), c2 = site(g.controls[1]);
            out_ << "cu1(" << half << ") " << c1 << ", " << t << ";\n";
            out_ << "cx " << c1 << ", " << c2 << ";\n";
            out_ << "cu1(" << neg_half << ") " << c2 << ", " << t << ";\n";
            out_ << "cx " << c1 << ", " << c2 << ";\n";
            out_ << "cu1(" << half << ") " << c2 << ", " << t << ";\n";
        }
    }

    const CircuitIR& circuit_;
    const ExportOptions& opts_;
    std::vector<SiteName> names_;
    std::ostringstream out_;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

struct PendingGate {
    int line;
    std::string name;
    int controls;   // from a ctrl modifier
    std::optional<std::string> angle;
    std::vector<std::pair<std::string, int>> operands;
};

struct ParsedAngle {
    int sign;
    int exponent;   // angle = sign * pi / 2^exponent
};

ParsedAngle parse_angle(const std::string& text, int line) {
    std::string s = trim(text);
    int sign = 1;
    if (starts_with(s, "-")) {
        sign = -1;
        s = trim(s.substr(1));
    }
    if (s == "pi") return {sign, 0};
    if (starts_with(s, "pi/")) {
        if (auto k = decimal_log2(trim(s.substr(3)))) return {sign, *k};
    }
    throw QasmParseError(line, "unsupported angle '" + text + "'");
}

std::pair<std::string, int> parse_operand(const std::string& text, int line) {
    const auto s = trim(text);
    const auto open = s.find('[');
    const auto close = s.find(']');
    if (open == std::string::npos || close != s.size() - 1 || close < open + 2)
        throw QasmParseError(line, "malformed operand '" + s + "'");
    try {
        std::size_t used = 0;
        const auto idx_text = s.substr(open + 1, close - open - 1);
        const int idx = std::stoi(idx_text, &used);
        if (used != idx_text.size() || idx < 0) throw std::invalid_argument(s);
        return {trim(s.substr(0, open)), idx};
    } catch (const std::logic_error&) {
        throw QasmParseError(line, "malformed operand '" + s + "'");
    }
}

PendingGate parse_gate_line(std::string s, int line) {
    PendingGate g{line, {}, 0, std::nullopt, {}};
    if (starts_with(s, "ctrl")) {
        const auto at = s.find('@');
        if (at == std::string::npos) throw QasmParseError(line, "ctrl modifier without '@'");
        const auto mod = trim(s.substr(0, at));
        if (mod == "ctrl") g.controls = 1;
        else if (mod == "ctrl(2)") g.controls = 2;
        else throw QasmParseError(line, "unsupported modifier '" + mod + "'");
        s = trim(s.substr(at + 1));
    }
    std::size_t pos = 0;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    g.name = s.substr(0, pos);
    if (g.name.empty()) throw QasmParseError(line, "expected a gate name");
    std::string rest = s.substr(pos);
    if (starts_with(rest, "(")) {
        const auto close = rest.find(')');
        if (close == std::string::npos) throw QasmParseError(line, "unterminated parameter list");
        g.angle = rest.substr(1, close - 1);
        rest = rest.substr(close + 1);
    }
    std::istringstream ops(rest);
    std::string op;
    while (std::getline(ops, op, ','))
        if (!trim(op).empty()) g.operands.push_back(parse_operand(op, line));
    if (g.operands.empty()) throw QasmParseError(line, "gate '" + g.name + "' without operands");
    return g;
}

}  // namespace

QasmDialect parse_dialect(std::string_view text) {
    if (text == "qasm2") return QasmDialect::Qasm2;
    if (text == "qasm3") return QasmDialect::Qasm3;
    throw std::invalid_argument("unsupported QASM dialect '" + std::string(text) + "'");
}

std::string pi_fraction(int sign, int exponent) {
    if (exponent < 0) throw std::invalid_argument("negative pi exponent");
    std::string out = sign < 0 ? "-pi" : "pi";
    if (exponent > 0) out += "/" + power_of_two_decimal(exponent);
    return out;
}

std::string export_qasm(const CircuitIR& circuit, const ExportOptions& options) {
    if (!circuit.layout().all_qubits()) throw std::invalid_argument("QASM export needs a qubit-only layout");
    return QasmWriter(circuit, options).write();
}

CircuitIR import_for_test(std::string_view text) {
    struct Decl {
        std::string name;
        int sites;
        RegisterRole role;
    };
    std::vector<Decl> decls;
    std::vector<std::pair<std::string, RegisterRole>> roles;
    std::vector<PendingGate> pending;
    std::string metadata;
    bool saw_version = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto s = trim(raw);
        if (s.empty()) continue;
        if (starts_with(s, "//")) {
            const auto body = trim(s.substr(2));
            if (starts_with(body, "circuit: ")) {
                metadata = body.substr(9);
            } else if (starts_with(body, "register ")) {
                std::istringstream is(body.substr(9));
                std::string name, role;
                is >> name >> role;
                if (starts_with(role, "role=")) roles.emplace_back(name, parse_role(role.substr(5)));
            }
            continue;
        }
        if (s.back() != ';') throw QasmParseError(line, "missing ';'");
        const auto stmt = trim(s.substr(0, s.size() - 1));
        if (starts_with(stmt, "OPENQASM")) {
            const auto version = trim(stmt.substr(8));
            if (version != "2.0" && version != "3.0") throw QasmParseError(line, "unsupported version " + version);
            saw_version = true;
            continue;
        }
        if (!saw_version) throw QasmParseError(line, "expected OPENQASM header");
        if (starts_with(stmt, "include")) continue;
        if (starts_with(stmt, "qubit[") || starts_with(stmt, "qreg ")) {
            std::string name;
            std::string size_text;
            if (stmt[0] == 'q' && stmt[1] == 'u') {
                const auto close = stmt.find(']');
                if (close == std::string::npos) throw QasmParseError(line, "malformed qubit declaration");
                size_text = stmt.substr(6, close - 6);
                name = trim(stmt.substr(close + 1));
            } else {
                const auto [reg, size] = parse_operand(stmt.substr(5), line);
                name = reg;
                size_text = std::to_string(size);
            }
            int sites = 0;
            try {
                sites = std::stoi(size_text);
            } catch (const std::logic_error&) {
                throw QasmParseError(line, "malformed register size");
            }
            if (!pending.empty()) throw QasmParseError(line, "register declared after gates");
            if (name.empty() || sites < 1) throw QasmParseError(line, "malformed register declaration");
            decls.push_back({name, sites, RegisterRole::Operand});
            continue;
        }
        pending.push_back(parse_gate_line(stmt, line));
    }
    if (!saw_version) throw QasmParseError(line + 1, "expected OPENQASM header");

    RegisterLayout layout;
    for (auto& d : decls) {
        for (const auto& [name, role] : roles)
            if (name == d.name) d.role = role;
        layout.add(d.name, d.role, d.sites);
    }
    CircuitIR circuit(layout, metadata);

    for (const auto& g : pending) {
        try {
            std::vector<int> sites;
            for (const auto& [reg, idx] : g.operands) {
                const auto* r = layout.find(reg);
                if (!r) throw QasmParseError(g.line, "unknown register '" + reg + "'");
                if (idx >= r->sites) throw QasmParseError(g.line, "index out of range for '" + reg + "'");
                sites.push_back(r->site(idx));
            }
            auto arity = [&](std::size_t n) {
                if (sites.size() != n)
                    throw QasmParseError(g.line, "gate '" + g.name + "' expects " + std::to_string(n) + " operands");
            };
            auto need_angle = [&] {
                if (!g.angle) throw QasmParseError(g.line, "gate '" + g.name + "' needs an angle");
                return parse_angle(*g.angle, g.line);
            };
            if (g.controls > 0 && g.name != "p") throw QasmParseError(g.line, "ctrl modifier only supported on p");
            if (g.name == "h") {
                arity(1);
                circuit.append(Gate::fourier(sites[0]));
            } else if (g.name == "swap") {
                arity(2);
                circuit.append(Gate::swap(sites[0], sites[1]));
            } else if (g.name == "cx") {
                arity(2);
                circuit.append(Gate::fourier(sites[1]));
                circuit.append(Gate::phase(1, sites[1], {sites[0]}));
                circuit.append(Gate::fourier(sites[1]));
            } else if (g.name == "p" || g.name == "u1" || g.name == "cu1") {
                const auto a = need_angle();
                const std::size_t controls = g.name == "cu1" ? 1 : static_cast<std::size_t>(g.controls);
                arity(controls + 1);
                std::vector<int> ctl(sites.begin(), sites.end() - 1);
                circuit.append(Gate::phase(a.exponent + 1, sites.back(), std::move(ctl), a.sign));
            } else {
                throw QasmParseError(g.line, "unsupported gate '" + g.name + "'");
            }
        } catch (const QasmParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw QasmParseError(g.line, e.what());
        }
    }
    return circuit;
}

}  // namespace qftarith
