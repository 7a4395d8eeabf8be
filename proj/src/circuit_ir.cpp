#include "qftarith/circuit_ir.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qftarith {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(RegisterRole role) {
    switch (role) {
    case RegisterRole::Operand: return "operand";
    case RegisterRole::Value: return "value";
    case RegisterRole::Weight: return "weight";
    case RegisterRole::Result: return "result";
    }
    return "operand";
}

RegisterRole parse_role(std::string_view text) {
    if (text == "operand") return RegisterRole::Operand;
    if (text == "value") return RegisterRole::Value;
    if (text == "weight") return RegisterRole::Weight;
    if (text == "result") return RegisterRole::Result;
    throw std::invalid_argument("unknown register role '" + std::string(text) + "'");
}

std::uint64_t Register::capacity() const {
    std::uint64_t cap = 1;
    for (int i = 0; i < sites; ++i) {
        if (cap > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(dim))
            throw std::overflow_error("register '" + name + "' too large");
        cap *= static_cast<std::uint64_t>(dim);
    }
    return cap;
}

std::size_t RegisterLayout::add(std::string name, RegisterRole role, int sites, int dim) {
    if (name.empty()) throw std::invalid_argument("register name must not be empty");
    if (find(name)) throw std::invalid_argument("duplicate register '" + name + "'");
    if (sites < 1) throw std::invalid_argument("register '" + name + "' needs at least one site");
    if (dim < 2) throw std::invalid_argument("register '" + name + "' site dimension below 2");
    registers_.push_back(Register{std::move(name), role, num_sites_, sites, dim});
    site_dims_.insert(site_dims_.end(), static_cast<std::size_t>(sites), dim);
    num_sites_ += sites;
    return registers_.size() - 1;
}

const Register* RegisterLayout::find(std::string_view name) const {
    for (const auto& r : registers_)
        if (r.name == name) return &r;
    return nullptr;
}

const Register& RegisterLayout::at(std::string_view name) const {
    if (auto* r = find(name)) return *r;
    throw std::out_of_range("no register named '" + std::string(name) + "'");
}

const Register* RegisterLayout::result() const {
    for (const auto& r : registers_)
        if (r.role == RegisterRole::Result) return &r;
    return nullptr;
}

int RegisterLayout::site_dim(int site) const {
    if (site < 0 || site >= num_sites_) throw std::out_of_range("site " + std::to_string(site) + " out of range");
    return site_dims_[static_cast<std::size_t>(site)];
}

bool RegisterLayout::all_qubits() const {
    return std::all_of(site_dims_.begin(), site_dims_.end(), [](int d) { return d == 2; });
}

std::string_view to_string(GateKind kind) {
    switch (kind) {
    case GateKind::Fourier: return "fourier";
    case GateKind::InverseFourier: return "inverse_fourier";
    case GateKind::PhaseRot: return "phase";
    case GateKind::Swap: return "swap";
    }
    return "fourier";
}

GateKind parse_gate_kind(std::string_view text) {
    if (text == "fourier") return GateKind::Fourier;
    if (text == "inverse_fourier") return GateKind::InverseFourier;
    if (text == "phase") return GateKind::PhaseRot;
    if (text == "swap") return GateKind::Swap;
    throw std::invalid_argument("unknown gate kind '" + std::string(text) + "'");
}

CircuitIR::CircuitIR(RegisterLayout layout, std::string metadata)
    : layout_(std::move(layout)), metadata_(std::move(metadata)) {}

void CircuitIR::validate(const Gate& gate) const {
    auto check_site = [&](int site) {
        if (site < 0 || site >= layout_.num_sites())
            throw std::out_of_range("gate site " + std::to_string(site) + " outside layout of " +
                                    std::to_string(layout_.num_sites()) + " sites");
    };
    check_site(gate.target);
    for (int c : gate.controls) {
        check_site(c);
        if (c == gate.target) throw std::invalid_argument("gate control equals target");
    }
    if (gate.controls.size() == 2 && gate.controls[0] == gate.controls[1])
        throw std::invalid_argument("duplicate gate controls");
    switch (gate.kind) {
    case GateKind::Fourier:
    case GateKind::InverseFourier:
        if (!gate.controls.empty()) throw std::invalid_argument("Fourier gates take no controls");
        break;
    case GateKind::PhaseRot:
        if (gate.l < 1) throw std::invalid_argument("phase rotation needs l >= 1");
        if (gate.sign != 1 && gate.sign != -1) throw std::invalid_argument("phase sign must be +1 or -1");
        if (gate.controls.size() > static_cast<std::size_t>(kMaxControls))
            throw std::invalid_argument("phase rotation with more than two controls");
        if (layout_.site_dim(gate.target) != 2)
            throw std::invalid_argument("phase rotation on a non-qubit site");
        for (int c : gate.controls)
            if (layout_.site_dim(c) != 2) throw std::invalid_argument("phase rotation control on a non-qubit site");
        break;
    case GateKind::Swap:
        if (gate.controls.size() != 1) throw std::invalid_argument("swap needs exactly one partner site");
        if (layout_.site_dim(gate.target) != layout_.site_dim(gate.controls[0]))
            throw std::invalid_argument("swap between sites of different dimension");
        break;
    }
}

CircuitIR& CircuitIR::append(Gate gate) {
    validate(gate);
    gates_.push_back(std::move(gate));
    return *this;
}

CircuitIR& CircuitIR::append(const CircuitIR& other) {
    if (!(other.layout_ == layout_)) throw std::invalid_argument("cannot append circuits over different layouts");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

CircuitIR compose(const CircuitIR& first, const CircuitIR& second) {
    CircuitIR out = first;
    out.append(second);
    return out;
}

CircuitIR inverse(const CircuitIR& circuit) {
    CircuitIR out(circuit.layout(), circuit.metadata());
    const auto& layout = circuit.layout();
    for (auto it = circuit.gates().rbegin(); it != circuit.gates().rend(); ++it) {
        Gate g = *it;
        switch (g.kind) {
        case GateKind::Fourier:
            if (layout.site_dim(g.target) != 2) g.kind = GateKind::InverseFourier;
            break;
        case GateKind::InverseFourier:
            if (layout.site_dim(g.target) != 2) g.kind = GateKind::Fourier;
            break;
        case GateKind::PhaseRot:
            g.sign = -g.sign;
            break;
        case GateKind::Swap:
            break;
        }
        out.append(std::move(g));
    }
    return out;
}

GateStats stats(const CircuitIR& circuit) {
    GateStats s;
    std::vector<std::size_t> layer(static_cast<std::size_t>(circuit.layout().num_sites()), 0);
    for (const auto& g : circuit.gates()) {
        switch (g.kind) {
        case GateKind::Fourier: ++s.fourier; break;
        case GateKind::InverseFourier: ++s.inverse_fourier; break;
        case GateKind::PhaseRot:
            ++s.phase;
            if (g.controls.size() == 2) ++s.two_control;
            s.max_l = std::max(s.max_l, g.l);
            break;
        case GateKind::Swap: ++s.swap; break;
        }
        std::size_t at = layer[static_cast<std::size_t>(g.target)];
        for (int c : g.controls) at = std::max(at, layer[static_cast<std::size_t>(c)]);
        ++at;
        layer[static_cast<std::size_t>(g.target)] = at;
        for (int c : g.controls) layer[static_cast<std::size_t>(c)] = at;
        s.depth = std::max(s.depth, at);
    }
    s.total = circuit.size();
    return s;
}

std::string format_stats(const GateStats& s) {
    std::ostringstream os;
    os << "gates=" << s.total << " fourier=" << s.fourier << " inverse_fourier=" << s.inverse_fourier
       << " phase=" << s.phase << " two_control=" << s.two_control << " swap=" << s.swap
       << " depth=" << s.depth << " max_l=" << s.max_l;
    return os.str();
}

std::string to_json(const CircuitIR& circuit) {
    ordered_json doc;
    doc["layout"] = ordered_json::array();
    for (const auto& r : circuit.layout().registers()) {
        ordered_json entry;
        entry["name"] = r.name;
        entry["role"] = std::string(to_string(r.role));
        entry["sites"] = r.sites;
        entry["dim"] = r.dim;
        doc["layout"].push_back(std::move(entry));
    }
    doc["gates"] = ordered_json::array();
    for (const auto& g : circuit.gates()) {
        ordered_json entry;
        entry["kind"] = std::string(to_string(g.kind));
        entry["l"] = g.l;
        entry["sign"] = g.sign;
        entry["controls"] = g.controls;
        entry["target"] = g.target;
        doc["gates"].push_back(std::move(entry));
    }
    if (!circuit.metadata().empty()) doc["metadata"] = circuit.metadata();
    return doc.dump(1) + "\n";
}

CircuitIR circuit_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("circuit JSON: ") + e.what());
    }
    try {
        RegisterLayout layout;
        for (const auto& entry : doc.at("layout"))
            layout.add(entry.at("name").get<std::string>(), parse_role(entry.at("role").get<std::string>()),
                       entry.at("sites").get<int>(), entry.at("dim").get<int>());
        CircuitIR circuit(std::move(layout));
        if (doc.contains("metadata")) circuit.set_metadata(doc["metadata"].get<std::string>());
        for (const auto& entry : doc.at("gates")) {
            Gate g;
            g.kind = parse_gate_kind(entry.at("kind").get<std::string>());
            g.l = entry.at("l").get<int>();
            g.sign = entry.at("sign").get<int>();
            g.controls = entry.at("controls").get<std::vector<int>>();
            g.target = entry.at("target").get<int>();
            circuit.append(std::move(g));
        }
        return circuit;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("circuit JSON: ") + e.what());
    }
}

}  // namespace qftarith
