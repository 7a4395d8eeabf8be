#ifndef QFTARITH_CIRCUIT_IR_HPP
#define QFTARITH_CIRCUIT_IR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qftarith {

enum class RegisterRole { Operand, Value, Weight, Result };

std::string_view to_string(RegisterRole role);
RegisterRole parse_role(std::string_view text);

/// A named block of contiguous sites sharing one dimension. Site 0 of a
/// register holds its most significant digit.
struct Register {
    std::string name;
    RegisterRole role = RegisterRole::Operand;
    int first_site = 0;
    int sites = 0;
    int dim = 2;

    /// dim^sites, the number of values the register can hold.
    std::uint64_t capacity() const;
    int site(int position) const { return first_site + position; }

    friend bool operator==(const Register&, const Register&) = default;
};

/// Ordered registers over globally contiguous site indices.
class RegisterLayout {
public:
    RegisterLayout() = default;

    /// Appends a register after the last site; returns its index.
    std::size_t add(std::string name, RegisterRole role, int sites, int dim = 2);

    const std::vector<Register>& registers() const { return registers_; }
    const Register& at(std::string_view name) const;
    const Register* find(std::string_view name) const;
    /// The first register with the Result role, if any.
    const Register* result() const;

    int num_sites() const { return num_sites_; }
    int site_dim(int site) const;
    bool all_qubits() const;

    friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

private:
    std::vector<Register> registers_;
    std::vector<int> site_dims_;
    int num_sites_ = 0;
};

enum class GateKind { Fourier, InverseFourier, PhaseRot, Swap };

std::string_view to_string(GateKind kind);
GateKind parse_gate_kind(std::string_view text);

/// One IR operation.
///
/// PhaseRot(l) multiplies |1> of `target` by e^{sign * i2pi / 2^l} when every
/// control site is |1>; l >= 1 and sign is +1 or -1. Fourier kinds act on the
/// single `target` site (a Hadamard on qubits). Swap exchanges `target` with
/// `controls[0]`, which is its partner site rather than a control.
struct Gate {
    GateKind kind = GateKind::Fourier;
    int target = 0;
    std::vector<int> controls;
    int l = 0;
    int sign = 1;

    static Gate fourier(int site) { return {GateKind::Fourier, site, {}, 0, 1}; }
    static Gate inverse_fourier(int site) { return {GateKind::InverseFourier, site, {}, 0, 1}; }
    static Gate phase(int l, int target, std::vector<int> controls = {}, int sign = 1) {
        return {GateKind::PhaseRot, target, std::move(controls), l, sign};
    }
    static Gate swap(int a, int b) { return {GateKind::Swap, a, {b}, 0, 1}; }

    friend bool operator==(const Gate&, const Gate&) = default;
};

inline constexpr int kMaxControls = 2;

class CircuitIR {
public:
    CircuitIR() = default;
    explicit CircuitIR(RegisterLayout layout, std::string metadata = {});

    const RegisterLayout& layout() const { return layout_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::string& metadata() const { return metadata_; }
    void set_metadata(std::string metadata) { metadata_ = std::move(metadata); }
    std::size_t size() const { return gates_.size(); }

    /// Validates against the layout and appends.
    CircuitIR& append(Gate gate);
    CircuitIR& append(const CircuitIR& other);

    friend bool operator==(const CircuitIR&, const CircuitIR&) = default;

private:
    void validate(const Gate& gate) const;

    RegisterLayout layout_;
    std::vector<Gate> gates_;
    std::string metadata_;
};

CircuitIR compose(const CircuitIR& first, const CircuitIR& second);

/// Reversed gate order with each gate replaced by its adjoint. Fourier gates on
/// qubit sites are self-adjoint and stay as they are.
CircuitIR inverse(const CircuitIR& circuit);

struct GateStats {
    std::size_t fourier = 0;
    std::size_t inverse_fourier = 0;
    std::size_t phase = 0;
    std::size_t swap = 0;
    std::size_t two_control = 0;
    std::size_t total = 0;
    std::size_t depth = 0;
    int max_l = 0;

    friend bool operator==(const GateStats&, const GateStats&) = default;
};

/// Counts and depth; gates on disjoint sites share a layer (greedy ASAP).
GateStats stats(const CircuitIR& circuit);
std::string format_stats(const GateStats& s);

std::string to_json(const CircuitIR& circuit);
CircuitIR circuit_from_json(std::string_view text);

}  // namespace qftarith

#endif  // QFTARITH_CIRCUIT_IR_HPP
