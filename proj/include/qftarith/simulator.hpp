#ifndef QFTARITH_SIMULATOR_HPP
#define QFTARITH_SIMULATOR_HPP

// Dense state-vector execution over mixed-radix sites. The basis index is the
// positional number formed by the site digits with site 0 most significant,
// so dims (2, 3) and digits (1, 2) give index 1*3 + 2 = 5.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qftarith/arith_core.hpp"
#include "qftarith/circuit_ir.hpp"

namespace qftarith {

using Complex = std::complex<double>;

inline constexpr std::uint64_t kMaxAmplitudes = std::uint64_t{1} << 24;

struct SimOptions {
    /// Worker threads for gate kernels. Every amplitude is written by exactly
    /// one worker, so results do not depend on this value.
    unsigned threads = 1;
};

class StateVector {
public:
    /// All-zero basis state.
    explicit StateVector(RegisterLayout layout);

    const RegisterLayout& layout() const { return layout_; }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    Eigen::VectorXcd& amplitudes() { return amps_; }
    std::uint64_t size() const { return static_cast<std::uint64_t>(amps_.size()); }

    int num_sites() const { return layout_.num_sites(); }
    int dim(int site) const { return dims_[static_cast<std::size_t>(site)]; }
    std::uint64_t stride(int site) const { return strides_[static_cast<std::size_t>(site)]; }
    int digit(std::uint64_t index, int site) const {
        return static_cast<int>((index / stride(site)) % static_cast<std::uint64_t>(dim(site)));
    }

    /// Value of a register at a basis index (most significant site first).
    std::uint64_t register_value(std::uint64_t index, const Register& reg) const;
    /// Basis index with every register at the given value.
    std::uint64_t basis_index(const std::map<std::string, std::uint64_t>& values) const;

    double norm() const { return amps_.norm(); }

private:
    RegisterLayout layout_;
    std::vector<int> dims_;
    std::vector<std::uint64_t> strides_;
    Eigen::VectorXcd amps_;
};

/// Point-mass state; registers not mentioned are zero.
StateVector prepare_basis(const RegisterLayout& layout, const std::map<std::string, std::uint64_t>& values);

/// Normalized state with independent Gaussian real and imaginary parts.
StateVector random_state(const RegisterLayout& layout, std::uint64_t seed);

/// Unitary `matrix` (dim x dim) on one site.
void apply_site_unitary(StateVector& state, int site, const Eigen::MatrixXcd& matrix, const SimOptions& opts = {});

/// Diagonal operator on any set of sites: amplitude *= phase(digits of those
/// sites, in the given order).
void apply_diagonal(StateVector& state, std::span<const int> sites,
                    const std::function<Complex(std::span<const int>)>& phase, const SimOptions& opts = {});

/// e^{sign * i2pi / 2^l}; exact for l = 1, 2.
Complex phase_factor(int l, int sign);

void apply(StateVector& state, const Gate& gate, const SimOptions& opts = {});
void run(StateVector& state, const CircuitIR& circuit, const SimOptions& opts = {});

/// Marginal distribution of one register.
OutcomeDistribution readout(const StateVector& state, const Register& reg);
OutcomeDistribution readout(const StateVector& state, std::string_view register_name);

}  // namespace qftarith

#endif  // QFTARITH_SIMULATOR_HPP
