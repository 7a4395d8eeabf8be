#ifndef QFTARITH_QUDIT_MODEL_HPP
#define QFTARITH_QUDIT_MODEL_HPP

// Fourier arithmetic on d-dimensional sites, built from dense d x d Fourier
// matrices and diagonal controlled-phase operators with no qubit
// decomposition involved.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qftarith/arith_core.hpp"

namespace qftarith {

class StateVector;

template <class Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kMaxQuditDim = 256;
inline constexpr std::uint64_t kMaxQuditAmplitudes = std::uint64_t{1} << 22;

/// F(k, x) = w^{xk} / sqrt(d) with w = e^{i2pi/d}. The exponent is reduced
/// mod d before it becomes an angle.
template <class Scalar = double>
ComplexMatrix<Scalar> qft_matrix(int d) {
    if (d < 2) throw std::invalid_argument("Fourier matrix needs d >= 2");
    if (d > kMaxQuditDim) throw std::length_error("Fourier matrix dimension above 256");
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(d));
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    ComplexMatrix<Scalar> m(d, d);
    for (int k = 0; k < d; ++k)
        for (int x = 0; x < d; ++x)
            m(k, x) = std::polar(scale, two_pi * static_cast<Scalar>((x * k) % d) / static_cast<Scalar>(d));
    return m;
}

template <class Scalar = double>
ComplexMatrix<Scalar> iqft_matrix(int d) {
    return qft_matrix<Scalar>(d).adjoint();
}

/// Diagonal (d_control * d_target) matrix with e^{i2pi xy / (F d_target)} at
/// |x>|y>; the control is the more significant site.
template <class Scalar = double>
ComplexMatrix<Scalar> controlled_phase_matrix(int d_control, int d_target, const Rational& factor);

/// Angle of CZ^F at digits (x, y), reduced exactly as a fraction of a turn.
double controlled_phase_angle(std::int64_t x, std::int64_t y, int d_target, const Rational& factor);

template <class Scalar>
ComplexMatrix<Scalar> controlled_phase_matrix(int d_control, int d_target, const Rational& factor) {
    ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(d_control * d_target, d_control * d_target);
    for (int x = 0; x < d_control; ++x)
        for (int y = 0; y < d_target; ++y)
            m(x * d_target + y, x * d_target + y) =
                std::polar(Scalar(1), static_cast<Scalar>(controlled_phase_angle(x, y, d_target, factor)));
    return m;
}

/// Kronecker product, first factor more significant.
template <class Scalar = double>
ComplexMatrix<Scalar> kron(const ComplexMatrix<Scalar>& a, const ComplexMatrix<Scalar>& b) {
    ComplexMatrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// max |U^dagger U - I| over all entries.
template <class Derived>
double unitarity_error(const Eigen::MatrixBase<Derived>& u) {
    using Plain = typename Derived::PlainObject;
    const auto n = u.rows();
    return (u.adjoint() * u - Plain::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// The whole two-site adder IQFT_2 . CZ . QFT_2 as a d^2 x d^2 matrix.
Eigen::MatrixXcd adder_pipeline_unitary(int d);
/// Permutation |x>|y> -> |x>|x + y mod d>.
Eigen::MatrixXcd addition_permutation(int d);

/// Gate on qudit sites: Fourier, its inverse, or CZ^F between two sites.
struct QuditGate {
    enum class Kind { Fourier, InverseFourier, ControlledPhase };

    Kind kind = Kind::Fourier;
    int target = 0;
    int control = -1;
    Rational factor{1};

    static QuditGate fourier(int site) { return {Kind::Fourier, site, -1, Rational(1)}; }
    static QuditGate inverse_fourier(int site) { return {Kind::InverseFourier, site, -1, Rational(1)}; }
    static QuditGate controlled_phase(int control, int target, Rational factor = Rational(1)) {
        return {Kind::ControlledPhase, target, control, factor};
    }
};

void apply(StateVector& state, const QuditGate& gate);

/// State after the Fourier adder on |x>|y>; expected to be |x>|x + y mod d>.
StateVector qudit_add_state(std::uint64_t x, std::uint64_t y, int d);
ModularInt qudit_add(std::uint64_t x, std::uint64_t y, int d);

/// State after adding every value into a target: the last value's site, or a
/// fresh zero ancilla when `ancilla` is set. Registers are x1..xN (+ "acc").
StateVector qudit_multi_add_state(std::span<const std::uint64_t> values, int d, bool ancilla);
ModularInt qudit_multi_add(std::span<const std::uint64_t> values, int d, bool ancilla);

/// x + y exactly, accumulated in a (2d - 1)-dimensional ancilla "acc".
StateVector qudit_exact_add_state(std::uint64_t x, std::uint64_t y, int d);
std::uint64_t qudit_exact_add(std::uint64_t x, std::uint64_t y, int d);

/// Readout of the ancilla after CZ^N from every input.
OutcomeDistribution qudit_mean(std::span<const std::uint64_t> values, int d);

/// Readout of the ancilla after CZ^{1/a_m} from each input.
OutcomeDistribution qudit_weighted_sum(std::span<const std::uint64_t> values, std::span<const Rational> weights,
                                       int d);

/// Signed sum through the modular adder on codes d - x for negatives.
SignedCode qudit_signed_add(std::int64_t x, std::int64_t y, int d);

}  // namespace qftarith

#endif  // QFTARITH_QUDIT_MODEL_HPP
