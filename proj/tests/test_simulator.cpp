#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qftarith/simulator.hpp"
#include "qftarith/synthesis.hpp"

using namespace qftarith;

namespace {

RegisterLayout qubits(int n) {
    RegisterLayout layout;
    layout.add("q", RegisterRole::Result, n);
    return layout;
}

int bit(std::uint64_t index, int site, int n) { return static_cast<int>((index >> (n - 1 - site)) & 1u); }

// Dense full-register unitary of a single qubit gate, built independently of the simulator kernels.
Eigen::MatrixXcd dense(const Gate& g, int n) {
    const std::uint64_t dim = std::uint64_t{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const double h = 1.0 / std::sqrt(2.0);
    for (std::uint64_t col = 0; col < dim; ++col) {
        switch (g.kind) {
        case GateKind::Fourier:
        case GateKind::InverseFourier: {
            const std::uint64_t mask = std::uint64_t{1} << (n - 1 - g.target);
            const int b = bit(col, g.target, n);
            u(static_cast<Eigen::Index>(col & ~mask), static_cast<Eigen::Index>(col)) += h;
            u(static_cast<Eigen::Index>(col | mask), static_cast<Eigen::Index>(col)) += b ? -h : h;
            break;
        }
        case GateKind::PhaseRot: {
            bool on = bit(col, g.target, n) == 1;
            for (int c : g.controls) on = on && bit(col, c, n) == 1;
            const double angle = g.sign * 2.0 * std::numbers::pi / std::pow(2.0, g.l);
            u(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) = on ? std::polar(1.0, angle) : 1.0;
            break;
        }
        case GateKind::Swap: {
            const int a = g.target, b = g.controls[0];
            std::uint64_t row = col;
            const std::uint64_t ma = std::uint64_t{1} << (n - 1 - a), mb = std::uint64_t{1} << (n - 1 - b);
            if (bit(col, a, n) != bit(col, b, n)) row ^= ma | mb;
            u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
            break;
        }
        }
    }
    return u;
}

}  // namespace

TEST_CASE("prepare_basis") {
    SUBCASE("qubit registers") {
        RegisterLayout layout;
        layout.add("a", RegisterRole::Operand, 2);
        layout.add("b", RegisterRole::Result, 3);
        const auto s = prepare_basis(layout, {{"a", 2}, {"b", 5}});
        CHECK(s.size() == 32);
        CHECK(std::abs(s.amplitudes()(2 * 8 + 5) - 1.0) < 1e-15);
        CHECK(s.norm() == doctest::Approx(1.0));
        CHECK(s.register_value(21, layout.at("a")) == 2);
        CHECK(s.register_value(21, layout.at("b")) == 5);
    }
    SUBCASE("mixed radix") {
        RegisterLayout layout;
        layout.add("r", RegisterRole::Operand, 1, 2);
        layout.add("s", RegisterRole::Result, 1, 3);
        const auto s = prepare_basis(layout, {{"r", 1}, {"s", 2}});
        CHECK(std::abs(s.amplitudes()(5) - 1.0) < 1e-15);
        CHECK(s.digit(5, 0) == 1);
        CHECK(s.digit(5, 1) == 2);
    }
    SUBCASE("missing registers start at zero") {
        const auto s = prepare_basis(qubits(3), {});
        CHECK(std::abs(s.amplitudes()(0) - 1.0) < 1e-15);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(prepare_basis(qubits(3), {{"q", 8}}), std::out_of_range);
        CHECK_THROWS_AS(prepare_basis(qubits(3), {{"nope", 0}}), std::out_of_range);
        CHECK_THROWS_AS(StateVector(qubits(25)), std::length_error);
    }
}

TEST_CASE("phase factors") {
    CHECK(phase_factor(1, 1) == Complex(-1.0, 0.0));
    CHECK(phase_factor(2, -1) == Complex(0.0, -1.0));
    CHECK(std::abs(phase_factor(3, 1) - std::polar(1.0, std::numbers::pi / 4)) < 1e-15);
    CHECK_THROWS_AS(phase_factor(0, 1), std::invalid_argument);
}

TEST_CASE("gate kernels agree with dense matrices") {
    const int n = 4;
    std::vector<Gate> gates{Gate::fourier(0),          Gate::fourier(3),           Gate::phase(1, 2),
                            Gate::phase(3, 0, {2}),    Gate::phase(2, 3, {0}, -1), Gate::phase(4, 1, {0, 3}),
                            Gate::phase(5, 2, {3, 1}, -1), Gate::swap(0, 3),       Gate::swap(2, 1)};
    for (std::size_t k = 0; k < gates.size(); ++k) {
        auto s = random_state(qubits(n), 11 + k);
        const Eigen::VectorXcd expected = dense(gates[k], n) * s.amplitudes();
        apply(s, gates[k]);
        CHECK((s.amplitudes() - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("norm is preserved gate by gate") {
    for (const auto& c : {synth_adder(3, true), synth_multiplier(2), synth_weighted_sum(2, 2, 2, 1, 5)}) {
        auto s = random_state(c.layout(), 3);
        for (const auto& g : c.gates()) {
            apply(s, g);
            REQUIRE(std::abs(s.norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("double Fourier on a qubit is the identity") {
    auto s = random_state(qubits(3), 5);
    const auto before = s.amplitudes();
    apply(s, Gate::fourier(1));
    apply(s, Gate::fourier(1));
    CHECK((s.amplitudes() - before).cwiseAbs().maxCoeff() < 1e-12);

    RegisterLayout qudit;
    qudit.add("x", RegisterRole::Result, 1, 5);
    auto t = random_state(qudit, 9);
    const auto start = t.amplitudes();
    apply(t, Gate::fourier(0));
    apply(t, Gate::inverse_fourier(0));
    CHECK((t.amplitudes() - start).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("readout") {
    auto s = prepare_basis(qubits(3), {});
    for (int k = 0; k < 3; ++k) apply(s, Gate::fourier(k));
    const auto d = readout(s, "q");
    for (double p : d.probabilities) CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.register_name == "q");
    CHECK_THROWS_AS(readout(s, "missing"), std::out_of_range);
}

TEST_CASE("threaded runs are deterministic") {
    // 17 sites is above the parallel threshold.
    const auto c = synth_adder(8, true);
    auto a = random_state(c.layout(), 42);
    auto b = a;
    auto again = a;
    run(a, c, {1});
    run(b, c, {4});
    run(again, c, {4});
    CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(b.amplitudes() == again.amplitudes());
}
