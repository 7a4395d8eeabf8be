#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qftarith/qudit_model.hpp"
#include "qftarith/simulator.hpp"

using namespace qftarith;

namespace {

double max_diff(const OutcomeDistribution& a, const OutcomeDistribution& b) {
    REQUIRE(a.probabilities.size() == b.probabilities.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.probabilities.size(); ++i)
        worst = std::max(worst, std::abs(a.probabilities[i] - b.probabilities[i]));
    return worst;
}

}  // namespace

TEST_CASE("d = 2 Fourier matrix is the Hadamard") {
    const auto f = qft_matrix<double>(2);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f(0, 0) - h) < 1e-15);
    CHECK(std::abs(f(0, 1) - h) < 1e-15);
    CHECK(std::abs(f(1, 0) - h) < 1e-15);
    CHECK(std::abs(f(1, 1) + h) < 1e-15);
}

TEST_CASE("Fourier matrices are unitary") {
    for (int d = 2; d <= 64; ++d) CHECK(unitarity_error(qft_matrix<double>(d)) < 1e-12);
    for (int d = 2; d <= 16; ++d) {
        const Eigen::MatrixXcd p = qft_matrix<double>(d) * iqft_matrix<double>(d);
        CHECK((p - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(unitarity_error(qft_matrix<float>(8)) < 1e-5);
    CHECK_THROWS_AS(qft_matrix<double>(1), std::invalid_argument);
    CHECK_THROWS_AS(qft_matrix<double>(257), std::length_error);
}

TEST_CASE("controlled-phase matrix") {
    const auto cz = controlled_phase_matrix<double>(3, 4, Rational(1));
    CHECK(unitarity_error(cz) < 1e-12);
    // Diagonal entry (x, y) carries exp(2 pi i xy / 4).
    CHECK(std::abs(cz(1 * 4 + 1, 1 * 4 + 1) - std::complex<double>(0, 1)) < 1e-15);
    CHECK(std::abs(cz(2 * 4 + 1, 2 * 4 + 1) + 1.0) < 1e-15);
    CHECK(std::abs(cz(0, 1)) == 0.0);
    CHECK(controlled_phase_angle(3, 5, 7, Rational(1)) == doctest::Approx(2 * std::numbers::pi * 1 / 7));
}

TEST_CASE("adder pipeline equals the addition permutation") {
    for (int d = 2; d <= 8; ++d) {
        const auto u = adder_pipeline_unitary(d);
        CHECK((u - addition_permutation(d)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(unitarity_error(u) < 1e-12);
    }
}

TEST_CASE("qudit_add") {
    CHECK(qudit_add(3, 5, 8).value() == 0);
    CHECK(qudit_add(2, 4, 5).value() == 1);
    for (std::uint64_t x = 0; x < 6; ++x) CHECK(qudit_add(x, 0, 6).value() == x);
    for (int d = 2; d <= 9; ++d)
        for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(d); ++x)
            for (std::uint64_t y = 0; y < static_cast<std::uint64_t>(d); ++y)
                CHECK(qudit_add(x, y, d) == oracle_add({x, std::uint64_t(d)}, {y, std::uint64_t(d)}));
    CHECK_THROWS_AS(qudit_add(8, 0, 8), std::out_of_range);
    CHECK_THROWS_AS(qudit_add(0, 0, 1), std::invalid_argument);
}

TEST_CASE("qudit_add leaves the first operand in place") {
    const auto state = qudit_add_state(4, 3, 7);
    const auto x1 = readout(state, "x1");
    CHECK(x1.probabilities[4] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qudit_multi_add") {
    for (std::uint64_t a = 0; a < 5; ++a)
        for (std::uint64_t b = 0; b < 5; ++b)
            for (std::uint64_t c = 0; c < 5; ++c) {
                const std::vector<std::uint64_t> v{a, b, c};
                CHECK(qudit_multi_add(v, 5, false).value() == (a + b + c) % 5);
                CHECK(qudit_multi_add(v, 5, true).value() == (a + b + c) % 5);
            }
    const std::vector<std::uint64_t> zeros(4, 0);
    CHECK(qudit_multi_add(zeros, 3, true).value() == 0);
}

TEST_CASE("qudit_exact_add") {
    CHECK(qudit_exact_add(3, 3, 4) == 6);
    for (int d = 2; d <= 6; ++d)
        for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(d); ++x)
            for (std::uint64_t y = 0; y < static_cast<std::uint64_t>(d); ++y) CHECK(qudit_exact_add(x, y, d) == x + y);

    SUBCASE("three values into a wide accumulator") {
        // 4 + 4 + 5 = 13 is below the exact dimension 3 * 6 - 2 = 16.
        const std::vector<std::uint64_t> v{4, 4, 5};
        CHECK(qudit_multi_add(v, 6, true).value() == (4 + 4 + 5) % 6);
        CHECK(dimension_for_exact_sum(3, 6) > 13);
    }
}

TEST_CASE("qudit_mean") {
    const std::vector<std::uint64_t> same{4, 4, 4};
    const auto d = qudit_mean(same, 7);
    CHECK(d.peak().first == 4);
    CHECK(d.peak().second == doctest::Approx(1.0).epsilon(1e-9));

    SUBCASE("fractional mean follows the kernel") {
        const std::vector<std::uint64_t> v{1, 2};
        const auto got = qudit_mean(v, 8);
        CHECK(max_diff(got, fractional_readout_distribution_mod(Rational(3, 2), 8)) < 1e-9);
        CHECK(got.probabilities[1] == doctest::Approx(0.410533474517).epsilon(1e-10));
        CHECK(got.probabilities[2] == doctest::Approx(0.410533474517).epsilon(1e-10));
    }
    SUBCASE("permutation invariance") {
        std::vector<std::uint64_t> v{1, 5, 3};
        const auto base = qudit_mean(v, 7);
        std::sort(v.begin(), v.end());
        do {
            CHECK(max_diff(qudit_mean(v, 7), base) < 1e-12);
        } while (std::next_permutation(v.begin(), v.end()));
    }
    SUBCASE("all triples at d = 5") {
        for (std::uint64_t a = 0; a < 5; ++a)
            for (std::uint64_t b = 0; b < 5; ++b)
                for (std::uint64_t c = 0; c < 5; ++c) {
                    const std::vector<std::uint64_t> v{a, b, c};
                    const auto oracle = oracle_mean(v, 5);
                    const auto got = qudit_mean(v, 5);
                    if (oracle.is_exact)
                        CHECK(got.probabilities[oracle.integer_part] == doctest::Approx(1.0).epsilon(1e-9));
                    else
                        CHECK(max_diff(got, fractional_readout_distribution_mod(oracle.value, 5)) < 1e-9);
                }
    }
}

TEST_CASE("qudit_weighted_sum") {
    const std::vector<std::uint64_t> v{2, 4};
    const std::vector<Rational> halves{Rational(1, 2), Rational(1, 2)};
    const auto d = qudit_weighted_sum(v, halves, 8);
    CHECK(d.peak().first == 3);
    CHECK(d.peak().second == doctest::Approx(1.0).epsilon(1e-9));

    SUBCASE("integer weights equal repeated addition") {
        for (std::uint64_t a = 0; a < 6; ++a)
            for (std::uint64_t b = 0; b < 6; ++b) {
                const std::vector<std::uint64_t> vals{a, b};
                const std::vector<Rational> w{Rational(2), Rational(3)};
                const auto got = qudit_weighted_sum(vals, w, 6);
                const auto expected = (2 * a + 3 * b) % 6;
                CHECK(got.probabilities[expected] == doctest::Approx(1.0).epsilon(1e-9));
            }
    }
    SUBCASE("fractional result follows the kernel") {
        const std::vector<std::uint64_t> vals{1, 2};
        const std::vector<Rational> w{Rational(1, 3), Rational(1, 2)};
        const auto got = qudit_weighted_sum(vals, w, 7);
        CHECK(max_diff(got, fractional_readout_distribution_mod(Rational(4, 3), 7)) < 1e-9);
    }
    const std::vector<Rational> bad{Rational(0), Rational(1)};
    CHECK_THROWS_AS(qudit_weighted_sum(v, bad, 8), std::invalid_argument);
}

TEST_CASE("qudit_signed_add") {
    const auto r = qudit_signed_add(-3, 3, 16);
    CHECK(r.logical() == 0);
    const auto s = qudit_signed_add(-2, -1, 16);
    CHECK(s.logical() == -3);
    CHECK(s.code() == 13);
    CHECK(qudit_signed_add(5, -7, 16).logical() == -2);
    CHECK_THROWS_AS(qudit_signed_add(7, 1, 16), std::overflow_error);
    CHECK_THROWS_AS(qudit_signed_add(8, -1, 16), std::out_of_range);
}

TEST_CASE("qudit gates on a mixed-radix state") {
    RegisterLayout layout;
    layout.add("c", RegisterRole::Operand, 1, 3);
    layout.add("t", RegisterRole::Result, 1, 5);
    auto state = prepare_basis(layout, {{"c", 2}, {"t", 1}});
    apply(state, QuditGate::fourier(1));
    apply(state, QuditGate::controlled_phase(0, 1));
    apply(state, QuditGate::inverse_fourier(1));
    CHECK(readout(state, "t").probabilities[3] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(apply(state, QuditGate::controlled_phase(1, 1)), std::invalid_argument);
}
