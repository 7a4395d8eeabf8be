#include <doctest.h>

#include <random>

#include "qftarith/circuit_ir.hpp"
#include "qftarith/simulator.hpp"
#include "qftarith/synthesis.hpp"

using namespace qftarith;

namespace {

RegisterLayout qubits(int n) {
    RegisterLayout layout;
    layout.add("q", RegisterRole::Result, n);
    return layout;
}

CircuitIR random_circuit(int sites, int gates, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CircuitIR c(qubits(sites));
    std::uniform_int_distribution<int> site(0, sites - 1), kind(0, 3), lpick(1, 5);
    while (static_cast<int>(c.size()) < gates) {
        const int t = site(rng);
        switch (kind(rng)) {
        case 0:
            c.append(Gate::fourier(t));
            break;
        case 1: {
            int a = site(rng);
            if (a != t) c.append(Gate::phase(lpick(rng), t, {a}, rng() % 2 ? 1 : -1));
            break;
        }
        case 2: {
            int a = site(rng), b = site(rng);
            if (a != t && b != t && a != b) c.append(Gate::phase(lpick(rng), t, {a, b}));
            break;
        }
        default: {
            int a = site(rng);
            if (a != t) c.append(Gate::swap(t, a));
        }
        }
    }
    return c;
}

}  // namespace

TEST_CASE("register layout") {
    RegisterLayout layout;
    layout.add("a", RegisterRole::Operand, 3);
    layout.add("b", RegisterRole::Result, 2, 5);
    CHECK(layout.num_sites() == 5);
    CHECK(layout.at("b").first_site == 3);
    CHECK(layout.at("b").capacity() == 25);
    CHECK(layout.site_dim(4) == 5);
    CHECK_FALSE(layout.all_qubits());
    CHECK(layout.result()->name == "b");
    CHECK(layout.find("z") == nullptr);
    CHECK_THROWS_AS(layout.at("z"), std::out_of_range);
    CHECK_THROWS_AS(layout.add("a", RegisterRole::Operand, 1), std::invalid_argument);
    CHECK_THROWS_AS(layout.add("c", RegisterRole::Operand, 0), std::invalid_argument);
    CHECK_THROWS_AS(layout.add("c", RegisterRole::Operand, 1, 1), std::invalid_argument);
    CHECK(parse_role(to_string(RegisterRole::Weight)) == RegisterRole::Weight);
}

TEST_CASE("gate validation") {
    CircuitIR c(qubits(3));
    CHECK_THROWS_AS(c.append(Gate::phase(0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::phase(2, 1, {1})), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::phase(2, 1, {0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::phase(2, 3)), std::out_of_range);
    CHECK_THROWS_AS(c.append(Gate::phase(2, 1, {0, 2}, 0)), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate{GateKind::Fourier, 0, {1}, 0, 1}), std::invalid_argument);
    CHECK(c.size() == 0);

    RegisterLayout mixed;
    mixed.add("q", RegisterRole::Operand, 1);
    mixed.add("d", RegisterRole::Result, 1, 3);
    CircuitIR m(mixed);
    CHECK_THROWS_AS(m.append(Gate::phase(1, 1, {0})), std::invalid_argument);
    CHECK_THROWS_AS(m.append(Gate::swap(0, 1)), std::invalid_argument);
    CHECK_NOTHROW(m.append(Gate::fourier(1)));
}

TEST_CASE("inverse") {
    CircuitIR c(qubits(2));
    c.append(Gate::fourier(0)).append(Gate::phase(2, 0, {1}));
    const auto inv = inverse(c);
    REQUIRE(inv.size() == 2);
    CHECK(inv.gates()[0] == Gate::phase(2, 0, {1}, -1));
    CHECK(inv.gates()[1] == Gate::fourier(0));
    CHECK(inverse(inv) == c);

    CircuitIR empty(qubits(2));
    CHECK(inverse(empty).size() == 0);

    RegisterLayout qudit;
    qudit.add("x", RegisterRole::Result, 1, 4);
    CircuitIR f(qudit);
    f.append(Gate::fourier(0));
    CHECK(inverse(f).gates()[0] == Gate::inverse_fourier(0));
}

TEST_CASE("compose matches sequential simulation") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto a = random_circuit(6, 15, seed);
        const auto b = random_circuit(6, 15, seed + 100);
        auto s1 = random_state(a.layout(), seed);
        auto s2 = s1;
        run(s1, compose(a, b));
        run(s2, a);
        run(s2, b);
        CHECK((s1.amplitudes() - s2.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);

        auto s3 = random_state(a.layout(), seed + 7);
        const auto before = s3.amplitudes();
        run(s3, compose(a, inverse(a)));
        CHECK((s3.amplitudes() - before).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(compose(CircuitIR(qubits(2)), CircuitIR(qubits(3))), std::invalid_argument);
}

TEST_CASE("stats") {
    SUBCASE("qft of width 3") {
        const auto s = stats(synth_qft(3));
        CHECK(s.fourier == 3);
        CHECK(s.phase == 3);
        CHECK(s.swap == 1);
        CHECK(s.total == 7);
        CHECK(s.max_l == 3);
    }
    SUBCASE("empty circuit") {
        const auto s = stats(CircuitIR(qubits(2)));
        CHECK(s.total == 0);
        CHECK(s.depth == 0);
    }
    SUBCASE("depth of disjoint gates is one") {
        CircuitIR c(qubits(4));
        c.append(Gate::fourier(0)).append(Gate::fourier(1)).append(Gate::phase(1, 3, {2}));
        CHECK(stats(c).depth == 1);
    }
    SUBCASE("depth of a chain") {
        CircuitIR c(qubits(3));
        c.append(Gate::fourier(0)).append(Gate::phase(2, 1, {0})).append(Gate::phase(2, 2, {1}));
        CHECK(stats(c).depth == 3);
    }
    SUBCASE("depth never exceeds gate count and is monotone under append") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto c = random_circuit(5, 30, seed);
            const auto before = stats(c);
            CHECK(before.depth <= before.total);
            c.append(Gate::fourier(0));
            CHECK(stats(c).depth >= before.depth);
        }
    }
    SUBCASE("format") {
        CHECK(format_stats(stats(synth_qft(2))) ==
              "gates=4 fourier=2 inverse_fourier=0 phase=1 two_control=0 swap=1 depth=4 max_l=2");
    }
}

TEST_CASE("JSON roundtrip") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto c = random_circuit(5, 20, seed);
        c.set_metadata("seed " + std::to_string(seed));
        const auto text = to_json(c);
        const auto back = circuit_from_json(text);
        CHECK(back == c);
        CHECK(to_json(back) == text);
    }
    const auto adder = synth_adder(3, true);
    CHECK(circuit_from_json(to_json(adder)) == adder);

    CHECK_THROWS_AS(circuit_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(circuit_from_json(R"({"layout":[],"gates":[{"kind":"bogus"}]})"), std::invalid_argument);
    CHECK_THROWS_AS(
        circuit_from_json(
            R"({"layout":[{"name":"q","role":"result","sites":1,"dim":2}],"gates":[{"kind":"phase","l":0,"sign":1,"controls":[],"target":0}]})"),
        std::invalid_argument);
}
