#include <doctest.h>

#include "qftarith/verify.hpp"

using namespace qftarith;

namespace {

ArithmeticSpec make(Operation op, int n) {
    ArithmeticSpec s;
    s.op = op;
    s.n = n;
    return s;
}

}  // namespace

TEST_CASE("exhaustive verification passes") {
    auto add = make(Operation::Adder, 3);
    CHECK(verify(add).ok());
    add.exact = true;
    CHECK(verify(add).ok());
    add.is_signed = true;
    CHECK(verify(add).ok());
    auto signed_mod = make(Operation::Adder, 3);
    signed_mod.is_signed = true;
    CHECK(verify(signed_mod).ok());

    CHECK(verify(make(Operation::Qft, 5)).ok());

    auto cmul = make(Operation::ConstMultiplier, 3);
    cmul.constant = 7;
    CHECK(verify(cmul).ok());

    auto mul = make(Operation::Multiplier, 3);
    const auto report = verify(mul);
    CHECK(report.ok());
    CHECK(report.cases == 64);
    CHECK(report.worst_deficit < 1e-9);
    mul.t = 4;
    CHECK(verify(mul).ok());

    auto wsum = make(Operation::WeightedSum, 2);
    wsum.count = 2;
    wsum.q = 2;
    for (int p = 0; p <= 2; ++p) {
        wsum.p = p;
        CHECK(verify(wsum).ok());
    }

    VerifyOptions no_swaps;
    no_swaps.synth.explicit_swaps = false;
    CHECK(verify(make(Operation::Multiplier, 2), no_swaps).ok());
}

TEST_CASE("a truncated circuit fails verification") {
    VerifyOptions coarse;
    coarse.synth.max_l = 2;
    const auto report = verify(make(Operation::Multiplier, 3), coarse);
    CHECK_FALSE(report.ok());
    CHECK_FALSE(report.failures.empty());
}

TEST_CASE("case cap") {
    CHECK(case_count(make(Operation::Multiplier, 7)) == 16384);
    CHECK_THROWS_AS(verify(make(Operation::Multiplier, 7)), CaseCapExceeded);
    VerifyOptions tight;
    tight.max_cases = 10;
    CHECK_THROWS_AS(verify(make(Operation::Adder, 2), tight), std::length_error);
}

TEST_CASE("input encoding") {
    auto spec = make(Operation::Adder, 3);
    spec.exact = true;
    spec.is_signed = true;
    const auto circuit = synthesize(spec);
    const auto codes = encode_inputs(spec, circuit.layout(), {{"a", -3}, {"b", 2}});
    CHECK(codes.at("a") == 13);
    CHECK(codes.at("b") == 2);
    CHECK(decode_result(spec, circuit.layout(), 15) == -1);
    CHECK_THROWS_AS(encode_inputs(spec, circuit.layout(), {{"a", 4}, {"b", 0}}), std::out_of_range);
    CHECK_THROWS_AS(encode_inputs(spec, circuit.layout(), {{"a", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(encode_inputs(spec, circuit.layout(), {{"a", 0}, {"b", 0}, {"z", 1}}), std::invalid_argument);

    auto plain = make(Operation::Adder, 3);
    plain.exact = true;
    const auto pc = synthesize(plain);
    CHECK_THROWS_AS(encode_inputs(plain, pc.layout(), {{"a", 8}, {"b", 0}}), std::out_of_range);
    CHECK_THROWS_AS(encode_inputs(plain, pc.layout(), {{"a", -1}, {"b", 0}}), std::out_of_range);

    const auto state = simulate(pc, encode_inputs(plain, pc.layout(), {{"a", 7}, {"b", 7}}));
    CHECK(readout(state, "a").probabilities[14] == doctest::Approx(1.0).epsilon(1e-9));
}
