#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rcx/complexity.hpp"
#include "rcx/expression.hpp"
#include "support/oracles.hpp"

using namespace rcx;

TEST_CASE("parses a single scaled cubic") {
    ComplexityFunction f = parse_complexity_expression("5.23e-9 * n^3");
    REQUIRE(f.terms().size() == 1);
    CHECK(f.leading_term().coefficient == 5.23e-9);
    CHECK(f.leading_term().power == 3.0);
    CHECK(f.variable_name() == "n");
}

TEST_CASE("parses a bare constant") {
    ComplexityFunction f = parse_complexity_expression("7");
    REQUIRE(f.terms().size() == 1);
    CHECK(f.leading_term().coefficient == 7.0);
    CHECK(f.leading_term().power == 0.0);
    CHECK(evaluate(f, 42.0) == 7.0);
}

TEST_CASE("parses fractional powers") {
    ComplexityFunction f = parse_complexity_expression("1.59e-7 * n^2.80");
    CHECK(f.leading_term().power == 2.80);
}

TEST_CASE("exponential terms dominate polynomial-log terms") {
    ComplexityFunction f = parse_complexity_expression("n^2 * log[2]^1(n) + 2^n");
    REQUIRE(f.terms().size() == 2);
    CHECK(f.leading_term().exp_base == 2.0);
    CHECK(f.terms()[1].log_exponent == 1.0);
    RatioLimit limit = asymptotic_ratio_limit(
        f, parse_complexity_expression("n^2 * log[2](n)"));
    CHECK(limit.is_infinity());
}

TEST_CASE("parses shifted gamma factors") {
    ComplexityFunction f = parse_complexity_expression("408 * n^2 * gamma(n+1)");
    REQUIRE(f.terms().size() == 1);
    CHECK(f.leading_term().coefficient == 408.0);
    CHECK(f.leading_term().power == 2.0);
    CHECK(f.leading_term().gamma_exponent == 1.0);
    CHECK(f.leading_term().gamma_shifted);
}

TEST_CASE("log defaults to base 2 and carries exponents") {
    ComplexityFunction f = parse_complexity_expression("n * log(n)");
    CHECK(f.leading_term().log_base == 2.0);
    CHECK(f.leading_term().log_exponent == 1.0);

    ComplexityFunction g = parse_complexity_expression("log[10]^2(n)");
    CHECK(g.leading_term().log_base == 10.0);
    CHECK(g.leading_term().log_exponent == 2.0);
}

TEST_CASE("alternate variable names are accepted but must be consistent") {
    ComplexityFunction f = parse_complexity_expression("3 * m^2 + m");
    CHECK(f.variable_name() == "m");
    CHECK_THROWS_AS(parse_complexity_expression("n * m"), ExpressionError);
}

TEST_CASE("terms merge and order like direct construction") {
    ComplexityFunction f = parse_complexity_expression("n + n");
    REQUIRE(f.terms().size() == 1);
    CHECK(f.leading_term().coefficient == 2.0);

    ComplexityFunction g = parse_complexity_expression("n^2 + gamma(n) + 3");
    CHECK(g.leading_term().gamma_exponent == 1.0);
    CHECK(g.terms().back().coefficient == 3.0);
}

TEST_CASE("syntax errors report a position") {
    try {
        parse_complexity_expression("n^2 + + n");
        FAIL("expected a parse error");
    } catch (const ExpressionError& e) {
        CHECK(e.position() == 6);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("rejects malformed input") {
    CHECK_THROWS_AS(parse_complexity_expression(""), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("   "), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("n^"), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("2 *"), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("n * n"), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("log[1.0](n)"), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("gamma(n+2)"), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("0 * n"), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("0.5^n"), ExpressionError);
    CHECK_THROWS_AS(parse_complexity_expression("n^2 extra"), ExpressionError);
}

TEST_CASE("negative powers are rejected through term validation") {
    CHECK_THROWS_AS(parse_complexity_expression("n^-1"), ExpressionError);
}

TEST_CASE("render emits the documented grammar") {
    CHECK(render(parse_complexity_expression("5.23e-9 * n^3")) == "5.23e-09 * n^3");
    CHECK(render(parse_complexity_expression("7")) == "7");
    CHECK(render(parse_complexity_expression("n")) == "n");
    CHECK(render(parse_complexity_expression("408 * n^2 * gamma(n+1)")) ==
          "408 * n^2 * gamma(n+1)");
    CHECK(render(parse_complexity_expression("n^2*log[2](n) + 2^n")) ==
          "2^n + n^2 * log[2](n)");
}

TEST_CASE("parse-render round trip is the identity") {
    std::mt19937_64 rng(2024);
    rcx::test::RandomFunctionOptions options;
    options.allow_exp = true;
    options.allow_gamma = true;
    for (int i = 0; i < 200; ++i) {
        ComplexityFunction f = rcx::test::random_function(rng, options);
        ComplexityFunction reparsed = parse_complexity_expression(render(f));
        CHECK(reparsed == f);
    }
}
