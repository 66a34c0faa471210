#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rcx/complexity.hpp"
#include "support/oracles.hpp"

using namespace rcx;

namespace {

ComplexityFunction cubic(double c) { return ComplexityFunction(power_term(c, 3.0)); }

ComplexityFunction queens_cost(double c) {
    // c * n^2 * n!, with n! carried as a shifted gamma factor
    Term t = power_term(c, 2.0);
    t.gamma_exponent = 1.0;
    t.gamma_shifted = true;
    return ComplexityFunction(t);
}

} // namespace

TEST_CASE("term and function construction invariants") {
    CHECK_THROWS_AS(ComplexityFunction(std::vector<Term>{}), std::invalid_argument);
    CHECK_THROWS_AS(ComplexityFunction(constant_term(-1.0)), std::invalid_argument);
    CHECK_THROWS_AS(ComplexityFunction(constant_term(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(ComplexityFunction(power_term(1.0, -2.0)), std::invalid_argument);

    Term log_without_base;
    log_without_base.log_exponent = 1.0;
    CHECK_THROWS_AS(ComplexityFunction(log_without_base), std::invalid_argument);

    // duplicate signatures merge
    ComplexityFunction merged({power_term(1.0, 1.0), power_term(1.0, 1.0)});
    REQUIRE(merged.terms().size() == 1);
    CHECK(merged.terms().front().coefficient == 2.0);

    // stored in strictly decreasing dominance order
    Term exp2 = constant_term(1.0);
    exp2.exp_base = 2.0;
    ComplexityFunction ordered({power_term(1.0, 2.0), exp2, power_term(1.0, 3.0)});
    REQUIRE(ordered.terms().size() == 3);
    CHECK(ordered.leading_term().exp_base == 2.0);
    CHECK(ordered.terms()[1].power == 3.0);
    CHECK(ordered.terms()[2].power == 2.0);
}

TEST_CASE("evaluate matches the paper-scale cubic estimate") {
    double v = evaluate(cubic(5.23e-9), 2.5e7);
    CHECK(std::abs(v - 8.13e13) / 8.13e13 < 0.01);
}

TEST_CASE("evaluate on constants and small powers") {
    ComplexityFunction seven(constant_term(7.0));
    CHECK(evaluate(seven, 1.0) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(evaluate(seven, 123456.0) == doctest::Approx(7.0).epsilon(1e-14));

    // direct arithmetic oracle: 1.2e-8 * 1000^2 = 0.012
    double direct = 1.20e-8 * 1000.0 * 1000.0;
    CHECK(evaluate(ComplexityFunction(power_term(1.20e-8, 2.0)), 1000.0) ==
          doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("evaluate agrees with direct-product evaluation on random functions") {
    std::mt19937_64 rng(7101);
    for (int i = 0; i < 200; ++i) {
        ComplexityFunction f = rcx::test::random_function(rng);
        std::uniform_real_distribution<double> pick_n(2.0, 500.0);
        double n = pick_n(rng);
        double expected = rcx::test::direct_value(f, n);
        CHECK(evaluate(f, n) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("evaluation domain and overflow handling") {
    Term log_term = power_term(1.0, 1.0);
    log_term.log_base = 2.0;
    log_term.log_exponent = 1.0;
    ComplexityFunction f(log_term);
    CHECK_THROWS_AS(evaluate(f, 0.0), std::domain_error);
    CHECK(evaluate(f, 1.0) == 0.0); // log factor vanishes at n = 1

    Term exp_term = constant_term(1.0);
    exp_term.exp_base = 2.0;
    ComplexityFunction g(exp_term);
    CHECK(std::isinf(evaluate(g, 10000.0)));
    CHECK(evaluate(g, 10.0) == doctest::Approx(1024.0).epsilon(1e-12));
}

TEST_CASE("ratio limit on equal-order terms is the coefficient ratio") {
    RatioLimit limit =
        asymptotic_ratio_limit(ComplexityFunction(power_term(2.0, 2.0)),
                               ComplexityFunction(power_term(1.0, 2.0)));
    REQUIRE(limit.is_finite());
    CHECK(limit.value == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("ratio limit for the strassen-vs-cubic pair is zero") {
    ComplexityFunction strassen(power_term(1.59e-7, 2.80));
    RatioLimit limit = asymptotic_ratio_limit(strassen, cubic(5.23e-9));
    CHECK(limit.is_zero());
    CHECK(asymptotic_ratio_limit(cubic(5.23e-9), strassen).is_infinity());
}

TEST_CASE("factorial-bearing terms dominate polynomials") {
    ComplexityFunction f = queens_cost(408.0);
    ComplexityFunction g(power_term(1.0, 2.0));
    CHECK(asymptotic_ratio_limit(f, g).is_infinity());

    // sampling oracle: the ratio grows monotonically
    double r10 = evaluate(f, 10) / evaluate(g, 10);
    double r20 = evaluate(f, 20) / evaluate(g, 20);
    double r30 = evaluate(f, 30) / evaluate(g, 30);
    CHECK(r10 < r20);
    CHECK(r20 < r30);
}

TEST_CASE("shifted gamma equals the usual factorial identity") {
    // Gamma(n+1) == n * Gamma(n)
    Term shifted = constant_term(1.0);
    shifted.gamma_exponent = 1.0;
    shifted.gamma_shifted = true;
    Term unshifted = power_term(1.0, 1.0);
    unshifted.gamma_exponent = 1.0;
    ComplexityFunction f{{shifted}};
    ComplexityFunction g{{unshifted}};
    CHECK(compare_term_order(f.leading_term(), g.leading_term()) == 0);
    RatioLimit limit = asymptotic_ratio_limit(f, g);
    REQUIRE(limit.is_finite());
    CHECK(limit.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(evaluate(f, 12.0) == doctest::Approx(evaluate(g, 12.0)).epsilon(1e-12));
}

TEST_CASE("log bases fold into the finite ratio") {
    Term f_term = constant_term(1.0);
    f_term.log_base = 2.0;
    f_term.log_exponent = 1.0;
    Term g_term = constant_term(1.0);
    g_term.log_base = 4.0;
    g_term.log_exponent = 1.0;
    RatioLimit limit =
        asymptotic_ratio_limit(ComplexityFunction(f_term), ComplexityFunction(g_term));
    REQUIRE(limit.is_finite());
    // log2(n) / log4(n) = ln(4)/ln(2) = 2
    CHECK(limit.value == doctest::Approx(2.0).epsilon(1e-14));
    double sampled = evaluate(ComplexityFunction(f_term), 1e6) /
                     evaluate(ComplexityFunction(g_term), 1e6);
    CHECK(sampled == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("order consistency: zero one way, infinity the other") {
    std::mt19937_64 rng(20260810);
    for (int i = 0; i < 100; ++i) {
        ComplexityFunction f = rcx::test::random_function(rng);
        ComplexityFunction g = rcx::test::random_function(rng);
        RatioLimit fg = asymptotic_ratio_limit(f, g);
        RatioLimit gf = asymptotic_ratio_limit(g, f);
        CHECK(fg.is_zero() == gf.is_infinity());
        CHECK(fg.is_infinity() == gf.is_zero());
        if (fg.is_finite()) {
            REQUIRE(gf.is_finite());
            CHECK(fg.value * gf.value == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("scaling moves straight through finite limits") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int i = 0; i < 100; ++i) {
        ComplexityFunction f = rcx::test::random_function(rng);
        double a = scale(rng);
        RatioLimit base = asymptotic_ratio_limit(f, f);
        RatioLimit scaled = asymptotic_ratio_limit(f.scaled(a), f);
        REQUIRE(base.is_finite());
        REQUIRE(scaled.is_finite());
        CHECK(scaled.value == doctest::Approx(a * base.value).epsilon(1e-12));
    }
}

TEST_CASE("finite limits match sampled ratios with shrinking error") {
    std::mt19937_64 rng(4242);
    int checked = 0;
    while (checked < 25) {
        ComplexityFunction f = rcx::test::random_function(rng);
        ComplexityFunction g = rcx::test::random_function(rng);
        RatioLimit limit = asymptotic_ratio_limit(f, g);
        if (!limit.is_finite()) continue;
        ++checked;
        double e1 = std::abs(evaluate(f, 1024.0) / evaluate(g, 1024.0) - limit.value);
        double e2 = std::abs(evaluate(f, 16384.0) / evaluate(g, 16384.0) - limit.value);
        double e3 = std::abs(evaluate(f, 262144.0) / evaluate(g, 262144.0) - limit.value);
        CHECK(e2 <= e1 * 1.0001);
        CHECK(e3 <= e2 * 1.0001);
    }
}

TEST_CASE("classification of the n-queens cost against its base") {
    Classification c = classify(queens_cost(408.0), queens_cost(1.0), 408.0);
    CHECK(c.big_theta_r);
    CHECK(c.big_o_r);
    CHECK(c.big_omega_r);
    CHECK_FALSE(c.small_o);
    CHECK_FALSE(c.small_omega);
}

TEST_CASE("identical functions sit in all three big classes at r = 1") {
    ComplexityFunction f({power_term(3.0, 2.0), power_term(1.0, 1.0)});
    Classification c = classify(f, f, 1.0);
    CHECK(c.big_theta_r);
    CHECK(c.big_o_r);
    CHECK(c.big_omega_r);
}

TEST_CASE("strictly smaller order yields small-o and big-o only") {
    ComplexityFunction f(power_term(1.0, 2.0));
    ComplexityFunction g(power_term(1.0, 3.0));
    // sampling oracle: ratio decreasing toward zero
    double r2 = evaluate(f, 1e2) / evaluate(g, 1e2);
    double r3 = evaluate(f, 1e3) / evaluate(g, 1e3);
    double r4 = evaluate(f, 1e4) / evaluate(g, 1e4);
    CHECK(r2 > r3);
    CHECK(r3 > r4);
    for (double r : {0.5, 1.0, 2.0}) {
        Classification c = classify(f, g, r);
        CHECK(c.small_o);
        CHECK(c.big_o_r);
        CHECK_FALSE(c.big_theta_r);
        CHECK_FALSE(c.big_omega_r);
        CHECK_FALSE(c.small_omega);
    }
}

TEST_CASE("theta membership is exactly big-o and big-omega together") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> pick_r(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        ComplexityFunction f = rcx::test::random_function(rng);
        // half the time compare within the same order
        ComplexityFunction g = (i % 2 == 0) ? f.scaled(pick_r(rng))
                                            : rcx::test::random_function(rng);
        double r = pick_r(rng);
        Classification c = classify(f, g, r);
        CHECK(c.big_theta_r == (c.big_o_r && c.big_omega_r));
    }
}

TEST_CASE("small-o and small-omega ignore r") {
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 100; ++i) {
        ComplexityFunction f = rcx::test::random_function(rng);
        ComplexityFunction g = rcx::test::random_function(rng);
        Classification a = classify(f, g, 0.5);
        Classification b = classify(f, g, 1.0);
        Classification c = classify(f, g, 2.0);
        CHECK(a.small_o == b.small_o);
        CHECK(b.small_o == c.small_o);
        CHECK(a.small_omega == b.small_omega);
        CHECK(b.small_omega == c.small_omega);
    }
}

TEST_CASE("conversion matches the printed q/r factor") {
    RClass cls(RKind::BigTheta, 4.0, ComplexityFunction(power_term(1.0, 2.0)));
    RClass converted = convert(cls, 1.0);
    REQUIRE(converted.r().has_value());
    CHECK(*converted.r() == 1.0);
    CHECK(converted.base().leading_term().coefficient == 0.25);
    CHECK(converted.base().leading_term().power == 2.0);
}

TEST_CASE("conversion with q equal to r changes nothing") {
    RClass cls(RKind::BigTheta, 2.0, ComplexityFunction(power_term(3.0, 2.0)));
    RClass converted = convert(cls, 2.0);
    CHECK(converted == cls);
}

TEST_CASE("conversion round trips are bit-exact") {
    ComplexityFunction base({power_term(5.23e-9, 3.0), power_term(2.5, 1.0)});
    RClass original(RKind::BigO, 3.0, base);
    RClass there = convert(original, 5.0);
    RClass back = convert(there, 3.0);
    CHECK(back == original);
    REQUIRE(back.base().terms().size() == base.terms().size());
    for (std::size_t i = 0; i < base.terms().size(); ++i)
        CHECK(back.base().terms()[i].coefficient == base.terms()[i].coefficient);

    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> pick(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        double r = std::pow(10.0, pick(rng));
        double q = std::pow(10.0, pick(rng));
        RClass x(RKind::BigTheta, r, base);
        RClass round = convert(convert(x, q), r);
        CHECK(round == x);
    }
}

TEST_CASE("conversion rejects invalid arguments") {
    RClass cls(RKind::BigTheta, 2.0, ComplexityFunction(power_term(1.0, 1.0)));
    CHECK_THROWS_AS(convert(cls, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(convert(cls, -1.0), std::invalid_argument);
    RClass small = RClass::small_o(ComplexityFunction(power_term(1.0, 1.0)));
    CHECK_THROWS_AS(convert(small, 2.0), std::invalid_argument);
    CHECK_FALSE(small.r().has_value());
}

TEST_CASE("normalize returns the r = 1 representative") {
    ComplexityFunction base(power_term(1.0, 2.0));
    RClass cls(RKind::BigTheta, 4.0, base);
    RClass normal = normalize(cls);
    CHECK(*normal.r() == 1.0);
    CHECK(normal == convert(cls, 1.0));

    RClass already(RKind::BigTheta, 1.0, base);
    CHECK(normalize(already) == already);

    // a table-style fit: seconds-domain coefficient times HZ gives the
    // cycle-domain normal form
    double hz = 3.2e9;
    RClass cycles(RKind::BigO, 1.0, ComplexityFunction(power_term(1.109e-8 * hz, 3.0)));
    CHECK(normalize(cycles).base().leading_term().coefficient ==
          doctest::Approx(35.488).epsilon(1e-12));
}

TEST_CASE("classical statements erase r and keep the base") {
    ComplexityFunction base(power_term(1.0, 3.0));
    ClassicalClass stmt = to_classical(RClass(RKind::BigTheta, 2.0, base));
    CHECK(stmt.kind == RKind::BigTheta);
    CHECK(stmt.base == base);

    Term nlog = power_term(1.0, 1.0);
    nlog.log_base = 2.0;
    nlog.log_exponent = 1.0;
    ComplexityFunction nlogn(nlog);
    CHECK(to_classical(RClass(RKind::BigOmega, 7.0, nlogn)).kind == RKind::BigOmega);
    CHECK(to_classical(RClass(RKind::BigO, 1.0, base)).kind == RKind::BigO);
    CHECK(to_classical(RClass(RKind::BigOmega, 7.0, nlogn)).base == nlogn);
}

TEST_CASE("r-membership implies classical membership via the limit") {
    // f in Theta_r(g) means the ratio limit is finite and positive, which is
    // the classical Theta(g) criterion
    std::mt19937_64 rng(616);
    std::uniform_real_distribution<double> pick_r(0.1, 10.0);
    for (int i = 0; i < 50; ++i) {
        ComplexityFunction g = rcx::test::random_function(rng);
        double r = pick_r(rng);
        ComplexityFunction f = g.scaled(r);
        Classification c = classify(f, g, r);
        REQUIRE(c.big_theta_r);
        RatioLimit limit = asymptotic_ratio_limit(f, g);
        CHECK(limit.is_finite());
        CHECK(limit.value > 0.0);
    }
}
