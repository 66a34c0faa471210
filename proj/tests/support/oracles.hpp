#pragma once

// Independent oracles used by the test suites. These stay deliberately
// separate from the library's own evaluation paths: brute-force sums,
// composite trapezoid quadrature, closed-form least squares and log-log
// slope estimation.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rcx/complexity.hpp"

namespace rcx::test {

// Direct (non log-space) evaluation of one term.
inline double direct_term_value(const Term& t, double n) {
    double v = t.coefficient;
    if (t.power != 0.0) v *= std::pow(n, t.power);
    if (t.log_exponent != 0.0)
        v *= std::pow(std::log(n) / std::log(t.log_base), t.log_exponent);
    if (t.exp_base != 1.0) v *= std::pow(t.exp_base, n);
    if (t.gamma_exponent != 0.0)
        v *= std::pow(std::tgamma(t.gamma_shifted ? n + 1.0 : n), t.gamma_exponent);
    return v;
}

inline double direct_value(const ComplexityFunction& f, double n) {
    double total = 0.0;
    for (const auto& t : f.terms()) total += direct_term_value(t, n);
    return total;
}

// Composite trapezoid rule with a fixed panel count.
template <typename F>
double trapezoid_integral(F&& f, double a, double b, std::size_t panels) {
    if (panels == 0) throw std::invalid_argument("trapezoid needs panels");
    double h = (b - a) / static_cast<double>(panels);
    double sum = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i < panels; ++i) sum += f(a + h * static_cast<double>(i));
    return sum * h;
}

// Through-origin ordinary least squares: c = sum(x*y) / sum(x^2).
inline double origin_ols(const std::vector<std::pair<double, double>>& points) {
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : points) {
        sxy += p.first * p.second;
        sxx += p.first * p.first;
    }
    return sxy / sxx;
}

// Slope of ln(value) against ln(n): the empirical growth exponent.
inline double fitted_exponent(const std::vector<std::pair<std::int64_t, double>>& samples) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double m = static_cast<double>(samples.size());
    for (const auto& [n, v] : samples) {
        double x = std::log(static_cast<double>(n));
        double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// Random normal-form function generator for property tests. Exponential and
// gamma factors force small evaluation ranges, so the caller asks which
// family it wants.
struct RandomFunctionOptions {
    int max_terms = 3;
    bool allow_exp = false;
    bool allow_gamma = false;
};

inline ComplexityFunction random_function(std::mt19937_64& rng,
                                          const RandomFunctionOptions& options = {}) {
    std::uniform_int_distribution<int> term_count(1, options.max_terms);
    std::uniform_real_distribution<double> coeff(0.1, 10.0);
    std::uniform_real_distribution<double> power(0.0, 4.0);
    std::uniform_int_distribution<int> log_choice(0, 2);
    std::uniform_int_distribution<int> log_base_choice(0, 2);
    std::uniform_int_distribution<int> rare(0, 3);
    const double log_bases[] = {2.0, 2.718281828459045, 10.0};
    std::vector<Term> terms;
    int count = term_count(rng);
    for (int i = 0; i < count; ++i) {
        Term t;
        t.coefficient = coeff(rng);
        t.power = power(rng);
        int j = log_choice(rng);
        if (j > 0) {
            t.log_exponent = j;
            t.log_base = log_bases[log_base_choice(rng)];
        }
        if (options.allow_exp && rare(rng) == 0) t.exp_base = 2.0;
        if (options.allow_gamma && rare(rng) == 0) {
            t.gamma_exponent = 1.0;
            t.gamma_shifted = rare(rng) == 0;
        }
        terms.push_back(t);
    }
    return ComplexityFunction(std::move(terms));
}

} // namespace rcx::test
