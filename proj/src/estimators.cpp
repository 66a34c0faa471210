#include "rcx/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWeightSumTolerance = 1e-9;

// Adaptive Simpson parameters (cheap and reproducible).
constexpr double kQuadTolerance = 1e-9;
constexpr int kQuadMaxDepth = 60;

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_simpson(const ComplexityFunction& f, double a, double b, double fa, double fm,
                        double fb, double whole, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = evaluate(f, lm);
    double frm = evaluate(f, rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double delta = left + right - whole;
    if (depth >= kQuadMaxDepth ||
        std::abs(delta) <= 15.0 * std::max(kQuadTolerance, kQuadTolerance * std::abs(left + right)))
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, depth + 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, depth + 1);
}

bool pure_power(const Term& t) {
    return t.log_exponent == 0.0 && t.exp_base == 1.0 && t.gamma_exponent == 0.0;
}

} // namespace

double integrate(const ComplexityFunction& f, double a, double b) {
    if (!(a <= b)) throw std::invalid_argument("integration bounds must satisfy a <= b");
    if (a == b) return 0.0;
    double total = 0.0;
    for (const auto& t : f.terms()) {
        if (pure_power(t)) {
            // power >= 0, so the antiderivative is c * n^(p+1) / (p+1).
            double p1 = t.power + 1.0;
            total += t.coefficient * (std::pow(b, p1) - std::pow(a, p1)) / p1;
            continue;
        }
        ComplexityFunction single(t, f.variable_name());
        double fa = evaluate(single, a);
        double fb = evaluate(single, b);
        double fm = evaluate(single, 0.5 * (a + b));
        if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) return kInf;
        total += adaptive_simpson(single, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), 0);
    }
    return total;
}

void validate(const IntervalSpec& interval) {
    if (interval.n_min < 0) throw std::invalid_argument("interval start must be >= 0");
    if (interval.n_min > interval.n_max)
        throw std::invalid_argument("interval requires n_min <= n_max");
}

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::RM1: return "rm1";
        case EstimatorKind::RM2: return "rm2";
        case EstimatorKind::ERM1: return "erm1";
        case EstimatorKind::ERM2: return "erm2";
    }
    return "?";
}

void validate(const WeightSpec& weights) {
    if (weights.weights.empty()) throw std::invalid_argument("weight list must be nonempty");
    double sum = 0.0;
    for (double w : weights.weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
        throw std::invalid_argument("weights must sum to 1");
    if (weights.mode == WeightMode::SubintervalWeights) {
        if (weights.knots.size() != weights.weights.size() + 1)
            throw std::invalid_argument("subinterval mode needs one more knot than weights");
        for (std::size_t i = 1; i < weights.knots.size(); ++i)
            if (weights.knots[i - 1] >= weights.knots[i])
                throw std::invalid_argument("knots must be strictly increasing");
        if (weights.knots.front() < 0) throw std::invalid_argument("knots must be >= 0");
    } else if (!weights.knots.empty()) {
        throw std::invalid_argument("point mode carries no knots");
    }
}

IntervalEstimate rm1(const ComplexityFunction& g1, const IntervalSpec& interval) {
    validate(interval);
    double sum = 0.0;
    bool overflow = false;
    for (std::int64_t n = interval.n_min; n <= interval.n_max; ++n) {
        double v = evaluate(g1, static_cast<double>(n));
        if (!std::isfinite(v)) {
            overflow = true;
            break;
        }
        sum += v;
    }
    double count = static_cast<double>(interval.n_max - interval.n_min + 1);
    double value = overflow ? kInf : sum / count;
    if (!std::isfinite(value)) overflow = true;
    return {overflow ? kInf : value, EstimatorKind::RM1, interval, overflow};
}

IntervalEstimate rm2(const ComplexityFunction& g1, const IntervalSpec& interval) {
    validate(interval);
    if (interval.n_min == interval.n_max)
        throw std::invalid_argument("rm2 requires a nonzero-length interval");
    double integral = integrate(g1, static_cast<double>(interval.n_min),
                                static_cast<double>(interval.n_max));
    double value = integral / static_cast<double>(interval.n_max - interval.n_min);
    bool overflow = !std::isfinite(value);
    return {overflow ? kInf : value, EstimatorKind::RM2, interval, overflow};
}

IntervalEstimate erm1(const ComplexityFunction& g1, const IntervalSpec& interval,
                      const WeightSpec& weights) {
    validate(interval);
    validate(weights);
    if (weights.mode != WeightMode::PointWeights)
        throw std::invalid_argument("erm1 takes point weights");
    std::size_t width = static_cast<std::size_t>(interval.n_max - interval.n_min) + 1;
    if (weights.weights.size() != width)
        throw std::invalid_argument("point weight count must equal the interval width");
    bool uniform = std::all_of(weights.weights.begin(), weights.weights.end(),
                               [&](double w) { return w == weights.weights.front(); });
    if (uniform) {
        // Uniform weights are the arithmetic mean; summing first and dividing
        // once makes the result identical to rm1.
        IntervalEstimate mean = rm1(g1, interval);
        return {mean.value, EstimatorKind::ERM1, interval, mean.overflow};
    }
    double sum = 0.0;
    bool overflow = false;
    for (std::size_t i = 0; i < width; ++i) {
        if (weights.weights[i] == 0.0) continue;
        double v = evaluate(g1, static_cast<double>(interval.n_min + static_cast<std::int64_t>(i)));
        if (!std::isfinite(v)) {
            overflow = true;
            break;
        }
        sum += weights.weights[i] * v;
    }
    if (!std::isfinite(sum)) overflow = true;
    return {overflow ? kInf : sum, EstimatorKind::ERM1, interval, overflow};
}

IntervalEstimate erm2(const ComplexityFunction& g1, const WeightSpec& weights, bool normalized) {
    validate(weights);
    if (weights.mode != WeightMode::SubintervalWeights)
        throw std::invalid_argument("erm2 takes subinterval weights");
    IntervalSpec interval{weights.knots.front(), weights.knots.back()};
    double sum = 0.0;
    bool overflow = false;
    for (std::size_t k = 0; k + 1 < weights.knots.size(); ++k) {
        double a = static_cast<double>(weights.knots[k]);
        double b = static_cast<double>(weights.knots[k + 1]);
        double part = integrate(g1, a, b);
        if (!std::isfinite(part)) {
            overflow = true;
            break;
        }
        if (normalized) part /= b - a;
        sum += weights.weights[k] * part;
    }
    if (!std::isfinite(sum)) overflow = true;
    return {overflow ? kInf : sum, EstimatorKind::ERM2, interval, overflow};
}

std::string to_string(VerdictOutcome outcome) {
    switch (outcome) {
        case VerdictOutcome::FirstFaster: return "first-faster";
        case VerdictOutcome::SecondFaster: return "second-faster";
        case VerdictOutcome::Equivalent: return "equivalent";
    }
    return "?";
}

Verdict compare_estimates(const IntervalEstimate& t1, const IntervalEstimate& t2,
                          double equivalence_tolerance) {
    if (t1.metric != t2.metric)
        throw std::invalid_argument("estimates use different metrics");
    if (t1.interval != t2.interval)
        throw std::invalid_argument("estimates cover different intervals");
    if (t1.overflow || t2.overflow)
        throw std::invalid_argument("overflowed estimates cannot be compared");
    if (!(t2.value > 0.0)) throw std::invalid_argument("second estimate must be positive");
    double ratio = t1.value / t2.value;
    VerdictOutcome outcome;
    if (std::abs(ratio - 1.0) <= equivalence_tolerance)
        outcome = VerdictOutcome::Equivalent;
    else if (ratio < 1.0)
        outcome = VerdictOutcome::FirstFaster;
    else
        outcome = VerdictOutcome::SecondFaster;
    return {ratio, outcome};
}

namespace {

bool single_power_form(const ComplexityFunction& f) {
    return f.terms().size() == 1 && pure_power(f.terms().front());
}

// log f(n) - log g(n) as a function of x = log2(n).
double log_gap(const ComplexityFunction& f, const ComplexityFunction& g, double x) {
    double n = std::exp2(x);
    return log_evaluate(f, n) - log_evaluate(g, n);
}

} // namespace

CrossoverResult crossover(const ComplexityFunction& f, const ComplexityFunction& g) {
    CrossoverResult result;
    if (f.terms() == g.terms()) {
        result.reason = "identical";
        return result;
    }
    if (single_power_form(f) && single_power_form(g)) {
        const Term& tf = f.leading_term();
        const Term& tg = g.leading_term();
        if (tf.power == tg.power) {
            result.reason = "same growth order, different constants";
            return result;
        }
        double n0 = std::pow(tf.coefficient / tg.coefficient, 1.0 / (tg.power - tf.power));
        result.n0 = n0;
        result.exists = true;
        result.bracket = {n0, n0};
        return result;
    }

    // Geometric sampling over n = 2^0 .. 2^64 looking for a sign change.
    constexpr double kMaxExponent = 64.0;
    double prev_x = 0.0;
    double prev_h = log_gap(f, g, 0.0);
    for (int k = 1; k <= 64; ++k) {
        double x = static_cast<double>(k);
        double h = log_gap(f, g, x);
        if (std::isnan(prev_h)) {
            prev_x = x;
            prev_h = h;
            continue;
        }
        if (h == 0.0 || prev_h == 0.0 || (h < 0.0) != (prev_h < 0.0)) {
            double lo = prev_x;
            double hi = x;
            double flo = prev_h;
            for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
                double mid = 0.5 * (lo + hi);
                double fm = log_gap(f, g, mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double x0 = 0.5 * (lo + hi);
            result.n0 = std::exp2(x0);
            result.exists = true;
            result.bracket = {std::exp2(prev_x), std::exp2(x)};
            return result;
        }
        prev_x = x;
        prev_h = h;
    }
    result.bracket = {1.0, std::exp2(kMaxExponent)};
    result.reason = "no sign change up to the search bound of 2^64";
    return result;
}

Extrapolation extrapolate(const ComplexityFunction& model, double n,
                          const ArchitectureProfile* architecture) {
    if (!(n >= 1.0)) throw std::invalid_argument("extrapolation requires n >= 1");
    Extrapolation out;
    double ln_value = log_evaluate(model, n);
    out.log10_value = ln_value / std::log(10.0);
    out.value = std::exp(ln_value);
    out.overflow = !std::isfinite(out.value);
    if (architecture != nullptr) {
        validate(*architecture);
        out.cycles = out.value * architecture->frequency_hz;
        out.log10_cycles = out.log10_value + std::log10(architecture->frequency_hz);
    }
    return out;
}

} // namespace rcx
