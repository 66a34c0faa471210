#include "rcx/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_term(const Term& t) {
    if (!(t.coefficient > 0.0) || !std::isfinite(t.coefficient))
        throw std::invalid_argument("term coefficient must be a positive finite real");
    if (!(t.power >= 0.0) || !std::isfinite(t.power))
        throw std::invalid_argument("term power must be >= 0");
    if (t.log_exponent < 0.0 || !std::isfinite(t.log_exponent))
        throw std::invalid_argument("term log exponent must be >= 0");
    if (t.log_exponent > 0.0 && !(t.log_base > 1.0))
        throw std::invalid_argument("log factor requires a log base > 1");
    if (t.log_base != 0.0 && !(t.log_base > 1.0))
        throw std::invalid_argument("log base must be > 1 when present");
    if (!(t.exp_base >= 1.0) || !std::isfinite(t.exp_base))
        throw std::invalid_argument("exponential base must be >= 1");
    if (t.gamma_exponent < 0.0 || !std::isfinite(t.gamma_exponent))
        throw std::invalid_argument("gamma exponent must be >= 0");
    if (t.gamma_shifted && t.gamma_exponent == 0.0)
        throw std::invalid_argument("shifted gamma flag requires a gamma exponent");
}

// Drops factors with zero exponents to one canonical shape per term.
Term canonical(Term t) {
    if (t.log_exponent == 0.0) t.log_base = 0.0;
    if (t.gamma_exponent == 0.0) t.gamma_shifted = false;
    return t;
}

// Identical factor signature: these terms differ only by coefficient.
bool same_signature(const Term& a, const Term& b) {
    return a.power == b.power && a.log_base == b.log_base && a.log_exponent == b.log_exponent &&
           a.exp_base == b.exp_base && a.gamma_exponent == b.gamma_exponent &&
           a.gamma_shifted == b.gamma_shifted;
}

// Gamma(n+1)^g == n^g * Gamma(n)^g exactly, so the shifted form folds into
// the power component for ordering purposes.
double effective_power(const Term& t) {
    return t.power + (t.gamma_shifted ? t.gamma_exponent : 0.0);
}

} // namespace

Term constant_term(double c) { return Term{c, 0.0, 0.0, 0.0, 1.0, 0.0, false}; }

Term power_term(double c, double p) { return Term{c, p, 0.0, 0.0, 1.0, 0.0, false}; }

int compare_term_order(const Term& a, const Term& b) {
    auto cmp = [](double x, double y) { return x < y ? -1 : (x > y ? 1 : 0); };
    if (int c = cmp(a.gamma_exponent, b.gamma_exponent)) return c;
    if (int c = cmp(a.exp_base, b.exp_base)) return c;
    if (int c = cmp(effective_power(a), effective_power(b))) return c;
    return cmp(a.log_exponent, b.log_exponent);
}

ComplexityFunction::ComplexityFunction(std::vector<Term> terms, std::string variable_name)
    : variable_name_(std::move(variable_name)) {
    if (terms.empty()) throw std::invalid_argument("complexity function needs at least one term");
    if (variable_name_.empty()) throw std::invalid_argument("variable name must be nonempty");
    for (auto& t : terms) {
        validate_term(t);
        t = canonical(t);
    }
    // Decreasing dominance; ties (same growth order, different log base) kept
    // deterministic by log base.
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        if (int c = compare_term_order(a, b)) return c > 0;
        return a.log_base < b.log_base;
    });
    for (const auto& t : terms) {
        if (terms_.empty() || !same_signature(terms_.back(), t)) {
            terms_.push_back(t);
        } else {
            terms_.back().coefficient += t.coefficient;
        }
    }
}

ComplexityFunction::ComplexityFunction(Term term, std::string variable_name)
    : ComplexityFunction(std::vector<Term>{term}, std::move(variable_name)) {}

ComplexityFunction ComplexityFunction::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw std::invalid_argument("scale factor must be a positive finite real");
    std::vector<Term> scaled_terms = terms_;
    for (auto& t : scaled_terms) t.coefficient *= factor;
    return ComplexityFunction(std::move(scaled_terms), variable_name_);
}

namespace {

// ln of one term's value at n; -inf encodes a zero factor.
double log_term_value(const Term& t, double n) {
    double acc = std::log(t.coefficient);
    if (t.power != 0.0) acc += t.power * std::log(n);
    if (t.log_exponent != 0.0) {
        double log_n = std::log(n) / std::log(t.log_base);
        acc += t.log_exponent * std::log(log_n);
    }
    if (t.exp_base != 1.0) acc += n * std::log(t.exp_base);
    if (t.gamma_exponent != 0.0) acc += t.gamma_exponent * std::lgamma(t.gamma_shifted ? n + 1.0 : n);
    return acc;
}

} // namespace

double log_evaluate(const ComplexityFunction& f, double n) {
    if (std::isnan(n) || n < 0.0) throw std::domain_error("evaluation requires n >= 0");
    double max_log = -kInf;
    std::vector<double> logs;
    logs.reserve(f.terms().size());
    for (const auto& t : f.terms()) {
        if (t.log_exponent != 0.0 && n < 1.0)
            throw std::domain_error("log factor requires n >= 1");
        double lv = log_term_value(t, n);
        logs.push_back(lv);
        max_log = std::max(max_log, lv);
    }
    if (max_log == -kInf || max_log == kInf) return max_log;
    // log-sum-exp keeps sums of astronomically large terms representable.
    double rest = 0.0;
    for (double lv : logs) rest += std::exp(lv - max_log);
    return max_log + std::log(rest);
}

double evaluate(const ComplexityFunction& f, double n) {
    double lv = log_evaluate(f, n);
    if (lv == kInf) return kInf;
    return std::exp(lv);
}

RatioLimit asymptotic_ratio_limit(const ComplexityFunction& f, const ComplexityFunction& g) {
    const Term& tf = f.leading_term();
    const Term& tg = g.leading_term();
    int order = compare_term_order(tf, tg);
    if (order < 0) return RatioLimit::zero();
    if (order > 0) return RatioLimit::infinity();
    double ratio = tf.coefficient / tg.coefficient;
    // Equal growth order with distinct log bases differs by a constant:
    // log_l(n) = ln(n) / ln(l).
    if (tf.log_exponent != 0.0 && tf.log_base != tg.log_base)
        ratio *= std::pow(std::log(tg.log_base) / std::log(tf.log_base), tf.log_exponent);
    return RatioLimit::finite(ratio);
}

namespace {

bool relatively_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

} // namespace

Classification classify(const ComplexityFunction& f, const ComplexityFunction& g, double r,
                        double theta_tolerance) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be a positive real");
    RatioLimit limit = asymptotic_ratio_limit(f, g);
    Classification result;
    result.small_o = limit.is_zero();
    result.small_omega = limit.is_infinity();
    if (limit.is_finite()) {
        result.big_theta_r = relatively_close(limit.value, r, theta_tolerance);
        result.big_o_r = limit.value <= r || result.big_theta_r;
        result.big_omega_r = limit.value >= r || result.big_theta_r;
    } else {
        result.big_o_r = limit.is_zero();
        result.big_omega_r = limit.is_infinity();
    }
    return result;
}

bool is_big_kind(RKind kind) {
    return kind == RKind::BigTheta || kind == RKind::BigO || kind == RKind::BigOmega;
}

std::string to_string(RKind kind) {
    switch (kind) {
        case RKind::BigTheta: return "Theta";
        case RKind::BigO: return "O";
        case RKind::BigOmega: return "Omega";
        case RKind::SmallO: return "o";
        case RKind::SmallOmega: return "omega";
    }
    return "?";
}

RClass::RClass(RKind kind, double r, ComplexityFunction base)
    : RClass(kind, r, base, base, r) {
    if (!is_big_kind(kind))
        throw std::invalid_argument("small notations carry no r; use the named constructors");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be a positive real");
}

RClass::RClass(RKind kind, double r, ComplexityFunction base, ComplexityFunction origin_base,
               double origin_r)
    : kind_(kind),
      r_(r),
      base_(std::move(base)),
      origin_base_(std::move(origin_base)),
      origin_r_(origin_r) {}

RClass RClass::small_o(ComplexityFunction base) {
    return RClass(RKind::SmallO, 0.0, base, base, 0.0);
}

RClass RClass::small_omega(ComplexityFunction base) {
    return RClass(RKind::SmallOmega, 0.0, base, base, 0.0);
}

std::optional<double> RClass::r() const {
    if (!is_big_kind(kind_)) return std::nullopt;
    return r_;
}

bool RClass::operator==(const RClass& other) const {
    return kind_ == other.kind_ && r_ == other.r_ && base_ == other.base_;
}

RClass convert(const RClass& cls, double q) {
    if (!is_big_kind(cls.kind_))
        throw std::invalid_argument("conversion is defined for the Big notations only");
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be a positive real");
    // Rescaling from the origin keeps chained conversions exact: returning to
    // the original r multiplies by origin_r/origin_r == 1.0.
    return RClass(cls.kind_, q, cls.origin_base_.scaled(q / cls.origin_r_), cls.origin_base_,
                  cls.origin_r_);
}

RClass normalize(const RClass& cls) { return convert(cls, 1.0); }

ClassicalClass to_classical(const RClass& cls) { return ClassicalClass{cls.kind(), cls.base()}; }

void validate(const ArchitectureProfile& profile) {
    if (!(profile.frequency_hz > 0.0) || !std::isfinite(profile.frequency_hz))
        throw std::invalid_argument("architecture frequency must be a positive real");
}

} // namespace rcx
