#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Constant-aware complexity calculus: complexity functions in normal form
// (sums of c * n^p * log_l(n)^j * b^n * Gamma(n)^g terms), asymptotic
// ordering, r-class membership, and r <-> q conversions.

namespace rcx {

// One factor product of the normal form. A term with power == 0,
// log_exponent == 0, gamma_exponent == 0 and exp_base == 1 is a constant.
struct Term {
    double coefficient = 1.0;    // metric units per evaluation, > 0
    double power = 0.0;          // exponent of n, >= 0
    double log_base = 0.0;       // 0 means no log factor; otherwise > 1
    double log_exponent = 0.0;   // >= 0; > 0 requires log_base
    double exp_base = 1.0;       // 1 means no exponential factor; otherwise > 1
    double gamma_exponent = 0.0; // >= 0
    bool gamma_shifted = false;  // evaluate Gamma(n+1) instead of Gamma(n)

    bool operator==(const Term&) const = default;
};

Term constant_term(double c);
Term power_term(double c, double p);

// Sum of terms kept in strictly decreasing dominance order. Construction
// validates every term, merges duplicates of the same factor signature and
// rejects empty sums.
class ComplexityFunction {
  public:
    explicit ComplexityFunction(std::vector<Term> terms, std::string variable_name = "n");
    explicit ComplexityFunction(Term term, std::string variable_name = "n");

    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading_term() const { return terms_.front(); }
    const std::string& variable_name() const { return variable_name_; }

    // New function with every coefficient multiplied by factor (> 0).
    ComplexityFunction scaled(double factor) const;

    bool operator==(const ComplexityFunction&) const = default;

  private:
    std::vector<Term> terms_;
    std::string variable_name_;
};

// Natural log of f(n). Returns -inf when the value is zero (pure log factors
// at n = 1) and +inf past the representable range. Throws std::domain_error
// for n < 1 when a log factor is present, and for n < 0.
double log_evaluate(const ComplexityFunction& f, double n);

// f(n) computed in log space and exponentiated at the end; +inf on overflow.
double evaluate(const ComplexityFunction& f, double n);

// lim f(n)/g(n) for the normal-form family, decided on leading terms.
struct RatioLimit {
    enum class Kind { Zero, Finite, Infinity };
    Kind kind = Kind::Finite;
    double value = 0.0; // meaningful only when Finite

    static RatioLimit zero() { return {Kind::Zero, 0.0}; }
    static RatioLimit finite(double v) { return {Kind::Finite, v}; }
    static RatioLimit infinity() { return {Kind::Infinity, 0.0}; }

    bool is_zero() const { return kind == Kind::Zero; }
    bool is_finite() const { return kind == Kind::Finite; }
    bool is_infinity() const { return kind == Kind::Infinity; }
};

RatioLimit asymptotic_ratio_limit(const ComplexityFunction& f, const ComplexityFunction& g);

// Dominance comparison of two terms: negative when a grows strictly slower
// than b, zero when they share the same growth order.
int compare_term_order(const Term& a, const Term& b);

// Membership of f relative to g at ratio r.
struct Classification {
    bool big_theta_r = false;
    bool big_o_r = false;
    bool big_omega_r = false;
    bool small_o = false;
    bool small_omega = false;
};

Classification classify(const ComplexityFunction& f, const ComplexityFunction& g, double r,
                        double theta_tolerance = 1e-12);

enum class RKind { BigTheta, BigO, BigOmega, SmallO, SmallOmega };

bool is_big_kind(RKind kind);
std::string to_string(RKind kind);

// An r-annotated class statement. The small notations carry no r. Conversions
// rescale from the statement's original representative, so converting back to
// the original r restores the base coefficients bit-exactly.
class RClass {
  public:
    RClass(RKind kind, double r, ComplexityFunction base);
    static RClass small_o(ComplexityFunction base);
    static RClass small_omega(ComplexityFunction base);

    RKind kind() const { return kind_; }
    std::optional<double> r() const;
    const ComplexityFunction& base() const { return base_; }

    bool operator==(const RClass& other) const;

    friend RClass convert(const RClass& cls, double q);

  private:
    RClass(RKind kind, double r, ComplexityFunction base, ComplexityFunction origin_base,
           double origin_r);

    RKind kind_;
    double r_;
    ComplexityFunction base_;
    ComplexityFunction origin_base_;
    double origin_r_;
};

// Theorems 1-3 style conversion: same kind, r' = q, base scaled by q/r.
RClass convert(const RClass& cls, double q);

// The r = 1 representative: convert(cls, 1).
RClass normalize(const RClass& cls);

// Classical statement implied by an r-statement: the r is erased, the base
// kept.
struct ClassicalClass {
    RKind kind;
    ComplexityFunction base;

    bool operator==(const ClassicalClass&) const = default;
};

ClassicalClass to_classical(const RClass& cls);

// Processor profile used to move between seconds-domain and cycle-domain
// coefficients.
struct ArchitectureProfile {
    double frequency_hz = 0.0;
    std::string label;
};

void validate(const ArchitectureProfile& profile);

} // namespace rcx
