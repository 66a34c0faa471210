#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rcx/complexity.hpp"

// Coefficient estimation from measured benchmark data: feature-transformed
// regression when the growth order is known, and cross-validated model
// selection over a finite term library when it is not.

namespace rcx {

enum class MetricKind { TimeSeconds, PeakMemoryBytes };

std::string to_string(MetricKind kind);

// Labeled (input size, metric value) samples from one benchmark subject.
struct MeasurementSet {
    std::vector<std::pair<std::int64_t, double>> samples;
    MetricKind metric = MetricKind::TimeSeconds;
    std::string label;
    std::optional<ArchitectureProfile> architecture;
};

// Requirements for fitting: >= 3 samples, positive values, n not all equal.
void validate_for_fitting(const MeasurementSet& data);

class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// (g(n), value) pairs; samples whose feature overflows are excluded and
// reported by index.
struct TransformedData {
    std::vector<std::pair<double, double>> points;
    std::vector<std::size_t> excluded;
};

TransformedData feature_transform(const MeasurementSet& data, const ComplexityFunction& g);

struct FitOptions {
    bool intercept = false;       // opt-in constant overhead
    bool log_domain_loss = false; // minimize error on log(value) instead
    bool trim_outliers = false;   // drop top 2% |residual| and refit once
};

enum class FitMethod { KnownBL, ModelSelection };

struct FitResult {
    ComplexityFunction model;          // fitted constant folded into the base
    std::vector<double> coefficients;  // {c} or {c, intercept}
    double r_squared = 0.0;            // computed on the untransformed scale
    double residual_std = 0.0;
    std::size_t sample_count = 0;
    FitMethod method = FitMethod::KnownBL;
    std::optional<double> cycle_coefficient; // c * HZ when the profile is known

    // Model prediction at input size n.
    double predict(double n) const;
};

// Least squares of value against g(n), through the origin by default.
FitResult fit_known(const MeasurementSet& data, const ComplexityFunction& g,
                    const FitOptions& options = {});

// Candidate factors enumerated during model selection.
struct TermLibrary {
    std::vector<double> powers{0.0, 1.0, 1.5, 2.0, 2.5, 2.8, 3.0, 4.0};
    std::vector<double> log_exponents{0.0, 1.0, 2.0};
    std::vector<double> log_bases{2.0};
    std::vector<double> exp_bases{1.0, 2.0};
    std::vector<double> gamma_exponents{0.0, 1.0};
    int max_terms_per_model = 2;

    // Every unit-coefficient term combination, in deterministic order.
    std::vector<Term> enumerate_terms() const;
};

// Enumerates models of up to max_terms_per_model library terms, fits each on
// the composite feature, scores by 5-fold cross-validated squared error on
// the untransformed scale (folds by sample index mod 5) and returns the best.
FitResult fit_unknown(const MeasurementSet& data, const TermLibrary& library = {},
                      const FitOptions& options = {});

struct ResidualReport {
    std::vector<double> residuals;       // value - prediction, per sample
    std::vector<double> relative_errors; // residual / value
    double max_abs_relative_error = 0.0;
    std::vector<std::size_t> flagged; // |residual| beyond 3x residual_std
};

ResidualReport residual_report(const FitResult& fit, const MeasurementSet& data);

} // namespace rcx
