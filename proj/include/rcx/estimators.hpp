#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcx/complexity.hpp"

// Interval-based expected-cost metrics over a normalized complexity function,
// comparison verdicts, crossover solving and large-n extrapolation.

namespace rcx {

struct IntervalSpec {
    std::int64_t n_min = 1;
    std::int64_t n_max = 1;

    bool operator==(const IntervalSpec&) const = default;
};

void validate(const IntervalSpec& interval);

enum class EstimatorKind { RM1, RM2, ERM1, ERM2 };

std::string to_string(EstimatorKind kind);

struct IntervalEstimate {
    double value = 0.0;
    EstimatorKind metric = EstimatorKind::RM1;
    IntervalSpec interval;
    bool overflow = false;
};

enum class WeightMode { PointWeights, SubintervalWeights };

// Occurrence weights: one per input size (point mode) or one per subinterval
// between consecutive knots (subinterval mode). Weights sum to 1.
struct WeightSpec {
    WeightMode mode = WeightMode::PointWeights;
    std::vector<double> weights;
    std::vector<std::int64_t> knots; // subinterval mode only; strictly increasing
};

void validate(const WeightSpec& weights);

// Discrete arithmetic mean of g1 over [n_min, n_max].
IntervalEstimate rm1(const ComplexityFunction& g1, const IntervalSpec& interval);

// Integral mean of g1 over [n_min, n_max]; requires n_max > n_min.
IntervalEstimate rm2(const ComplexityFunction& g1, const IntervalSpec& interval);

// Point-weighted mean: sum of p_i * g1(n_min + i).
IntervalEstimate erm1(const ComplexityFunction& g1, const IntervalSpec& interval,
                      const WeightSpec& weights);

// Subinterval-weighted expected integral: sum of p_k * integral over
// [knot_k, knot_{k+1}]. The printed formula does not divide by subinterval
// length; `normalized` enables that documented variant.
IntervalEstimate erm2(const ComplexityFunction& g1, const WeightSpec& weights,
                      bool normalized = false);

// Definite integral of f over [a, b]: closed forms for pure power terms,
// adaptive Simpson for the rest. +inf on overflow.
double integrate(const ComplexityFunction& f, double a, double b);

enum class VerdictOutcome { FirstFaster, SecondFaster, Equivalent };

std::string to_string(VerdictOutcome outcome);

struct Verdict {
    double ratio = 0.0;
    VerdictOutcome outcome = VerdictOutcome::Equivalent;
};

// ratio = t1/t2; below 1 the first algorithm terminates faster in average.
Verdict compare_estimates(const IntervalEstimate& t1, const IntervalEstimate& t2,
                          double equivalence_tolerance = 1e-6);

struct CrossoverResult {
    double n0 = 0.0;
    bool exists = false;
    std::pair<double, double> bracket{0.0, 0.0};
    std::string reason; // populated when no crossover is reported
};

// Input size where f and g intersect: closed form for single power-term
// pairs, otherwise a bracketed search on log f - log g over [1, 2^64].
CrossoverResult crossover(const ComplexityFunction& f, const ComplexityFunction& g);

struct Extrapolation {
    double value = 0.0;       // metric units (seconds for time models)
    double log10_value = 0.0; // base-10 log of the value; finite past overflow
    bool overflow = false;
    std::optional<double> cycles;       // value * HZ when a profile is given
    std::optional<double> log10_cycles;
};

Extrapolation extrapolate(const ComplexityFunction& model, double n,
                          const ArchitectureProfile* architecture = nullptr);

} // namespace rcx
