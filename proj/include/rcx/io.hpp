#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcx/bench.hpp"
#include "rcx/estimators.hpp"
#include "rcx/fitting.hpp"

// File formats shared by the CLI: CSV datasets, fit reports, weight and term
// library configs. Every format starts with a format=1 marker.

namespace rcx::io {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "rcx 0.1.0";

// One dataset row; metric is "time_s" or "mem_bytes".
struct DatasetRow {
    std::string label;
    std::string metric;
    std::int64_t n = 0;
    double value = 0.0;
    int repetitions = 1;
    std::string timestamp;
};

void write_dataset(std::ostream& out, const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> read_dataset(std::istream& in);

std::vector<DatasetRow> dataset_rows_from(const bench::BenchOutput& output);

// Rows filtered to one metric (and optional label) as a measurement set.
MeasurementSet to_measurement_set(const std::vector<DatasetRow>& rows, MetricKind metric,
                                  const std::string& label_filter = "",
                                  std::optional<ArchitectureProfile> architecture = std::nullopt);

MetricKind metric_from_string(const std::string& name);

// Fit report: model string in the expression grammar plus diagnostics.
struct Report {
    std::string model_text;
    std::vector<double> coefficients;
    double r_squared = 0.0;
    double residual_std = 0.0;
    std::size_t sample_count = 0;
    FitMethod method = FitMethod::KnownBL;
    MetricKind metric = MetricKind::TimeSeconds;
    std::string label;
    std::optional<double> frequency_hz;
    std::optional<double> cycle_coefficient;
    std::string tool_version = kToolVersion;

    ComplexityFunction model() const; // parses model_text
};

Report make_report(const FitResult& fit, MetricKind metric, const std::string& label,
                   std::optional<double> frequency_hz);

void write_report(std::ostream& out, const Report& report);
Report read_report(std::istream& in);

// Weight file: format=1, mode=point|subinterval, weights=..., knots=...
WeightSpec read_weights(std::istream& in);
void write_weights(std::ostream& out, const WeightSpec& weights);

// Term library config: format=1 plus the candidate exponent lists.
TermLibrary read_term_library(std::istream& in);

// Fixed humanization ladder: seconds, minutes, hours, days, years, centuries;
// century counts past 1000 use thousand/million/billion/trillion words, then
// scientific notation.
std::string humanize_duration(double seconds);
double duration_in_centuries(double seconds);

} // namespace rcx::io
