#include "rcx/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "rcx/expression.hpp"

namespace rcx::io {

namespace {

constexpr const char* kDatasetHeader = "label,metric,n,value,repetitions,timestamp";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const char* what) {
    double value = 0.0;
    std::string t = trimmed(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw IoError(std::string("cannot parse ") + what + ": '" + text + "'");
    return value;
}

std::int64_t parse_int(const std::string& text, const char* what) {
    std::int64_t value = 0;
    std::string t = trimmed(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw IoError(std::string("cannot parse ") + what + ": '" + text + "'");
    return value;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    for (const auto& field : split(text, ','))
        values.push_back(parse_double(field, what));
    return values;
}

void check_format_line(const std::string& line, const char* file_kind) {
    std::string t = trimmed(line);
    if (t.rfind("#", 0) == 0) t = trimmed(t.substr(1));
    if (t != "format=1")
        throw IoError(std::string(file_kind) + " must start with a format=1 line, got '" + line +
                      "'");
}

// key=value lines after the format marker; blank lines and # comments skipped.
std::map<std::string, std::string> read_key_values(std::istream& in, const char* file_kind) {
    std::string line;
    if (!std::getline(in, line)) throw IoError(std::string(file_kind) + " is empty");
    check_format_line(line, file_kind);
    std::map<std::string, std::string> out;
    while (std::getline(in, line)) {
        std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw IoError(std::string(file_kind) + ": expected key=value, got '" + line + "'");
        out[trimmed(t.substr(0, eq))] = trimmed(t.substr(eq + 1));
    }
    return out;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key,
                           const char* file_kind) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw IoError(std::string(file_kind) + " is missing the '" + key + "' field");
    return it->second;
}

} // namespace

void write_dataset(std::ostream& out, const std::vector<DatasetRow>& rows) {
    out << "# format=" << kFormatVersion << "\n" << kDatasetHeader << "\n";
    for (const auto& row : rows) {
        out << row.label << ',' << row.metric << ',' << row.n << ','
            << format_double(row.value) << ',' << row.repetitions << ',' << row.timestamp << "\n";
    }
}

std::vector<DatasetRow> read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("dataset is empty");
    check_format_line(line, "dataset");
    if (!std::getline(in, line)) throw IoError("dataset is missing its header");
    if (trimmed(line) != kDatasetHeader)
        throw IoError("unexpected dataset header '" + line + "'; expected '" + kDatasetHeader +
                      "'");
    std::vector<DatasetRow> rows;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 6)
            throw IoError("dataset line " + std::to_string(line_no) + " has " +
                          std::to_string(fields.size()) + " fields, expected 6");
        DatasetRow row;
        row.label = fields[0];
        row.metric = fields[1];
        if (row.metric != "time_s" && row.metric != "mem_bytes")
            throw IoError("dataset line " + std::to_string(line_no) + ": unknown metric '" +
                          row.metric + "'");
        row.n = parse_int(fields[2], "n");
        if (row.n < 1)
            throw IoError("dataset line " + std::to_string(line_no) + ": n must be positive");
        row.value = parse_double(fields[3], "value");
        if (!(row.value > 0.0))
            throw IoError("dataset line " + std::to_string(line_no) + ": value must be positive");
        row.repetitions = static_cast<int>(parse_int(fields[4], "repetitions"));
        row.timestamp = fields[5];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<DatasetRow> dataset_rows_from(const bench::BenchOutput& output) {
    std::vector<DatasetRow> rows;
    const std::string& label = output.time_set.label;
    for (const auto& record : output.records) {
        rows.push_back(DatasetRow{label, "time_s", static_cast<std::int64_t>(record.n),
                                  record.elapsed_s, record.repetitions, record.timestamp});
    }
    for (const auto& record : output.records) {
        rows.push_back(DatasetRow{label, "mem_bytes", static_cast<std::int64_t>(record.n),
                                  static_cast<double>(record.peak_alloc_bytes), record.repetitions,
                                  record.timestamp});
    }
    return rows;
}

MetricKind metric_from_string(const std::string& name) {
    if (name == "time_s") return MetricKind::TimeSeconds;
    if (name == "mem_bytes") return MetricKind::PeakMemoryBytes;
    throw IoError("unknown metric '" + name + "'");
}

MeasurementSet to_measurement_set(const std::vector<DatasetRow>& rows, MetricKind metric,
                                  const std::string& label_filter,
                                  std::optional<ArchitectureProfile> architecture) {
    MeasurementSet set;
    set.metric = metric;
    set.architecture = std::move(architecture);
    std::string metric_name = to_string(metric);
    for (const auto& row : rows) {
        if (row.metric != metric_name) continue;
        if (!label_filter.empty() && row.label != label_filter) continue;
        if (set.label.empty()) set.label = row.label;
        set.samples.emplace_back(row.n, row.value);
    }
    return set;
}

ComplexityFunction Report::model() const { return parse_complexity_expression(model_text); }

Report make_report(const FitResult& fit, MetricKind metric, const std::string& label,
                   std::optional<double> frequency_hz) {
    Report report;
    report.model_text = render(fit.model);
    report.coefficients = fit.coefficients;
    report.r_squared = fit.r_squared;
    report.residual_std = fit.residual_std;
    report.sample_count = fit.sample_count;
    report.method = fit.method;
    report.metric = metric;
    report.label = label;
    report.frequency_hz = frequency_hz;
    if (frequency_hz)
        report.cycle_coefficient = fit.coefficients.front() * *frequency_hz;
    else if (fit.cycle_coefficient)
        report.cycle_coefficient = fit.cycle_coefficient;
    return report;
}

void write_report(std::ostream& out, const Report& report) {
    out << "format=" << kFormatVersion << "\n";
    out << "tool=" << report.tool_version << "\n";
    out << "label=" << report.label << "\n";
    out << "metric=" << to_string(report.metric) << "\n";
    out << "method=" << (report.method == FitMethod::KnownBL ? "known" : "auto") << "\n";
    out << "model=" << report.model_text << "\n";
    for (std::size_t i = 0; i < report.coefficients.size(); ++i)
        out << "coefficient." << i << "=" << format_double(report.coefficients[i]) << "\n";
    out << "r_squared=" << format_double(report.r_squared) << "\n";
    out << "residual_std=" << format_double(report.residual_std) << "\n";
    out << "samples=" << report.sample_count << "\n";
    if (report.frequency_hz) out << "hz=" << format_double(*report.frequency_hz) << "\n";
    if (report.cycle_coefficient)
        out << "cycle_coefficient=" << format_double(*report.cycle_coefficient) << "\n";
}

Report read_report(std::istream& in) {
    auto kv = read_key_values(in, "report");
    Report report;
    report.tool_version = require(kv, "tool", "report");
    report.label = kv.count("label") ? kv.at("label") : "";
    report.metric = metric_from_string(require(kv, "metric", "report"));
    const std::string& method = require(kv, "method", "report");
    if (method == "known")
        report.method = FitMethod::KnownBL;
    else if (method == "auto")
        report.method = FitMethod::ModelSelection;
    else
        throw IoError("report: unknown method '" + method + "'");
    report.model_text = require(kv, "model", "report");
    for (std::size_t i = 0;; ++i) {
        auto it = kv.find("coefficient." + std::to_string(i));
        if (it == kv.end()) break;
        report.coefficients.push_back(parse_double(it->second, "coefficient"));
    }
    if (report.coefficients.empty()) throw IoError("report has no coefficients");
    report.r_squared = parse_double(require(kv, "r_squared", "report"), "r_squared");
    report.residual_std = parse_double(require(kv, "residual_std", "report"), "residual_std");
    report.sample_count =
        static_cast<std::size_t>(parse_int(require(kv, "samples", "report"), "samples"));
    if (kv.count("hz")) report.frequency_hz = parse_double(kv.at("hz"), "hz");
    if (kv.count("cycle_coefficient"))
        report.cycle_coefficient = parse_double(kv.at("cycle_coefficient"), "cycle_coefficient");
    // The model text must parse; a report that cannot round-trip is corrupt.
    (void)report.model();
    return report;
}

WeightSpec read_weights(std::istream& in) {
    auto kv = read_key_values(in, "weights file");
    WeightSpec spec;
    const std::string& mode = require(kv, "mode", "weights file");
    if (mode == "point")
        spec.mode = WeightMode::PointWeights;
    else if (mode == "subinterval")
        spec.mode = WeightMode::SubintervalWeights;
    else
        throw IoError("weights file: unknown mode '" + mode + "'");
    spec.weights = parse_double_list(require(kv, "weights", "weights file"), "weight");
    if (spec.mode == WeightMode::SubintervalWeights) {
        for (const auto& field : split(require(kv, "knots", "weights file"), ','))
            spec.knots.push_back(parse_int(field, "knot"));
    } else if (kv.count("knots")) {
        throw IoError("weights file: point mode carries no knots");
    }
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("weights file: ") + e.what());
    }
    return spec;
}

void write_weights(std::ostream& out, const WeightSpec& weights) {
    out << "format=" << kFormatVersion << "\n";
    out << "mode=" << (weights.mode == WeightMode::PointWeights ? "point" : "subinterval") << "\n";
    if (!weights.knots.empty()) {
        out << "knots=";
        for (std::size_t i = 0; i < weights.knots.size(); ++i)
            out << (i ? "," : "") << weights.knots[i];
        out << "\n";
    }
    out << "weights=";
    for (std::size_t i = 0; i < weights.weights.size(); ++i)
        out << (i ? "," : "") << format_double(weights.weights[i]);
    out << "\n";
}

TermLibrary read_term_library(std::istream& in) {
    auto kv = read_key_values(in, "term library");
    TermLibrary library;
    if (kv.count("powers")) library.powers = parse_double_list(kv.at("powers"), "power");
    if (kv.count("log_exponents"))
        library.log_exponents = parse_double_list(kv.at("log_exponents"), "log exponent");
    if (kv.count("log_bases")) library.log_bases = parse_double_list(kv.at("log_bases"), "log base");
    if (kv.count("exp_bases")) library.exp_bases = parse_double_list(kv.at("exp_bases"), "exp base");
    if (kv.count("gamma_exponents"))
        library.gamma_exponents = parse_double_list(kv.at("gamma_exponents"), "gamma exponent");
    if (kv.count("max_terms"))
        library.max_terms_per_model = static_cast<int>(parse_int(kv.at("max_terms"), "max_terms"));
    return library;
}

namespace {

constexpr double kMinute = 60.0;
constexpr double kHour = 3600.0;
constexpr double kDay = 86400.0;
constexpr double kYear = 365.25 * kDay; // Julian year
constexpr double kCentury = 100.0 * kYear;

std::string one_decimal(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

} // namespace

double duration_in_centuries(double seconds) { return seconds / kCentury; }

std::string humanize_duration(double seconds) {
    if (!std::isfinite(seconds)) return "beyond the representable range";
    if (seconds < kMinute) return one_decimal(seconds) + " seconds";
    if (seconds < kHour) return one_decimal(seconds / kMinute) + " minutes";
    if (seconds < kDay) return one_decimal(seconds / kHour) + " hours";
    if (seconds < kYear) return one_decimal(seconds / kDay) + " days";
    if (seconds < kCentury) return one_decimal(seconds / kYear) + " years";
    double centuries = seconds / kCentury;
    if (centuries < 1e3) return one_decimal(centuries) + " centuries";
    if (centuries < 1e6) return one_decimal(centuries / 1e3) + " thousand centuries";
    if (centuries < 1e9) return one_decimal(centuries / 1e6) + " million centuries";
    if (centuries < 1e12) return one_decimal(centuries / 1e9) + " billion centuries";
    if (centuries < 1e15) return one_decimal(centuries / 1e12) + " trillion centuries";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g centuries", centuries);
    return buf;
}

} // namespace rcx::io
