#include "rcx/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rcx/bench.hpp"
#include "rcx/estimators.hpp"
#include "rcx/expression.hpp"
#include "rcx/fitting.hpp"
#include "rcx/io.hpp"

namespace rcx::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCorrectness = 3;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bare filenames land in RCX_OUT_DIR when that is set.
std::string resolve_out_path(const std::string& path) {
    if (path.find('/') != std::string::npos) return path;
    const char* dir = std::getenv("RCX_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    std::string d = dir;
    if (d.back() != '/') d += '/';
    return d + path;
}

std::ofstream open_out_file(const std::string& path) {
    std::ofstream file(path);
    if (!file) throw UsageError("cannot open '" + path + "' for writing");
    return file;
}

std::ifstream open_in_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw UsageError("cannot open '" + path + "' for reading");
    return file;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) {
        try {
            long value = std::stol(field);
            if (value < 1) throw UsageError("sizes must be positive, got '" + field + "'");
            sizes.push_back(static_cast<std::size_t>(value));
        } catch (const std::logic_error&) {
            throw UsageError("cannot parse size '" + field + "'");
        }
    }
    if (sizes.empty()) throw UsageError("no sizes given");
    return sizes;
}

IntervalSpec parse_range(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("range must look like a:b, got '" + text + "'");
    try {
        IntervalSpec interval{std::stoll(text.substr(0, colon)),
                              std::stoll(text.substr(colon + 1))};
        validate(interval);
        return interval;
    } catch (const std::logic_error& e) {
        throw UsageError(std::string("bad range '") + text + "': " + e.what());
    }
}

struct BenchArgs {
    std::string kernel;
    std::string sizes;
    int reps = 5;
    int warmups = 2;
    std::size_t block_size = 64;
    std::size_t cutoff = 32;
    std::uint64_t seed = 42;
    std::string label;
    std::string out = "dataset.csv";
};

int cmd_bench(const BenchArgs& args, std::ostream& out) {
    bench::BenchPlan plan;
    plan.kernel = bench::kernel_from_string(args.kernel);
    plan.sizes = parse_sizes(args.sizes);
    plan.repetitions = args.reps;
    plan.warmups = args.warmups;
    plan.block_size = args.block_size;
    plan.strassen_cutoff = args.cutoff;
    plan.seed = args.seed;
    plan.label = args.label;
    bench::validate(plan);

    bench::BenchOutput result = bench::run_bench(plan);
    for (const auto& record : result.records) {
        out << to_string(record.kernel) << " n=" << record.n
            << " elapsed=" << format_double(record.elapsed_s) << " s"
            << " peak=" << record.peak_alloc_bytes << " B"
            << " reps=" << record.repetitions << "\n";
    }
    std::vector<io::DatasetRow> rows = io::dataset_rows_from(result);
    std::string path = resolve_out_path(args.out);
    auto file = open_out_file(path);
    io::write_dataset(file, rows);
    out << "wrote " << rows.size() << " rows to " << path << "\n";
    return kExitOk;
}

struct FitArgs {
    std::string data;
    std::string metric = "time_s";
    std::string label;
    std::string known;
    bool auto_select = false;
    std::string library;
    bool intercept = false;
    bool log_loss = false;
    bool trim_outliers = false;
    double hz = 0.0;
    std::string out;
};

int cmd_fit(const FitArgs& args, std::ostream& out) {
    if (args.known.empty() == !args.auto_select)
        throw UsageError("exactly one of --known or --auto is required");
    auto file = open_in_file(args.data);
    auto rows = io::read_dataset(file);
    MetricKind metric = io::metric_from_string(args.metric);
    std::optional<ArchitectureProfile> architecture;
    if (args.hz > 0.0) architecture = ArchitectureProfile{args.hz, ""};
    MeasurementSet data = io::to_measurement_set(rows, metric, args.label, architecture);
    if (data.samples.empty()) throw UsageError("dataset has no rows for the requested metric");

    FitOptions options;
    options.intercept = args.intercept;
    options.log_domain_loss = args.log_loss;
    options.trim_outliers = args.trim_outliers;

    FitResult fit = [&] {
        if (!args.known.empty())
            return fit_known(data, parse_complexity_expression(args.known), options);
        TermLibrary library;
        if (!args.library.empty()) {
            auto lib_file = open_in_file(args.library);
            library = io::read_term_library(lib_file);
        }
        return fit_unknown(data, library, options);
    }();

    std::optional<double> hz;
    if (args.hz > 0.0) hz = args.hz;
    io::Report report = io::make_report(fit, metric, data.label, hz);
    io::write_report(out, report);
    if (!args.out.empty()) {
        std::string path = resolve_out_path(args.out);
        auto out_file = open_out_file(path);
        io::write_report(out_file, report);
        out << "wrote report to " << path << "\n";
    }
    return kExitOk;
}

struct ModelSource {
    std::string expression;
    std::string report_path;
};

// Model text takes priority; otherwise the report's fitted model is used.
std::pair<ComplexityFunction, std::optional<MetricKind>> load_model(const ModelSource& source) {
    if (!source.expression.empty() && !source.report_path.empty())
        throw UsageError("give either a model expression or a report file, not both");
    if (!source.expression.empty())
        return {parse_complexity_expression(source.expression), std::nullopt};
    if (!source.report_path.empty()) {
        auto file = open_in_file(source.report_path);
        io::Report report = io::read_report(file);
        return {report.model(), report.metric};
    }
    throw UsageError("a model expression or a report file is required");
}

const char* unit_suffix(const std::optional<MetricKind>& metric) {
    if (!metric) return "";
    return *metric == MetricKind::TimeSeconds ? " seconds" : " bytes";
}

struct EstimateArgs {
    std::string model;
    std::string report;
    std::string metric;
    std::string range;
    std::string weights;
};

WeightSpec load_weights(const std::string& path) {
    auto file = open_in_file(path);
    try {
        return io::read_weights(file);
    } catch (const io::IoError& e) {
        throw UsageError(e.what());
    }
}

int cmd_estimate(const EstimateArgs& args, std::ostream& out) {
    auto [model, metric] = load_model({args.model, args.report});
    const char* unit = unit_suffix(metric);
    if (args.metric == "rm1") {
        IntervalSpec interval = parse_range(args.range);
        out << "rm1 over [" << interval.n_min << ", " << interval.n_max
            << "] = " << format_double(rm1(model, interval).value) << unit << "\n";
    } else if (args.metric == "rm2") {
        IntervalSpec interval = parse_range(args.range);
        out << "rm2 over [" << interval.n_min << ", " << interval.n_max
            << "] = " << format_double(rm2(model, interval).value) << unit << "\n";
    } else if (args.metric == "erm1") {
        if (args.weights.empty()) throw UsageError("erm1 needs --weights");
        IntervalSpec interval = parse_range(args.range);
        WeightSpec weights = load_weights(args.weights);
        out << "erm1 over [" << interval.n_min << ", " << interval.n_max
            << "] = " << format_double(erm1(model, interval, weights).value) << unit << "\n";
    } else if (args.metric == "erm2") {
        if (args.weights.empty()) throw UsageError("erm2 needs --weights");
        WeightSpec weights = load_weights(args.weights);
        IntervalEstimate printed = erm2(model, weights, false);
        IntervalEstimate normalized = erm2(model, weights, true);
        out << "erm2 over [" << printed.interval.n_min << ", " << printed.interval.n_max
            << "] (as printed) = " << format_double(printed.value) << unit << "\n";
        out << "erm2 over [" << printed.interval.n_min << ", " << printed.interval.n_max
            << "] (normalized) = " << format_double(normalized.value) << unit << "\n";
    } else {
        throw UsageError("unknown estimator '" + args.metric + "'");
    }
    return kExitOk;
}

struct CompareArgs {
    std::string first;
    std::string second;
    std::string metric = "rm2";
    std::string range;
    std::string weights;
    double tolerance = 1e-6;
};

int cmd_compare(const CompareArgs& args, std::ostream& out) {
    ComplexityFunction first = parse_complexity_expression(args.first);
    ComplexityFunction second = parse_complexity_expression(args.second);
    auto estimate = [&](const ComplexityFunction& model) {
        if (args.metric == "rm1") return rm1(model, parse_range(args.range));
        if (args.metric == "rm2") return rm2(model, parse_range(args.range));
        if (args.metric == "erm1") {
            if (args.weights.empty()) throw UsageError("erm1 needs --weights");
            return erm1(model, parse_range(args.range), load_weights(args.weights));
        }
        if (args.metric == "erm2") {
            if (args.weights.empty()) throw UsageError("erm2 needs --weights");
            return erm2(model, load_weights(args.weights));
        }
        throw UsageError("unknown estimator '" + args.metric + "'");
    };
    IntervalEstimate t1 = estimate(first);
    IntervalEstimate t2 = estimate(second);
    Verdict verdict = compare_estimates(t1, t2, args.tolerance);
    out << "t1 = " << format_double(t1.value) << "\n";
    out << "t2 = " << format_double(t2.value) << "\n";
    out << "ratio = " << format_double(verdict.ratio) << "\n";
    out << "verdict: " << to_string(verdict.outcome) << "\n";
    return kExitOk;
}

int cmd_crossover(const std::string& first_text, const std::string& second_text,
                  std::ostream& out) {
    ComplexityFunction first = parse_complexity_expression(first_text);
    ComplexityFunction second = parse_complexity_expression(second_text);
    CrossoverResult result = crossover(first, second);
    if (!result.exists) {
        out << "no crossover: " << result.reason << "\n";
        return kExitOk;
    }
    out << "n0 = " << format_double(result.n0) << "\n";
    out << "bracket = [" << format_double(result.bracket.first) << ", "
        << format_double(result.bracket.second) << "]\n";
    double v1 = evaluate(first, result.n0);
    double v2 = evaluate(second, result.n0);
    out << "first(n0) = " << format_double(v1) << " seconds (~ " << io::humanize_duration(v1)
        << ")\n";
    out << "second(n0) = " << format_double(v2) << " seconds (~ " << io::humanize_duration(v2)
        << ")\n";
    return kExitOk;
}

struct ClassifyArgs {
    std::string f;
    std::string g;
    double r = 1.0;
    double tolerance = 1e-12;
};

int cmd_classify(const ClassifyArgs& args, std::ostream& out) {
    ComplexityFunction f = parse_complexity_expression(args.f);
    ComplexityFunction g = parse_complexity_expression(args.g);
    RatioLimit limit = asymptotic_ratio_limit(f, g);
    if (limit.is_zero())
        out << "limit(f/g) = 0\n";
    else if (limit.is_infinity())
        out << "limit(f/g) = infinity\n";
    else
        out << "limit(f/g) = " << format_double(limit.value) << "\n";
    Classification membership = classify(f, g, args.r, args.tolerance);
    out << "r = " << format_double(args.r) << "\n";
    std::vector<std::string> flags;
    if (membership.big_theta_r) flags.push_back("Theta_r");
    if (membership.big_o_r) flags.push_back("O_r");
    if (membership.big_omega_r) flags.push_back("Omega_r");
    if (membership.small_o) flags.push_back("o");
    if (membership.small_omega) flags.push_back("omega");
    out << "memberships:";
    if (flags.empty()) out << " none";
    for (const auto& flag : flags) out << " " << flag;
    out << "\n";
    return kExitOk;
}

struct ConvertArgs {
    std::string kind;
    double r = 1.0;
    double q = 1.0;
    std::string base;
};

int cmd_convert(const ConvertArgs& args, std::ostream& out) {
    RKind kind;
    if (args.kind == "theta")
        kind = RKind::BigTheta;
    else if (args.kind == "o")
        kind = RKind::BigO;
    else if (args.kind == "omega")
        kind = RKind::BigOmega;
    else
        throw UsageError("kind must be theta, o or omega");
    RClass cls(kind, args.r, parse_complexity_expression(args.base));
    RClass converted = convert(cls, args.q);
    out << to_string(converted.kind()) << "_" << format_double(*converted.r()) << "("
        << render(converted.base()) << ")\n";
    return kExitOk;
}

struct PlotArgs {
    std::string data;
    std::string report;
    std::string metric;
    std::string label;
    int grid = 0;
    std::string out;
};

int cmd_plot_data(const PlotArgs& args, std::ostream& out) {
    auto data_file = open_in_file(args.data);
    auto rows = io::read_dataset(data_file);
    auto report_file = open_in_file(args.report);
    io::Report report = io::read_report(report_file);
    MetricKind metric = args.metric.empty() ? report.metric : io::metric_from_string(args.metric);
    if (metric != report.metric)
        throw UsageError("report metric " + to_string(report.metric) +
                         " does not match requested metric " + to_string(metric));
    MeasurementSet data = io::to_measurement_set(rows, metric, args.label);
    if (data.samples.empty()) throw UsageError("dataset has no rows for the requested metric");
    ComplexityFunction model = report.model();

    std::ostringstream csv;
    csv << "# format=" << io::kFormatVersion << "\n";
    csv << "kind,n,measured,predicted\n";
    std::int64_t n_min = data.samples.front().first;
    std::int64_t n_max = n_min;
    for (const auto& [n, value] : data.samples) {
        csv << "sample," << n << ',' << format_double(value) << ','
            << format_double(evaluate(model, static_cast<double>(n))) << "\n";
        n_min = std::min(n_min, n);
        n_max = std::max(n_max, n);
    }
    for (int i = 0; i < args.grid; ++i) {
        double t = args.grid == 1 ? 0.0
                                  : static_cast<double>(i) / static_cast<double>(args.grid - 1);
        double n = static_cast<double>(n_min) + t * static_cast<double>(n_max - n_min);
        csv << "grid," << format_double(n) << ",," << format_double(evaluate(model, n)) << "\n";
    }
    if (args.out.empty()) {
        out << csv.str();
    } else {
        std::string path = resolve_out_path(args.out);
        auto file = open_out_file(path);
        file << csv.str();
        out << "wrote plot data to " << path << "\n";
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"constant-aware complexity toolkit"};
    app.require_subcommand(1);

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "run a matrix-multiplication benchmark");
    bench_cmd->add_option("--kernel", bench_args.kernel, "naive|reordered|blocked|strassen")
        ->required();
    bench_cmd->add_option("--sizes", bench_args.sizes, "comma-separated matrix orders")
        ->required();
    bench_cmd->add_option("--reps", bench_args.reps, "timed repetitions per size");
    bench_cmd->add_option("--warmups", bench_args.warmups, "discarded warmup runs per size");
    bench_cmd->add_option("--block-size", bench_args.block_size, "tile size for blocked");
    bench_cmd->add_option("--cutoff", bench_args.cutoff, "strassen recursion cutoff");
    bench_cmd->add_option("--seed", bench_args.seed, "input generator seed");
    bench_cmd->add_option("--label", bench_args.label, "dataset label (defaults to kernel)");
    bench_cmd->add_option("--out", bench_args.out, "dataset file (default dataset.csv)");

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "fit a complexity coefficient to a dataset");
    fit_cmd->add_option("--data", fit_args.data, "dataset CSV")->required();
    fit_cmd->add_option("--metric", fit_args.metric, "time_s|mem_bytes");
    fit_cmd->add_option("--label", fit_args.label, "only rows with this label");
    fit_cmd->add_option("--known", fit_args.known, "growth-order expression, e.g. \"n^3\"");
    fit_cmd->add_flag("--auto", fit_args.auto_select, "select the model from a term library");
    fit_cmd->add_option("--library", fit_args.library, "term library config file");
    fit_cmd->add_flag("--intercept", fit_args.intercept, "fit a constant overhead too");
    fit_cmd->add_flag("--log-loss", fit_args.log_loss, "minimize error in the log domain");
    fit_cmd->add_flag("--trim-outliers", fit_args.trim_outliers,
                      "drop top 2% residuals and refit");
    fit_cmd->add_option("--hz", fit_args.hz, "processor frequency for the cycle coefficient");
    fit_cmd->add_option("--out", fit_args.out, "also write the report to this file");

    EstimateArgs estimate_args;
    auto* estimate_cmd = app.add_subcommand("estimate", "interval expected-cost estimate");
    estimate_cmd->add_option("--model", estimate_args.model, "model expression");
    estimate_cmd->add_option("--report", estimate_args.report, "report file with the model");
    estimate_cmd->add_option("--metric", estimate_args.metric, "rm1|rm2|erm1|erm2")->required();
    estimate_cmd->add_option("--range", estimate_args.range, "interval a:b");
    estimate_cmd->add_option("--weights", estimate_args.weights, "weights file for erm1/erm2");

    CompareArgs compare_args;
    auto* compare_cmd = app.add_subcommand("compare", "compare two models over an interval");
    compare_cmd->add_option("--first", compare_args.first, "first model expression")->required();
    compare_cmd->add_option("--second", compare_args.second, "second model expression")
        ->required();
    compare_cmd->add_option("--metric", compare_args.metric, "rm1|rm2|erm1|erm2");
    compare_cmd->add_option("--range", compare_args.range, "interval a:b");
    compare_cmd->add_option("--weights", compare_args.weights, "weights file for erm1/erm2");
    compare_cmd->add_option("--tolerance", compare_args.tolerance, "equivalence tolerance");

    std::string crossover_first, crossover_second;
    auto* crossover_cmd = app.add_subcommand("crossover", "solve where two models intersect");
    crossover_cmd->add_option("--first", crossover_first, "first model expression")->required();
    crossover_cmd->add_option("--second", crossover_second, "second model expression")
        ->required();

    ClassifyArgs classify_args;
    auto* classify_cmd = app.add_subcommand("classify", "r-class membership of f against g");
    classify_cmd->add_option("--f", classify_args.f, "function under test")->required();
    classify_cmd->add_option("--g", classify_args.g, "base function")->required();
    classify_cmd->add_option("--r", classify_args.r, "ratio r")->required();
    classify_cmd->add_option("--tolerance", classify_args.tolerance,
                             "relative tolerance for the Theta_r check");

    ConvertArgs convert_args;
    auto* convert_cmd = app.add_subcommand("convert", "convert an r-class statement to ratio q");
    convert_cmd->add_option("--kind", convert_args.kind, "theta|o|omega")->required();
    convert_cmd->add_option("--r", convert_args.r, "current ratio")->required();
    convert_cmd->add_option("--base", convert_args.base, "base expression")->required();
    convert_cmd->add_option("--q", convert_args.q, "target ratio")->required();

    PlotArgs plot_args;
    auto* plot_cmd = app.add_subcommand("plot-data", "emit measured vs predicted CSV");
    plot_cmd->add_option("--data", plot_args.data, "dataset CSV")->required();
    plot_cmd->add_option("--report", plot_args.report, "report file")->required();
    plot_cmd->add_option("--metric", plot_args.metric, "time_s|mem_bytes");
    plot_cmd->add_option("--label", plot_args.label, "only rows with this label");
    plot_cmd->add_option("--grid", plot_args.grid, "dense prediction rows to emit");
    plot_cmd->add_option("--out", plot_args.out, "write the CSV here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_args, out);
        if (app.got_subcommand(fit_cmd)) return cmd_fit(fit_args, out);
        if (app.got_subcommand(estimate_cmd)) return cmd_estimate(estimate_args, out);
        if (app.got_subcommand(compare_cmd)) return cmd_compare(compare_args, out);
        if (app.got_subcommand(crossover_cmd))
            return cmd_crossover(crossover_first, crossover_second, out);
        if (app.got_subcommand(classify_cmd)) return cmd_classify(classify_args, out);
        if (app.got_subcommand(convert_cmd)) return cmd_convert(convert_args, out);
        if (app.got_subcommand(plot_cmd)) return cmd_plot_data(plot_args, out);
        err << "error: no subcommand given\n";
        return kExitUsage;
    } catch (const bench::BenchError& e) {
        err << "correctness failure: " << e.what() << "\n";
        return kExitCorrectness;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace rcx::cli
