#include "rcx/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace rcx {

std::string to_string(MetricKind kind) {
    return kind == MetricKind::TimeSeconds ? "time_s" : "mem_bytes";
}

void validate_for_fitting(const MeasurementSet& data) {
    if (data.samples.size() < 3) throw FitError("fitting needs at least 3 samples");
    std::int64_t first_n = data.samples.front().first;
    bool all_equal = true;
    for (const auto& [n, value] : data.samples) {
        if (n < 1) throw FitError("sample input sizes must be >= 1");
        if (!(value > 0.0) || !std::isfinite(value))
            throw FitError("sample values must be positive finite reals");
        all_equal = all_equal && n == first_n;
    }
    if (all_equal) throw FitError("sample input sizes must not all be equal");
}

TransformedData feature_transform(const MeasurementSet& data, const ComplexityFunction& g) {
    TransformedData out;
    out.points.reserve(data.samples.size());
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        double feature = evaluate(g, static_cast<double>(data.samples[i].first));
        if (!std::isfinite(feature)) {
            out.excluded.push_back(i);
            continue;
        }
        out.points.emplace_back(feature, data.samples[i].second);
    }
    return out;
}

namespace {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least squares of y against x, optionally through the origin, optionally on
// log-transformed values.
LinearFit solve_least_squares(const std::vector<std::pair<double, double>>& points,
                              bool with_intercept, bool log_domain) {
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    double m = static_cast<double>(points.size());
    for (auto [x, y] : points) {
        if (log_domain) {
            x = std::log(x);
            y = std::log(y);
        }
        sxx += x * x;
        sxy += x * y;
        sx += x;
        sy += y;
    }
    LinearFit fit;
    if (with_intercept) {
        double det = m * sxx - sx * sx;
        if (det == 0.0) throw FitError("singular design: feature values carry no spread");
        fit.slope = (m * sxy - sx * sy) / det;
        fit.intercept = (sxx * sy - sx * sxy) / det;
    } else {
        if (sxx == 0.0) throw FitError("singular design: all feature values are zero");
        fit.slope = sxy / sxx;
    }
    return fit;
}

// In the log domain the fit is ln(y) = ln(c) + s*ln(x) with s fixed at 1, so
// ln(c) is the mean log ratio.
double solve_log_domain_coefficient(const std::vector<std::pair<double, double>>& points) {
    double sum = 0.0;
    for (auto [x, y] : points) sum += std::log(y) - std::log(x);
    return std::exp(sum / static_cast<double>(points.size()));
}

struct Diagnostics {
    double r_squared;
    double residual_std;
};

Diagnostics diagnostics_for(const std::vector<std::pair<double, double>>& points, double c,
                            double intercept, std::size_t parameter_count) {
    double mean_y = 0.0;
    for (const auto& p : points) mean_y += p.second;
    mean_y /= static_cast<double>(points.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : points) {
        double r = p.second - (c * p.first + intercept);
        ss_res += r * r;
        double d = p.second - mean_y;
        ss_tot += d * d;
    }
    Diagnostics diag;
    if (ss_tot == 0.0)
        diag.r_squared = ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    else
        diag.r_squared = 1.0 - ss_res / ss_tot;
    std::size_t dof = points.size() > parameter_count ? points.size() - parameter_count : 1;
    diag.residual_std = std::sqrt(ss_res / static_cast<double>(dof));
    return diag;
}

ComplexityFunction fitted_model(const ComplexityFunction& g, double c, double intercept) {
    ComplexityFunction model = g.scaled(c);
    if (intercept > 0.0) {
        std::vector<Term> terms = model.terms();
        terms.push_back(constant_term(intercept));
        model = ComplexityFunction(std::move(terms), model.variable_name());
    }
    return model;
}

struct CoreFit {
    double c = 0.0;
    double intercept = 0.0;
};

CoreFit fit_core(const std::vector<std::pair<double, double>>& points, const FitOptions& options) {
    CoreFit core;
    if (options.log_domain_loss) {
        // ln(y) = ln(c) + ln(x) has no additive intercept slot.
        if (options.intercept) throw FitError("log-domain loss does not support an intercept");
        core.c = solve_log_domain_coefficient(points);
    } else {
        LinearFit lin = solve_least_squares(points, options.intercept, false);
        core.c = lin.slope;
        core.intercept = lin.intercept;
    }
    return core;
}

} // namespace

double FitResult::predict(double n) const { return evaluate(model, n); }

FitResult fit_known(const MeasurementSet& data, const ComplexityFunction& g,
                    const FitOptions& options) {
    validate_for_fitting(data);
    TransformedData transformed = feature_transform(data, g);
    if (transformed.points.size() < 3)
        throw FitError("fewer than 3 usable samples after the feature transform");

    auto points = transformed.points;
    CoreFit core = fit_core(points, options);

    if (options.trim_outliers && points.size() > 3) {
        // Drop the top 2% absolute residuals (at least one sample), refit once.
        std::vector<std::pair<double, std::size_t>> ranked;
        ranked.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            double r = points[i].second - (core.c * points[i].first + core.intercept);
            ranked.emplace_back(std::abs(r), i);
        }
        std::sort(ranked.begin(), ranked.end(), std::greater<>());
        std::size_t drop = std::max<std::size_t>(1, points.size() / 50);
        drop = std::min(drop, points.size() - 3);
        std::set<std::size_t> dropped;
        for (std::size_t i = 0; i < drop; ++i) dropped.insert(ranked[i].second);
        std::vector<std::pair<double, double>> kept;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (!dropped.count(i)) kept.push_back(points[i]);
        points = std::move(kept);
        core = fit_core(points, options);
    }

    if (!(core.c > 0.0) || !std::isfinite(core.c))
        throw FitError("fit produced a non-positive coefficient");

    FitResult result{.model = fitted_model(g, core.c, core.intercept)};
    result.coefficients = {core.c};
    if (options.intercept) result.coefficients.push_back(core.intercept);
    Diagnostics diag =
        diagnostics_for(points, core.c, core.intercept, options.intercept ? 2 : 1);
    result.r_squared = diag.r_squared;
    result.residual_std = diag.residual_std;
    result.sample_count = points.size();
    result.method = FitMethod::KnownBL;
    if (data.architecture) {
        validate(*data.architecture);
        result.cycle_coefficient = core.c * data.architecture->frequency_hz;
    }
    return result;
}

std::vector<Term> TermLibrary::enumerate_terms() const {
    std::vector<Term> terms;
    for (double g : gamma_exponents)
        for (double b : exp_bases)
            for (double p : powers)
                for (double j : log_exponents) {
                    if (j == 0.0) {
                        Term t;
                        t.power = p;
                        t.exp_base = b;
                        t.gamma_exponent = g;
                        terms.push_back(t);
                        continue;
                    }
                    for (double l : log_bases) {
                        Term t;
                        t.power = p;
                        t.log_base = l;
                        t.log_exponent = j;
                        t.exp_base = b;
                        t.gamma_exponent = g;
                        terms.push_back(t);
                    }
                }
    return terms;
}

namespace {

// Cross-validated squared error of the single-coefficient fit on the
// composite feature; folds are assigned by sample index mod 5.
std::optional<double> cross_validated_error(const std::vector<std::pair<double, double>>& points,
                                            const FitOptions& options) {
    constexpr std::size_t kFolds = 5;
    double total = 0.0;
    for (std::size_t fold = 0; fold < kFolds; ++fold) {
        std::vector<std::pair<double, double>> train;
        std::vector<std::pair<double, double>> held;
        for (std::size_t i = 0; i < points.size(); ++i)
            (i % kFolds == fold ? held : train).push_back(points[i]);
        if (held.empty()) continue;
        if (train.size() < 3) return std::nullopt;
        CoreFit core;
        try {
            core = fit_core(train, options);
        } catch (const FitError&) {
            return std::nullopt;
        }
        for (auto [x, y] : held) {
            double r = y - (core.c * x + core.intercept);
            total += r * r;
        }
    }
    if (!std::isfinite(total)) return std::nullopt;
    return total;
}

struct Candidate {
    ComplexityFunction model;
    double cv_error;
    std::size_t term_count;
};

// Prefer lower error, then fewer terms, then the slower-growing leading term.
bool better_candidate(const Candidate& a, const Candidate& b) {
    if (a.cv_error != b.cv_error) return a.cv_error < b.cv_error;
    if (a.term_count != b.term_count) return a.term_count < b.term_count;
    return compare_term_order(a.model.leading_term(), b.model.leading_term()) < 0;
}

} // namespace

FitResult fit_unknown(const MeasurementSet& data, const TermLibrary& library,
                      const FitOptions& options) {
    validate_for_fitting(data);
    if (data.samples.size() < 8) throw FitError("model selection needs at least 8 samples");
    std::set<std::int64_t> distinct;
    for (const auto& [n, value] : data.samples) distinct.insert(n);
    if (distinct.size() < 4)
        throw FitError("model selection needs at least 4 distinct input sizes");
    if (library.max_terms_per_model < 1)
        throw FitError("term library must allow at least one term per model");

    std::vector<Term> terms = library.enumerate_terms();
    std::vector<ComplexityFunction> candidates;
    for (const Term& t : terms) candidates.emplace_back(t);
    if (library.max_terms_per_model >= 2) {
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (std::size_t j = i + 1; j < terms.size(); ++j)
                candidates.emplace_back(std::vector<Term>{terms[i], terms[j]});
    }

    std::optional<Candidate> best;
    for (const auto& model : candidates) {
        TransformedData transformed = feature_transform(data, model);
        // A candidate that cannot evaluate over the whole dataset cannot be
        // scored against the others.
        if (!transformed.excluded.empty()) continue;
        auto cv = cross_validated_error(transformed.points, options);
        if (!cv) continue;
        CoreFit full;
        try {
            full = fit_core(transformed.points, options);
        } catch (const FitError&) {
            continue;
        }
        if (!(full.c > 0.0) || !std::isfinite(full.c)) continue;
        Candidate candidate{model, *cv, model.terms().size()};
        if (!best || better_candidate(candidate, *best)) best = std::move(candidate);
    }
    if (!best) throw FitError("no admissible model");

    FitResult result = fit_known(data, best->model, options);
    result.method = FitMethod::ModelSelection;
    return result;
}

ResidualReport residual_report(const FitResult& fit, const MeasurementSet& data) {
    ResidualReport report;
    report.residuals.reserve(data.samples.size());
    for (const auto& [n, value] : data.samples) {
        double r = value - fit.predict(static_cast<double>(n));
        report.residuals.push_back(r);
        double rel = value != 0.0 ? r / value : 0.0;
        report.relative_errors.push_back(rel);
        report.max_abs_relative_error = std::max(report.max_abs_relative_error, std::abs(rel));
    }
    for (std::size_t i = 0; i < report.residuals.size(); ++i)
        if (fit.residual_std > 0.0 && std::abs(report.residuals[i]) > 3.0 * fit.residual_std)
            report.flagged.push_back(i);
    return report;
}

} // namespace rcx
