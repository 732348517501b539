#pragma once

#include "uprop/bench.hpp"

#include <string>
#include <vector>

namespace uprop::report {

/// Aggregated cell of the summary table: one (app, method, param) group.
struct SeriesPoint {
    std::uint64_t param = 0;
    double w1_mean = 0.0;
    double w1_std = 0.0;
    double time_mean = 0.0;
    double time_std = 0.0;
    std::size_t repetitions = 0;
};

struct Series {
    std::string app;
    std::string method;
    std::vector<SeriesPoint> points; // ordered by param
    bool trend_nonincreasing = false; // W1 nonincreasing within +-1 pooled std
};

struct ParetoReport {
    std::vector<Series> series;
    std::vector<std::string> svg_paths;
    std::string table_path;
};

/// Reads record CSVs (shared schema), groups by app/method/param, writes one
/// Pareto SVG per app (log-scale W1 axis, +-1 std-dev error bars, one series
/// per method) plus a text summary table with the trend annotation.
ParetoReport report_pareto(const std::vector<std::string>& csv_paths,
                           const std::string& out_dir);

/// Fig-style triptych for an app: input density, transform curve, analytic
/// output density, as a single SVG.
void plot_pushforward(bench::App app, const std::string& out_path);

} // namespace uprop::report
