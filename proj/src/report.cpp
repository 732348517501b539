#include "uprop/report.hpp"

#include "uprop/errors.hpp"
#include "uprop/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace uprop::report {

namespace {

const char* kSeriesColors[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8a5fbe"};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

/// Minimal SVG canvas with a data-space -> pixel-space mapping.
class SvgCanvas {
public:
    SvgCanvas(double width, double height) : width_(width), height_(height) {
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
              << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
              << height << "\">\n";
        body_ << "<rect width=\"" << width << "\" height=\"" << height
              << "\" fill=\"white\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double stroke = 1.0) {
        body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2
              << "\" y2=\"" << y2 << "\" stroke=\"" << color << "\" stroke-width=\""
              << stroke << "\"/>\n";
    }

    void circle(double x, double y, double radius, const std::string& color) {
        body_ << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << radius
              << "\" fill=\"" << color << "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double stroke = 1.5) {
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
              << stroke << "\" points=\"";
        for (const auto& [x, y] : pts) {
            body_ << x << "," << y << " ";
        }
        body_ << "\"/>\n";
    }

    void text(double x, double y, const std::string& content, int size = 12,
              const std::string& anchor = "start", const std::string& color = "#222") {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
              << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
              << "\" fill=\"" << color << "\">" << content << "</text>\n";
    }

    void save(const std::string& path) {
        body_ << "</svg>\n";
        std::ofstream out(path);
        if (!out) {
            throw IoError("svg: cannot open " + path);
        }
        out << body_.str();
    }

    double width() const { return width_; }
    double height() const { return height_; }

private:
    double width_;
    double height_;
    std::ostringstream body_;
};

struct AxisBox {
    double left, right, top, bottom;
    double x_min, x_max; // data space (already log10 if log axis)
    double y_min, y_max;

    double px(double x) const {
        return left + (x - x_min) / (x_max - x_min) * (right - left);
    }
    double py(double y) const {
        return bottom - (y - y_min) / (y_max - y_min) * (bottom - top);
    }
};

void draw_log_axis_ticks(SvgCanvas& svg, const AxisBox& box, bool vertical) {
    const double lo = vertical ? box.y_min : box.x_min;
    const double hi = vertical ? box.y_max : box.x_max;
    for (int d = static_cast<int>(std::floor(lo)); d <= static_cast<int>(std::ceil(hi));
         ++d) {
        if (d < lo - 1e-9 || d > hi + 1e-9) continue;
        const std::string label = "1e" + std::to_string(d);
        if (vertical) {
            const double y = box.py(d);
            svg.line(box.left - 4, y, box.right, y, "#dddddd", 0.7);
            svg.line(box.left - 4, y, box.left, y, "#222222", 1.0);
            svg.text(box.left - 7, y + 4, label, 11, "end");
        } else {
            const double x = box.px(d);
            svg.line(x, box.bottom + 4, x, box.top, "#dddddd", 0.7);
            svg.line(x, box.bottom, x, box.bottom + 4, "#222222", 1.0);
            svg.text(x, box.bottom + 17, label, 11, "middle");
        }
    }
}

std::string table_row(const std::string& app, const std::string& method,
                      const SeriesPoint& point) {
    std::ostringstream out;
    out << app << "  " << method << "  param=" << point.param << "  w1="
        << fmt(point.w1_mean, "%.5g") << " +- " << fmt(point.w1_std, "%.3g")
        << "  time_ms=" << fmt(point.time_mean, "%.4g") << " +- "
        << fmt(point.time_std, "%.3g") << "  reps=" << point.repetitions;
    return out.str();
}

} // namespace

ParetoReport report_pareto(const std::vector<std::string>& csv_paths,
                           const std::string& out_dir) {
    if (csv_paths.empty()) {
        throw ArgumentError("report_pareto: no input CSVs");
    }
    std::filesystem::create_directories(out_dir);

    // Group records by (app, method, param).
    std::map<std::string, std::map<std::string, std::map<std::uint64_t,
        std::vector<metrics::RunRecord>>>> grouped;
    for (const std::string& path : csv_paths) {
        for (metrics::RunRecord& rec : metrics::read_records_csv(path)) {
            grouped[rec.app][rec.method][rec.param].push_back(std::move(rec));
        }
    }

    ParetoReport result;
    result.table_path = out_dir + "/summary.txt";
    std::ofstream table(result.table_path);
    if (!table) {
        throw IoError("report_pareto: cannot open " + result.table_path);
    }

    for (const auto& [app, methods] : grouped) {
        std::vector<Series> app_series;
        for (const auto& [method, params] : methods) {
            Series series;
            series.app = app;
            series.method = method;
            for (const auto& [param, recs] : params) {
                SeriesPoint point;
                point.param = param;
                point.repetitions = recs.size();
                if (recs.size() >= 2) {
                    const auto summary = metrics::summarize(recs);
                    point.w1_mean = summary.w1_mean;
                    point.w1_std = summary.w1_std;
                    point.time_mean = summary.time_mean;
                    point.time_std = summary.time_std;
                } else {
                    point.w1_mean = recs.front().wasserstein;
                    point.time_mean = recs.front().runtime_ms;
                }
                series.points.push_back(point);
            }
            std::sort(series.points.begin(), series.points.end(),
                      [](const SeriesPoint& a, const SeriesPoint& b) {
                          return a.param < b.param;
                      });
            // Trend: mean W1 nonincreasing with the parameter, allowing one
            // pooled standard deviation of slack per adjacent pair.
            series.trend_nonincreasing = true;
            for (std::size_t i = 1; i < series.points.size(); ++i) {
                const auto& prev = series.points[i - 1];
                const auto& cur = series.points[i];
                const double pooled =
                    std::sqrt(0.5 * (prev.w1_std * prev.w1_std + cur.w1_std * cur.w1_std));
                if (cur.w1_mean > prev.w1_mean + pooled) {
                    series.trend_nonincreasing = false;
                }
            }
            app_series.push_back(std::move(series));
        }

        // Summary table section for the app.
        table << "== " << app << " ==\n";
        for (const Series& series : app_series) {
            for (const SeriesPoint& point : series.points) {
                table << table_row(app, series.method, point) << "\n";
            }
            table << "   trend[" << series.method
                  << "]: w1 nonincreasing within +-1 pooled std-dev: "
                  << (series.trend_nonincreasing ? "yes" : "no") << "\n";
        }
        table << "\n";

        // Pareto SVG for the app.
        double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
        for (const Series& series : app_series) {
            for (const SeriesPoint& point : series.points) {
                const double t = std::max(point.time_mean, 1e-6);
                const double w_low = std::max(point.w1_mean - point.w1_std,
                                              point.w1_mean > 0 ? point.w1_mean * 0.1
                                                                : 1e-12);
                const double w_high = point.w1_mean + point.w1_std;
                x_lo = std::min(x_lo, std::log10(t));
                x_hi = std::max(x_hi, std::log10(t));
                y_lo = std::min(y_lo, std::log10(std::max(w_low, 1e-12)));
                y_hi = std::max(y_hi, std::log10(std::max(w_high, 1e-12)));
            }
        }
        if (x_hi <= x_lo) { x_hi = x_lo + 1.0; }
        if (y_hi <= y_lo) { y_hi = y_lo + 1.0; }
        const double x_pad = 0.06 * (x_hi - x_lo);
        const double y_pad = 0.08 * (y_hi - y_lo);

        SvgCanvas svg(640, 440);
        AxisBox box{70, 620, 40, 390, x_lo - x_pad, x_hi + x_pad, y_lo - y_pad,
                    y_hi + y_pad};
        svg.line(box.left, box.bottom, box.right, box.bottom, "#222222", 1.2);
        svg.line(box.left, box.bottom, box.left, box.top, "#222222", 1.2);
        draw_log_axis_ticks(svg, box, false);
        draw_log_axis_ticks(svg, box, true);
        svg.text(0.5 * (box.left + box.right), 425, "mean run time (ms, log scale)", 12,
                 "middle");
        svg.text(14, 0.5 * (box.top + box.bottom), "mean W1 (log scale)", 12, "middle");
        svg.text(0.5 * (box.left + box.right), 22, "accuracy vs run time: " + app, 14,
                 "middle");

        std::size_t color_index = 0;
        double legend_y = box.top + 12;
        for (const Series& series : app_series) {
            const std::string color =
                kSeriesColors[color_index % (sizeof(kSeriesColors) / sizeof(char*))];
            ++color_index;
            std::vector<std::pair<double, double>> pts;
            for (const SeriesPoint& point : series.points) {
                const double x = box.px(std::log10(std::max(point.time_mean, 1e-6)));
                const double y = box.py(std::log10(std::max(point.w1_mean, 1e-12)));
                // Symmetric +-1 std-dev bar, clamped for the log axis.
                const double y_up = box.py(
                    std::log10(std::max(point.w1_mean + point.w1_std, 1e-12)));
                const double y_dn = box.py(std::log10(std::max(
                    point.w1_mean - point.w1_std, point.w1_mean * 0.1 + 1e-15)));
                svg.line(x, y_dn, x, y_up, color, 1.0);
                svg.line(x - 3, y_up, x + 3, y_up, color, 1.0);
                svg.line(x - 3, y_dn, x + 3, y_dn, color, 1.0);
                svg.circle(x, y, 3.2, color);
                pts.emplace_back(x, y);
            }
            svg.polyline(pts, color, 1.0);
            svg.circle(box.left + 12, legend_y - 4, 3.2, color);
            svg.text(box.left + 20, legend_y,
                     series.method + (series.trend_nonincreasing
                                          ? " (w1 trend: nonincreasing)"
                                          : " (w1 trend: mixed)"),
                     11);
            legend_y += 16;
        }

        const std::string svg_path = out_dir + "/pareto_" + app + ".svg";
        svg.save(svg_path);
        result.svg_paths.push_back(svg_path);
        for (Series& series : app_series) {
            result.series.push_back(std::move(series));
        }
    }
    return result;
}

namespace {

void draw_curve_panel(SvgCanvas& svg, double left, double width,
                      const std::function<double(double)>& f, double x_lo, double x_hi,
                      const std::string& title, const std::string& color) {
    const double top = 50;
    const double bottom = 330;
    const int n = 420;
    std::vector<std::pair<double, double>> raw(n);
    double y_max = -1e300;
    double y_min = 1e300;
    for (int i = 0; i < n; ++i) {
        const double x = x_lo + (x_hi - x_lo) * (i + 0.5) / n;
        const double y = f(x);
        raw[i] = {x, y};
        y_max = std::max(y_max, y);
        y_min = std::min(y_min, y);
    }
    if (y_max <= y_min) {
        y_max = y_min + 1.0;
    }
    const double y_span = y_max - y_min;
    AxisBox box{left + 12, left + width - 12, top, bottom,
                x_lo, x_hi, y_min - 0.05 * y_span, y_max + 0.08 * y_span};
    svg.line(box.left, box.bottom, box.right, box.bottom, "#222222", 1.0);
    svg.line(box.left, box.bottom, box.left, box.top, "#222222", 1.0);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(raw.size());
    for (const auto& [x, y] : raw) {
        pts.emplace_back(box.px(x), box.py(y));
    }
    svg.polyline(pts, color, 1.6);
    svg.text(left + width / 2, 30, title, 13, "middle");
    svg.text(box.left, bottom + 18, fmt(x_lo), 10);
    svg.text(box.right, bottom + 18, fmt(x_hi), 10, "end");
}

} // namespace

void plot_pushforward(bench::App app, const std::string& out_path) {
    SvgCanvas svg(1020, 370);
    if (app == bench::App::ConvergenceChallenge) {
        const Dist input = bench::challenge_input_mixture();
        const Transform f = sigmoid_transform();
        const AnalyticDensity output = pushforward_density(input, f);
        draw_curve_panel(svg, 0, 340, [&input](double x) { return input.pdf(x); },
                         -4.5, 5.0, "input density", "#1f6fb4");
        draw_curve_panel(svg, 340, 340, [&f](double x) { return f(x); }, -4.5, 5.0,
                         "transform", "#d1495b");
        draw_curve_panel(svg, 680, 340, [&output](double y) { return output(y); },
                         1e-4, 1.0 - 1e-4, "output density", "#222222");
    } else if (app == bench::App::Poiseuille) {
        // Marginal view: the cannula radius (the dominant nonlinearity)
        // pushed through r -> (pi dP/(8 mu l)) r^4 with other inputs at
        // their means.
        const Dist radius = Dist::uniform(0.0845, 0.0855);
        const double scale = std::numbers::pi * 5500000.0 / (8.0 * 4.0 * 7.0);
        Transform quartic = transforms::power_int(4);
        Transform mean_map(
            "mean-field", [scale, quartic](double r) { return scale * quartic(r); },
            [scale](double q) { return std::pow(q / scale, 0.25); },
            [scale](double r) { return scale * 4.0 * r * r * r; },
            Monotonicity::Increasing);
        const AnalyticDensity output = pushforward_density(radius, mean_map);
        draw_curve_panel(svg, 0, 340, [&radius](double r) { return radius.pdf(r); },
                         0.0843, 0.0857, "radius density", "#1f6fb4");
        draw_curve_panel(svg, 340, 340, [&mean_map](double r) { return mean_map(r); },
                         0.0843, 0.0857, "mean-field flow map", "#d1495b");
        const double q_lo = output.support().lower;
        const double q_hi = output.support().upper;
        draw_curve_panel(svg, 680, 340, [&output](double q) { return output(q); },
                         q_lo - 0.04 * (q_hi - q_lo), q_hi + 0.04 * (q_hi - q_lo),
                         "flow-rate density", "#222222");
    } else {
        throw ArgumentError("plot_pushforward: unsupported app '" +
                            bench::app_name(app) + "'");
    }
    svg.save(out_path);
}

} // namespace uprop::report
