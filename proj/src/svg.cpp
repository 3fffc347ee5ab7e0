#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "persist/report.hpp"

namespace persist {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 190;  // legend column
constexpr double kTop = 44;
constexpr double kBottom = 60;
constexpr std::size_t kMaxMarkedPoints = 50;

constexpr std::array<const char*, 10> kPalette = {"#000000", "#1f77b4", "#2ca02c", "#d62728", "#9467bd",
                                                  "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded(double lo, double hi)
{
    if (hi - lo < 1e-12) {
        return {lo - 0.5, hi + 0.5};
    }
    return {lo, hi};
}

// 1, 2 or 5 times a power of ten, giving about five intervals over `span`.
double nice_step(double span)
{
    const double raw = span / 5.0;
    const double base = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (m * base >= raw) {
            return m * base;
        }
    }
    return 10.0 * base;
}

std::vector<double> ticks(Range r)
{
    const double step = nice_step(r.hi - r.lo);
    std::vector<double> out;
    for (double k = std::ceil(r.lo / step - 1e-9); k * step <= r.hi + 1e-9 * step; k += 1.0) {
        out.push_back(k * step + 0.0);  // no "-0" labels
    }
    return out;
}

class Canvas {
public:
    Canvas(Range x, Range y) : x_(x), y_(y)
    {
        // Round the value axis up to a whole tick.
        const double step = nice_step(y_.hi - y_.lo);
        y_.hi = std::ceil(y_.hi / step - 1e-9) * step;
    }

    double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

    void frame(const PlotSpec& spec, bool numeric_x)
    {
        body_ += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
                 escape(spec.title) + "</text>\n";
        const double x0 = kLeft;
        const double x1 = kWidth - kRight;
        const double y0 = kHeight - kBottom;
        const double y1 = kTop;
        body_ += "<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
        body_ += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" + fmt(y0) + "\"/>\n";
        body_ += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y1) + "\"/>\n";
        body_ += "</g>\n";
        for (double v : ticks(y_)) {
            body_ += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(py(v) + 4) +
                     "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(v) + "</text>\n";
        }
        if (numeric_x) {
            for (double v : ticks(x_)) {
                body_ += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(y0 + 16) +
                         "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(v) + "</text>\n";
            }
        }
        body_ += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(kHeight - 16) +
                 "\" text-anchor=\"middle\" font-size=\"13\">" + escape(spec.x_label) + "</text>\n";
        body_ += "<text x=\"18\" y=\"" + fmt((y0 + y1) / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
                 fmt((y0 + y1) / 2) + ")\">" + escape(spec.y_label) + "</text>\n";
    }

    void legend_entry(std::size_t index, std::string_view label, const char* color)
    {
        const double y = kTop + 14 + 18 * static_cast<double>(index);
        const double x = kWidth - kRight + 16;
        body_ += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x + 20) + "\" y2=\"" + fmt(y) +
                 "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        body_ += "<text x=\"" + fmt(x + 26) + "\" y=\"" + fmt(y + 4) + "\" font-size=\"11\">" + escape(label) + "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const char* color)
    {
        body_ += "<polyline class=\"series\" fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            body_ += (i ? " " : "") + fmt(px(pts[i].first)) + "," + fmt(py(pts[i].second));
        }
        body_ += "\"/>\n";
        // Dense lines (search trajectories) read better without markers.
        if (pts.size() <= kMaxMarkedPoints) {
            for (const auto& [x, y] : pts) {
                marker(px(x), py(y), color);
            }
        }
    }

    void marker(double x, double y, const char* color)
    {
        body_ += "<circle class=\"marker\" cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }

    void raw(std::string_view s) { body_ += s; }

    std::string finish() const
    {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
               fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) +
               "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" + body_ +
               "</svg>\n";
    }

private:
    Range x_;
    Range y_;
    std::string body_;
};

std::vector<std::string> metrics_in(const ExperimentTable& table)
{
    std::vector<std::string> out;
    for (const TableRow& r : table.rows) {
        if (std::find(out.begin(), out.end(), r.metric) == out.end()) {
            out.push_back(r.metric);
        }
    }
    return out;
}

void check_series(const std::vector<std::string>& requested, const std::vector<std::string>& available)
{
    if (requested.empty()) {
        throw ConfigError("plot needs at least one series");
    }
    for (const std::string& s : requested) {
        if (std::find(available.begin(), available.end(), s) == available.end()) {
            std::string list;
            for (const std::string& a : available) {
                list += (list.empty() ? "" : ", ") + a;
            }
            throw ConfigError("unknown series '" + s + "' (available: " + list + ")");
        }
    }
}

struct Line {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

std::string render_lines(const std::vector<Line>& lines, const PlotSpec& spec)
{
    double xlo = 1e300, xhi = -1e300, yhi = -1e300, ylo = 0.0;
    for (const Line& l : lines) {
        for (const auto& [x, y] : l.points) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            yhi = std::max(yhi, y);
            ylo = std::min(ylo, y);
        }
    }
    Canvas canvas(padded(xlo, xhi), padded(ylo, yhi * 1.05));
    canvas.frame(spec, true);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const char* color = kPalette[i % kPalette.size()];
        canvas.polyline(lines[i].points, color);
        canvas.legend_entry(i, lines[i].label, color);
    }
    return canvas.finish();
}

std::vector<std::string> factors_in(const ExperimentTable& table)
{
    std::vector<std::string> out;
    for (const TableRow& r : table.rows) {
        if (std::find(out.begin(), out.end(), r.factor) == out.end()) {
            out.push_back(r.factor);
        }
    }
    return out;
}

std::string render_table_lines(const ExperimentTable& table, const PlotSpec& spec)
{
    const auto factors = factors_in(table);
    std::vector<Line> lines;
    for (const std::string& m : spec.series) {
        for (const std::string& f : factors) {
            std::map<int, Line> by_year;
            for (const TableRow& r : table.rows) {
                if (r.metric == m && r.factor == f) {
                    by_year[r.year].points.emplace_back(r.level, r.stats.mean);
                }
            }
            for (auto& [year, line] : by_year) {
                line.label = (factors.size() > 1 ? f + " " : std::string()) + m +
                             (year > 0 ? " year " + std::to_string(year) : std::string());
                std::sort(line.points.begin(), line.points.end());
                lines.push_back(std::move(line));
            }
        }
    }
    return render_lines(lines, spec);
}

std::string render_boxplot(const ExperimentTable& table, const PlotSpec& spec)
{
    const std::string& m = spec.series.front();
    std::vector<const TableRow*> boxes;
    bool has_total = false;
    for (const TableRow& r : table.rows) {
        has_total = has_total || (r.metric == m && r.year == 0);
    }
    for (const TableRow& r : table.rows) {
        if (r.metric == m && (r.year == 0 || !has_total)) {
            boxes.push_back(&r);
        }
    }
    double yhi = 0.0;
    for (const TableRow* b : boxes) {
        yhi = std::max(yhi, b->stats.max);
    }
    const auto n = static_cast<double>(boxes.size());
    Canvas canvas(Range{0.0, n}, padded(0.0, yhi * 1.1));
    canvas.frame(spec, false);
    const double slot = (kWidth - kLeft - kRight) / n;
    const double half = std::min(slot * 0.3, 30.0);

    std::map<std::string, std::vector<std::size_t>> by_factor;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const TableRow& r = *boxes[i];
        const Summary& s = r.stats;
        const double cx = canvas.px(static_cast<double>(i) + 0.5);
        const std::string x = fmt(cx);
        canvas.raw("<g class=\"box\" stroke=\"#000000\" fill=\"none\">\n");
        canvas.raw("<line x1=\"" + x + "\" y1=\"" + fmt(canvas.py(s.min)) + "\" x2=\"" + x + "\" y2=\"" +
                   fmt(canvas.py(s.q1)) + "\"/>\n");
        canvas.raw("<line x1=\"" + x + "\" y1=\"" + fmt(canvas.py(s.q3)) + "\" x2=\"" + x + "\" y2=\"" +
                   fmt(canvas.py(s.max)) + "\"/>\n");
        for (double w : {s.min, s.max}) {
            canvas.raw("<line x1=\"" + fmt(cx - half / 2) + "\" y1=\"" + fmt(canvas.py(w)) + "\" x2=\"" +
                       fmt(cx + half / 2) + "\" y2=\"" + fmt(canvas.py(w)) + "\"/>\n");
        }
        canvas.raw("<rect x=\"" + fmt(cx - half) + "\" y=\"" + fmt(canvas.py(s.q3)) + "\" width=\"" + fmt(2 * half) +
                   "\" height=\"" + fmt(canvas.py(s.q1) - canvas.py(s.q3)) + "\" fill=\"#c6dbef\"/>\n");
        canvas.raw("<line class=\"median\" x1=\"" + fmt(cx - half) + "\" y1=\"" + fmt(canvas.py(s.median)) +
                   "\" x2=\"" + fmt(cx + half) + "\" y2=\"" + fmt(canvas.py(s.median)) + "\" stroke-width=\"2\"/>\n");
        canvas.raw("</g>\n");
        canvas.marker(cx, canvas.py(s.mean), kPalette[3]);
        canvas.raw("<text x=\"" + x + "\" y=\"" + fmt(kHeight - kBottom + 16) +
                   "\" text-anchor=\"middle\" font-size=\"11\">" + escape(r.factor.substr(0, 12)) + " " +
                   tick_label(r.level) + "</text>\n");
        by_factor[r.factor].push_back(i);
    }
    // Error bar over the middle level spanning the mean response across the
    // perturbed levels (the +-10 % range for a sensitivity table).
    for (const auto& [factor, idx] : by_factor) {
        if (idx.size() < 2) {
            continue;
        }
        double lo = 1e300, hi = -1e300;
        for (std::size_t i : idx) {
            lo = std::min(lo, boxes[i]->stats.mean);
            hi = std::max(hi, boxes[i]->stats.mean);
        }
        const double cx = canvas.px(static_cast<double>(idx[idx.size() / 2]) + 0.5) + half + 8;
        canvas.raw("<g class=\"errorbar\" stroke=\"" + std::string(kPalette[3]) + "\" stroke-width=\"1.5\">\n");
        canvas.raw("<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(canvas.py(lo)) + "\" x2=\"" + fmt(cx) + "\" y2=\"" +
                   fmt(canvas.py(hi)) + "\"/>\n");
        for (double v : {lo, hi}) {
            canvas.raw("<line x1=\"" + fmt(cx - 4) + "\" y1=\"" + fmt(canvas.py(v)) + "\" x2=\"" + fmt(cx + 4) +
                       "\" y2=\"" + fmt(canvas.py(v)) + "\"/>\n");
        }
        canvas.raw("</g>\n");
    }
    canvas.legend_entry(0, "mean", kPalette[3]);
    canvas.legend_entry(1, "+-10% range of means", kPalette[3]);
    return canvas.finish();
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name)
{
    for (PlotKind k : {PlotKind::PerYearLines, PlotKind::GraduatedDepartedLines, PlotKind::SensitivityBoxplot,
                       PlotKind::SearchTrajectory}) {
        if (plot_kind_name(k) == name) {
            return k;
        }
    }
    throw ConfigError("unknown plot kind '" + std::string(name) +
                      "' (valid: per-year, graduated-departed, sensitivity, trajectory)");
}

std::string_view plot_kind_name(PlotKind kind) noexcept
{
    switch (kind) {
    case PlotKind::PerYearLines:
        return "per-year";
    case PlotKind::GraduatedDepartedLines:
        return "graduated-departed";
    case PlotKind::SensitivityBoxplot:
        return "sensitivity";
    case PlotKind::SearchTrajectory:
        return "trajectory";
    }
    return "?";
}

PlotSpec PlotSpec::defaults(PlotKind kind)
{
    switch (kind) {
    case PlotKind::PerYearLines:
        return {kind, "Students persisting by year", "factor level", "mean students", {"persisted"}};
    case PlotKind::GraduatedDepartedLines:
        return {kind, "Graduated and departed students", "factor level", "mean students", {"graduates", "quitters"}};
    case PlotKind::SensitivityBoxplot:
        return {kind, "Departures under +-10% factor change", "factor level", "departed students", {"quitters"}};
    case PlotKind::SearchTrajectory:
        break;
    }
    return {PlotKind::SearchTrajectory, "Behaviour search progress", "evaluation", "best fitness so far", {"best_so_far"}};
}

std::string render_svg(const ExperimentTable& table, const PlotSpec& spec)
{
    if (table.rows.empty()) {
        throw ConfigError("cannot plot an empty table");
    }
    if (spec.kind == PlotKind::SearchTrajectory) {
        throw ConfigError("trajectory plots take a trajectory CSV, not an experiment table");
    }
    check_series(spec.series, metrics_in(table));
    if (spec.kind == PlotKind::SensitivityBoxplot) {
        return render_boxplot(table, spec);
    }
    return render_table_lines(table, spec);
}

std::string render_svg(const std::vector<TrajectoryEntry>& trajectory, const PlotSpec& spec)
{
    if (trajectory.empty()) {
        throw ConfigError("cannot plot an empty trajectory");
    }
    if (spec.kind != PlotKind::SearchTrajectory) {
        throw ConfigError("experiment-table plots take an experiment CSV, not a trajectory");
    }
    check_series(spec.series, {"best_so_far", "fitness"});
    std::vector<Line> lines;
    for (const std::string& s : spec.series) {
        std::map<int, Line> by_search;
        for (const TrajectoryEntry& t : trajectory) {
            by_search[t.search_id].points.emplace_back(t.evaluation, s == "fitness" ? t.fitness : t.best_so_far);
        }
        for (auto& [id, line] : by_search) {
            line.label = "search " + std::to_string(id) + (spec.series.size() > 1 ? " " + s : std::string());
            lines.push_back(std::move(line));
        }
    }
    return render_lines(lines, spec);
}

}  // namespace persist
