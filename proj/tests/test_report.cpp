#include "doctest.h"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "persist/report.hpp"

using namespace persist;

namespace {

namespace fs = std::filesystem;

std::size_t count_of(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

/// y coordinates of every polyline, in document order.
std::vector<std::vector<double>> polyline_ys(const std::string& svg)
{
    std::vector<std::vector<double>> out;
    const std::string tag = "<polyline class=\"series\"";
    for (auto pos = svg.find(tag); pos != std::string::npos; pos = svg.find(tag, pos + 1)) {
        const auto start = svg.find("points=\"", pos) + 8;
        const auto end = svg.find('"', start);
        std::istringstream in(svg.substr(start, end - start));
        std::vector<double> ys;
        std::string pair;
        while (in >> pair) {
            ys.push_back(std::stod(pair.substr(pair.find(',') + 1)));
        }
        out.push_back(ys);
    }
    return out;
}

bool well_formed(const std::string& svg)
{
    try {
        std::istringstream in(svg);
        boost::property_tree::ptree tree;
        boost::property_tree::read_xml(in, tree);
        return tree.count("svg") == 1;
    } catch (const std::exception&) {
        return false;
    }
}

ExperimentTable random_table(Rng& rng, int rows)
{
    ExperimentTable t;
    for (int i = 0; i < rows; ++i) {
        TableRow r;
        r.factor = std::string(factor_name(kAllFactors[rng.below(4)]));
        r.level = rng.uniform01();
        r.metric = rng.bernoulli(0.5) ? "persisted" : "quitters";
        r.year = rng.uniform_int(0, 4);
        r.stats = {rng.uniform01() * 200, rng.uniform01() * 20, rng.uniform01() * 1e-3, rng.uniform01(),
                   rng.uniform01() * 1e5, 123456789.0 * rng.uniform01(), 0.0, rng.uniform_int(1, 500)};
        t.rows.push_back(r);
    }
    return t;
}

bool close6(double a, double b) { return std::abs(a - b) <= 5e-6 * std::max(std::abs(a), std::abs(b)); }

SweepResult small_sweep()
{
    SweepSpec spec;
    spec.master_seed = 7;
    return sweep(spec);
}

}  // namespace

TEST_SUITE("report")
{
    TEST_CASE("numbers are printed with six significant digits")
    {
        CHECK(format_number(0.5) == "0.5");
        CHECK(format_number(156.96) == "156.96");
        CHECK(format_number(1.0 / 3.0) == "0.333333");
        CHECK(format_number(1234567.0) == "1.23457e+06");
        CHECK(format_number(0.0) == "0");
    }

    TEST_CASE("experiment tables survive a CSV round trip")
    {
        Rng rng(606);
        for (int trial = 0; trial < 100; ++trial) {
            const ExperimentTable t = random_table(rng, rng.uniform_int(0, 30));
            const std::string text = to_csv_text(to_csv(t));
            const ExperimentTable back = experiment_from_csv(parse_csv_text(text));
            REQUIRE(back.rows.size() == t.rows.size());
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                const TableRow& a = t.rows[i];
                const TableRow& b = back.rows[i];
                CHECK(a.factor == b.factor);
                CHECK(a.metric == b.metric);
                CHECK(a.year == b.year);
                CHECK(a.stats.n == b.stats.n);
                CHECK(close6(a.level, b.level));
                CHECK(close6(a.stats.mean, b.stats.mean));
                CHECK(close6(a.stats.q3, b.stats.q3));
                CHECK(close6(a.stats.min, b.stats.min));
            }
            // Once rounded, further round trips are exact.
            CHECK(to_csv_text(to_csv(back)) == text);
        }
    }

    TEST_CASE("an empty table writes only the header")
    {
        const std::string text = to_csv_text(to_csv(ExperimentTable{}));
        CHECK(text == "factor,level,metric,year,mean,sd,min,q1,median,q3,max,reps\n");
        CHECK(experiment_from_csv(parse_csv_text(text)).rows.empty());
    }

    TEST_CASE("schema mismatches name the column")
    {
        CsvTable csv = to_csv(ExperimentTable{});
        csv.header[4] = "average";
        try {
            experiment_from_csv(csv);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("mean") != std::string::npos);
        }
        csv = to_csv(ExperimentTable{});
        csv.header.push_back("extra");
        CHECK_THROWS_WITH_AS(experiment_from_csv(csv), doctest::Contains("extra"), SchemaError);

        csv = to_csv(ExperimentTable{});
        csv.rows.push_back({"goal", "x", "persisted", "1", "1", "1", "1", "1", "1", "1", "1", "1"});
        CHECK_THROWS_WITH_AS(experiment_from_csv(csv), doctest::Contains("level"), SchemaError);
        CHECK_THROWS_AS(parse_csv_text(""), SchemaError);
    }

    TEST_CASE("trajectory and trace tables round trip")
    {
        std::vector<TrajectoryEntry> traj{{0, 1, {0.1, 0.2, 0.3, 0.4}, 55.5, 55.5}, {0, 2, {1, 1, 1, 1}, 80.1, 80.1}};
        CHECK(trajectory_from_csv(parse_csv_text(to_csv_text(to_csv(traj)))) == traj);

        SimConfig c = baseline_config();
        c.grid = GridSpec{};
        c.num_agents = 30;
        std::vector<TraceRecord> trace;
        run(c, trace);
        CHECK(trace_from_csv(parse_csv_text(to_csv_text(to_csv(trace)))) == trace);
        c.grid.reset();
        trace.clear();
        run(c, trace);
        CHECK(trace_from_csv(parse_csv_text(to_csv_text(to_csv(trace)))) == trace);
    }

    TEST_CASE("sweep rows are reproducible from the exported trace")
    {
        SweepSpec spec;
        spec.levels = {0.3, 0.8};
        spec.repetitions = 4;
        spec.master_seed = 12;
        const SweepResult r = sweep(spec);
        for (std::size_t l = 0; l < spec.levels.size(); ++l) {
            std::vector<double> grads;
            for (int rep = 0; rep < spec.repetitions; ++rep) {
                const SimConfig c = spec.config_for(l, rep);
                std::vector<TraceRecord> trace;
                run(c, trace);
                const auto back = trace_from_csv(parse_csv_text(to_csv_text(to_csv(trace))));
                grads.push_back(tally_trace(back, c.seed).graduates);
            }
            CHECK(r.table.find("goal", spec.levels[l], metric::kGraduates, 0)->stats == summarize(grads));
        }
    }

    TEST_CASE("file I/O reports unwritable paths")
    {
        CHECK_THROWS_AS(write_csv("/nonexistent-dir/x.csv", CsvTable{{"a"}, {}}), IoError);
        CHECK_THROWS_AS(read_csv("/nonexistent-dir/x.csv"), IoError);
        const fs::path tmp = fs::temp_directory_path() / "persist_report_test.csv";
        const CsvTable t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
        write_csv(tmp, t);
        CHECK(read_csv(tmp) == t);
        fs::remove(tmp);
    }

    TEST_CASE("json documents")
    {
        const nlohmann::json h = to_json(HazardVector::fitted());
        CHECK(h.size() == 4);
        RunResult r;
        r.attended = 3;
        r.graduates = 2;
        r.quitters = 1;
        const nlohmann::json j = to_json(r);
        CHECK(j.at("attended") == 3);
        CHECK(j.at("graduates") == 2);
        CHECK(to_json(baseline_config()).at("num_agents") == 200);
    }

    TEST_CASE("a single-point series has one marker")
    {
        ExperimentTable t;
        t.rows.push_back({"goal", 0.5, "graduates", 0, summarize(std::vector<double>{3.0})});
        PlotSpec spec = PlotSpec::defaults(PlotKind::GraduatedDepartedLines);
        spec.series = {"graduates"};
        const std::string svg = render_svg(t, spec);
        CHECK(count_of(svg, "<circle class=\"marker\"") == 1);
        CHECK(well_formed(svg));
    }

    TEST_CASE("rendering is byte-identical and well formed for every kind")
    {
        const SweepResult sw = small_sweep();
        for (PlotKind kind : {PlotKind::PerYearLines, PlotKind::GraduatedDepartedLines}) {
            const PlotSpec spec = PlotSpec::defaults(kind);
            const std::string a = render_svg(sw.table, spec);
            CHECK(a == render_svg(sw.table, spec));
            CHECK(well_formed(a));
        }
        const SensitivityResult sens = sensitivity(baseline_config(), Factor::Goal, 0.5, 10, 3);
        const std::string box = render_svg(sens.table, PlotSpec::defaults(PlotKind::SensitivityBoxplot));
        CHECK(well_formed(box));
        CHECK(count_of(box, "<g class=\"box\"") == 3);
        CHECK(count_of(box, "<g class=\"errorbar\"") == 1);

        SearchSpec s;
        s.num_searches = 2;
        const SearchOutcome o = run_searches(s);
        const std::string traj = render_svg(o.trajectory, PlotSpec::defaults(PlotKind::SearchTrajectory));
        CHECK(well_formed(traj));
        CHECK(count_of(traj, "<polyline class=\"series\"") == 2);
        CHECK(traj == render_svg(o.trajectory, PlotSpec::defaults(PlotKind::SearchTrajectory)));
    }

    TEST_CASE("goal sweep plot draws four per-year lines with year 1 on top")
    {
        const SweepResult sw = small_sweep();
        const std::string svg = render_svg(sw.table, PlotSpec::defaults(PlotKind::PerYearLines));
        const auto lines = polyline_ys(svg);
        REQUIRE(lines.size() == 4);
        for (std::size_t level = 0; level < lines[0].size(); ++level) {
            for (std::size_t y = 1; y < 4; ++y) {
                // SVG y grows downwards.
                CHECK(lines[0][level] < lines[y][level]);
            }
        }
    }

    TEST_CASE("unknown series and kinds are descriptive errors")
    {
        const SweepResult sw = small_sweep();
        PlotSpec spec = PlotSpec::defaults(PlotKind::PerYearLines);
        spec.series = {"happiness"};
        CHECK_THROWS_WITH_AS(render_svg(sw.table, spec), doctest::Contains("happiness"), ConfigError);
        CHECK_THROWS_WITH_AS(render_svg(sw.table, spec), doctest::Contains("available: persisted"), ConfigError);
        CHECK_THROWS_AS(parse_plot_kind("pie"), ConfigError);
        CHECK_THROWS_AS(render_svg(ExperimentTable{}, PlotSpec::defaults(PlotKind::PerYearLines)), ConfigError);
        for (PlotKind k : {PlotKind::PerYearLines, PlotKind::GraduatedDepartedLines, PlotKind::SensitivityBoxplot,
                           PlotKind::SearchTrajectory}) {
            CHECK(parse_plot_kind(plot_kind_name(k)) == k);
        }
    }
}
