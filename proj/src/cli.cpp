#include "persist/cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "persist/report.hpp"

namespace persist {

namespace {

using nlohmann::json;

struct Options {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int jobs = 1;
    std::string factor;
    std::optional<double> center;
    std::string objective = "max-graduates";
    std::optional<int> reps;
    std::string kind;
    std::string in_path;
    std::string out_path;
};

CliConfig effective_config(const Options& o)
{
    CliConfig c = o.config_path.empty() ? CliConfig{} : load_config(o.config_path);
    c.sim.seed = o.seed;
    c.sweep.base_config = c.sim;
    c.sweep.master_seed = o.seed;
    c.search.base_config = c.sim;
    c.search.master_seed = o.seed;
    c.calibration.base_config = c.sim;
    c.calibration.master_seed = o.seed;
    return c;
}

std::filesystem::path prepare_out_dir(const Options& o)
{
    std::error_code ec;
    std::filesystem::create_directories(o.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + o.out_dir + "': " + ec.message());
    }
    return o.out_dir;
}

json manifest(std::string_view command, const CliConfig& c, const Options& o, json spec)
{
    return json{{"command", command},
                {"engine_version", kEngineVersion},
                {"master_seed", o.seed},
                {"config", to_json(c.sim)},
                {"spec", std::move(spec)},
                {"fitted_hazards", to_json(HazardVector::fitted())}};
}

json levels_json(const std::vector<double>& levels) { return json(levels); }

int cmd_run(const Options& o, std::ostream& out)
{
    const CliConfig c = effective_config(o);
    c.sim.validate();
    const auto dir = prepare_out_dir(o);
    std::vector<TraceRecord> trace;
    std::vector<LinkEndpoint> links;
    const RunResult r = run(c.sim, trace, &links);

    write_json(dir / "result.json", to_json(r));
    write_csv(dir / "trace.csv", to_csv(trace));
    CsvTable link_csv{{"run_seed", "student_id", "partner_id", "partner_role"}, {}};
    for (const LinkEndpoint& l : links) {
        link_csv.rows.push_back({std::to_string(c.sim.seed), std::to_string(l.student), std::to_string(l.partner),
                                 l.partner_is_teacher ? "teacher" : "student"});
    }
    write_csv(dir / "links.csv", link_csv);
    write_json(dir / "manifest.json", manifest("run", c, o, json::object()));

    out << "command=run seed=" << o.seed << " attended=" << r.attended << " graduates=" << r.graduates
        << " quitters=" << r.quitters << " never_attended=" << r.never_attended << "\n";
    return 0;
}

int cmd_sweep(const Options& o, std::ostream& out)
{
    CliConfig c = effective_config(o);
    c.sweep.varied_factor = parse_factor(o.factor);
    if (o.reps) {
        c.sweep.repetitions = *o.reps;
    }
    c.sweep.validate();
    const auto dir = prepare_out_dir(o);
    const SweepResult result = sweep(c.sweep, o.jobs);

    const std::string name = "sweep_" + o.factor + ".csv";
    write_csv(dir / name, to_csv(result.table));
    write_json(dir / "manifest.json",
               manifest("sweep", c, o,
                        json{{"factor", o.factor},
                             {"levels", levels_json(c.sweep.levels)},
                             {"fixed_level", c.sweep.fixed_level},
                             {"repetitions", c.sweep.repetitions}}));
    out << "command=sweep factor=" << o.factor << " seed=" << o.seed << " levels=" << c.sweep.levels.size()
        << " reps=" << c.sweep.repetitions << " rows=" << result.table.rows.size() << " csv=" << name << "\n";
    return 0;
}

int cmd_sensitivity(const Options& o, std::ostream& out)
{
    CliConfig c = effective_config(o);
    const Factor factor = parse_factor(o.factor);
    const double center = o.center.value_or(c.sensitivity_center);
    const int reps = o.reps.value_or(c.sensitivity_repetitions);
    c.sim.validate();
    const auto dir = prepare_out_dir(o);
    const SensitivityResult result = sensitivity(c.sim, factor, center, reps, o.seed, o.jobs, c.sweep.fixed_level);

    const std::string name = "sensitivity_" + o.factor + ".csv";
    write_csv(dir / name, to_csv(result.table));
    std::vector<double> levels(result.levels.begin(), result.levels.end());
    write_json(dir / "manifest.json", manifest("sensitivity", c, o,
                                               json{{"factor", o.factor},
                                                    {"center", center},
                                                    {"levels", levels_json(levels)},
                                                    {"clamped", result.clamped},
                                                    {"fixed_level", c.sweep.fixed_level},
                                                    {"repetitions", reps}}));
    out << "command=sensitivity factor=" << o.factor << " seed=" << o.seed << " center=" << format_number(center)
        << " levels=" << format_number(levels[0]) << "," << format_number(levels[1]) << ","
        << format_number(levels[2]) << " clamped=" << (result.clamped ? "true" : "false") << " reps=" << reps
        << " csv=" << name << "\n";
    return 0;
}

int cmd_calibrate(const Options& o, std::ostream& out)
{
    CliConfig c = effective_config(o);
    if (o.reps) {
        c.calibration.replicates = *o.reps;
    }
    c.sim.validate();
    const auto dir = prepare_out_dir(o);
    const CalibrationResult r = calibrate(c.calibration, c.hazard_space, o.jobs);

    write_json(dir / "calibration.json", to_json(r));
    json m = manifest("calibrate", c, o,
                      json{{"point", to_json(c.calibration.point)},
                           {"graduate_rate_target", c.calibration.graduate_rate},
                           {"quitter_rate_target", c.calibration.quitter_rate},
                           {"replicates", c.calibration.replicates},
                           {"search_space", json{{"lo", c.hazard_space.lo},
                                                 {"hi", c.hazard_space.hi},
                                                 {"step", c.hazard_space.step}}}});
    m["fitted_hazards"] = to_json(r.hazards);
    write_json(dir / "manifest.json", m);
    out << "command=calibrate seed=" << o.seed << " h1=" << format_number(r.hazards.h[0])
        << " h2=" << format_number(r.hazards.h[1]) << " h3=" << format_number(r.hazards.h[2])
        << " h4=" << format_number(r.hazards.h[3]) << " graduate_rate=" << format_number(r.graduate_rate)
        << " quitter_rate=" << format_number(r.quitter_rate) << " residual=" << format_number(r.residual)
        << " feasible=" << (r.feasible ? "true" : "false") << "\n";
    return 0;
}

int cmd_search(const Options& o, std::ostream& out)
{
    CliConfig c = effective_config(o);
    c.search.objective = parse_objective(o.objective);
    if (o.reps) {
        c.search.fitness_replicates = *o.reps;
    }
    c.search.validate();
    const auto dir = prepare_out_dir(o);
    const SearchOutcome r = run_searches(c.search, o.jobs);

    write_csv(dir / "trajectory.csv", to_csv(r.trajectory));
    write_json(dir / "search_summary.json", to_json(r));
    write_json(dir / "manifest.json", manifest("search", c, o,
                                               json{{"objective", o.objective},
                                                    {"grid_step", c.search.grid_step},
                                                    {"fitness_replicates", c.search.fitness_replicates},
                                                    {"num_searches", c.search.num_searches},
                                                    {"max_evaluations", c.search.max_evaluations}}));
    const FactorVector& b = r.best_point;
    out << "command=search objective=" << o.objective << " seed=" << o.seed << " best_goal=" << format_number(b.goal)
        << " best_academic=" << format_number(b.academic_experience_init)
        << " best_skill=" << format_number(b.social_skill)
        << " best_integration=" << format_number(b.social_integration_init)
        << " best_fitness=" << format_number(r.best_fitness) << "\n";
    return 0;
}

int cmd_plot(const Options& o, std::ostream& out)
{
    const PlotKind kind = parse_plot_kind(o.kind);
    const PlotSpec spec = PlotSpec::defaults(kind);
    const CsvTable csv = read_csv(o.in_path);
    const std::string svg = kind == PlotKind::SearchTrajectory ? render_svg(trajectory_from_csv(csv), spec)
                                                               : render_svg(experiment_from_csv(csv), spec);
    write_text_file(o.out_path, svg);
    out << "command=plot kind=" << o.kind << " out=" << std::filesystem::path(o.out_path).filename().string() << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Agent-based simulation of post-secondary persistence", "persist"};
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* sub, bool with_jobs) {
        sub->add_option("--config", o.config_path, "Key/value config file (defaults: baseline population)");
        sub->add_option("--seed", o.seed, "Master seed")->required();
        sub->add_option("--out-dir", o.out_dir, "Directory for artifacts")->capture_default_str();
        if (with_jobs) {
            sub->add_option("--jobs", o.jobs, "Worker threads; results do not depend on it")
                ->check(CLI::PositiveNumber)
                ->capture_default_str();
        }
    };

    CLI::App* run_cmd = app.add_subcommand("run", "One simulation run with per-tick trace");
    common(run_cmd, true);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "One-factor sweep over levels 0.1..1.0");
    common(sweep_cmd, true);
    sweep_cmd->add_option("--factor", o.factor, "Factor to vary")->required();
    sweep_cmd->add_option("--reps", o.reps, "Repetitions per level");

    CLI::App* sens_cmd = app.add_subcommand("sensitivity", "+-10% sensitivity around a center level");
    common(sens_cmd, true);
    sens_cmd->add_option("--factor", o.factor, "Factor to perturb")->required();
    sens_cmd->add_option("--center", o.center, "Center level");
    sens_cmd->add_option("--reps", o.reps, "Repetitions per level");

    CLI::App* cal_cmd = app.add_subcommand("calibrate", "Fit the hazard vector to the target graduate and quitter rates");
    common(cal_cmd, true);
    cal_cmd->add_option("--reps", o.reps, "Replicates per candidate");

    CLI::App* search_cmd = app.add_subcommand("search", "Random-restart hill climbing over the factor grid");
    common(search_cmd, true);
    search_cmd->add_option("--objective", o.objective, "max-graduates or min-quitters")->capture_default_str();
    search_cmd->add_option("--reps", o.reps, "Replicates per fitness evaluation");

    CLI::App* plot_cmd = app.add_subcommand("plot", "Render a CSV artifact as SVG");
    plot_cmd->add_option("--kind", o.kind, "per-year, graduated-departed, sensitivity or trajectory")->required();
    plot_cmd->add_option("--in", o.in_path, "Input CSV")->required();
    plot_cmd->add_option("--out", o.out_path, "Output SVG")->required();

    std::vector<const char*> argv;
    argv.push_back("persist");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(o, out);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(o, out);
        }
        if (sens_cmd->parsed()) {
            return cmd_sensitivity(o, out);
        }
        if (cal_cmd->parsed()) {
            return cmd_calibrate(o, out);
        }
        if (search_cmd->parsed()) {
            return cmd_search(o, out);
        }
        return cmd_plot(o, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace persist
