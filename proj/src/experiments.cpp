#include "persist/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "persist/batch.hpp"

namespace persist {

namespace {

Summary summarize_metric(const std::vector<RunResult>& runs, auto&& pick)
{
    std::vector<double> values;
    values.reserve(runs.size());
    for (const RunResult& r : runs) {
        values.push_back(static_cast<double>(pick(r)));
    }
    return summarize(values);
}

void append_per_year(ExperimentTable& table, const std::string& factor, double level, std::string_view name,
                     const std::vector<RunResult>& runs, const std::array<int, kYears> RunResult::*series)
{
    for (int y = 1; y <= kYears; ++y) {
        table.rows.push_back({factor, level, std::string(name), y, summarize_metric(runs, [&](const RunResult& r) {
                                  return (r.*series)[static_cast<std::size_t>(y - 1)];
                              })});
    }
}

void append_total(ExperimentTable& table, const std::string& factor, double level, std::string_view name,
                  const std::vector<RunResult>& runs, int RunResult::*field)
{
    table.rows.push_back(
        {factor, level, std::string(name), 0, summarize_metric(runs, [&](const RunResult& r) { return r.*field; })});
}

std::vector<std::vector<RunResult>> split_by_level(std::vector<RunResult> flat, std::size_t levels, int reps)
{
    std::vector<std::vector<RunResult>> out(levels);
    for (std::size_t l = 0; l < levels; ++l) {
        auto first = flat.begin() + static_cast<std::ptrdiff_t>(l * static_cast<std::size_t>(reps));
        out[l].assign(first, first + reps);
    }
    return out;
}

}  // namespace

const TableRow* ExperimentTable::find(std::string_view factor, double level, std::string_view metric, int year) const
{
    for (const TableRow& r : rows) {
        if (r.factor == factor && std::abs(r.level - level) < 1e-9 && r.metric == metric && r.year == year) {
            return &r;
        }
    }
    return nullptr;
}

std::vector<double> default_levels()
{
    std::vector<double> levels;
    for (int i = 1; i <= 10; ++i) {
        levels.push_back(i / 10.0);
    }
    return levels;
}

void SweepSpec::validate() const
{
    if (levels.empty()) {
        throw ConfigError("sweep needs at least one level");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0 && levels[i] <= 1.0)) {
            throw ConfigError("sweep levels must lie in (0,1]");
        }
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw ConfigError("sweep levels must be strictly increasing");
        }
    }
    if (!(fixed_level >= 0.0 && fixed_level <= 1.0)) {
        throw ConfigError("fixed_level must lie in [0,1]");
    }
    if (repetitions < 1) {
        throw ConfigError("repetitions must be at least 1");
    }
    base_config.validate();
}

SimConfig SweepSpec::config_for(std::size_t level_index, int rep) const
{
    SimConfig c = base_config;
    c.grid.reset();
    c.factor_specs = FactorSpecs::all_fixed(fixed_level);
    c.factor_specs[varied_factor] = FactorSpec::fixed(levels.at(level_index));
    c.seed = replicate_seed(master_seed, rep);
    return c;
}

SweepResult sweep(const SweepSpec& spec, int jobs)
{
    spec.validate();
    std::vector<SimConfig> configs;
    configs.reserve(spec.levels.size() * static_cast<std::size_t>(spec.repetitions));
    for (std::size_t l = 0; l < spec.levels.size(); ++l) {
        for (int r = 0; r < spec.repetitions; ++r) {
            configs.push_back(spec.config_for(l, r));
        }
    }
    SweepResult result;
    result.runs = split_by_level(run_batch(configs, jobs), spec.levels.size(), spec.repetitions);

    const std::string factor(factor_name(spec.varied_factor));
    for (std::size_t l = 0; l < spec.levels.size(); ++l) {
        const auto& runs = result.runs[l];
        append_per_year(result.table, factor, spec.levels[l], metric::kPersisted, runs, &RunResult::persisted_by_year);
        append_total(result.table, factor, spec.levels[l], metric::kGraduates, runs, &RunResult::graduates);
        append_total(result.table, factor, spec.levels[l], metric::kQuitters, runs, &RunResult::quitters);
    }
    return result;
}

SensitivityResult sensitivity(const SimConfig& base_config, Factor factor, double center, int repetitions,
                              std::uint64_t master_seed, int jobs, double fixed_level)
{
    if (!(center >= 0.0 && center <= 1.0)) {
        throw ConfigError("sensitivity center must lie in [0,1]");
    }
    if (repetitions < 1) {
        throw ConfigError("repetitions must be at least 1");
    }
    SensitivityResult result;
    result.factor = factor;
    result.center = center;
    const double upper = 1.1 * center;
    result.clamped = upper > 1.0;
    result.levels = {0.9 * center, center, std::min(upper, 1.0)};

    std::vector<SimConfig> configs;
    for (double level : result.levels) {
        SimConfig c = base_config;
        c.grid.reset();
        c.factor_specs = FactorSpecs::all_fixed(fixed_level);
        c.factor_specs[factor] = FactorSpec::fixed(level);
        for (int r = 0; r < repetitions; ++r) {
            c.seed = replicate_seed(master_seed, r);
            configs.push_back(c);
        }
    }
    result.runs = split_by_level(run_batch(configs, jobs), result.levels.size(), repetitions);

    const std::string name(factor_name(factor));
    for (std::size_t l = 0; l < result.levels.size(); ++l) {
        const auto& runs = result.runs[l];
        append_per_year(result.table, name, result.levels[l], metric::kDeparted, runs, &RunResult::departed_by_year);
        append_total(result.table, name, result.levels[l], metric::kQuitters, runs, &RunResult::quitters);
    }
    return result;
}

double mean_quitters_spread(const SensitivityResult& result)
{
    const std::string name(factor_name(result.factor));
    const TableRow* lo = result.table.find(name, result.levels.front(), metric::kQuitters, 0);
    const TableRow* hi = result.table.find(name, result.levels.back(), metric::kQuitters, 0);
    return lo->stats.mean - hi->stats.mean;
}

std::vector<double> HazardSearchSpace::values() const
{
    if (!(step > 0.0) || lo < 0.0 || hi > 1.0 || lo > hi) {
        throw ConfigError("hazard search space must satisfy 0 <= lo <= hi <= 1 and step > 0");
    }
    std::vector<double> out;
    const auto n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) {
        // Round to the step grid so 0.05 * k prints and compares cleanly.
        out.push_back(std::round((lo + i * step) * 1e9) / 1e9);
    }
    return out;
}

std::pair<double, double> outcome_rates(const std::vector<RunResult>& runs)
{
    double graduates = 0.0;
    double quitters = 0.0;
    int n = 0;
    for (const RunResult& r : runs) {
        if (r.attended == 0) {
            continue;
        }
        graduates += static_cast<double>(r.graduates) / r.attended;
        quitters += static_cast<double>(r.quitters) / r.attended;
        ++n;
    }
    if (n == 0) {
        return {0.0, 0.0};
    }
    return {graduates / n, quitters / n};
}

namespace {

SimConfig calibration_base(const CalibrationTargets& t)
{
    t.point.validate();
    if (t.replicates < 1) {
        throw ConfigError("calibration needs at least one replicate");
    }
    SimConfig c = t.base_config;
    c.grid.reset();
    for (Factor f : kAllFactors) {
        c.factor_specs[f] = FactorSpec::fixed(t.point[f]);
    }
    return c;
}

void score(CalibrationResult& r, const CalibrationTargets& t)
{
    const double dg = r.graduate_rate - t.graduate_rate;
    const double dq = r.quitter_rate - t.quitter_rate;
    r.squared_error = dg * dg + dq * dq;
    r.residual = std::max(std::abs(dg), std::abs(dq));
    r.feasible = r.residual <= t.tolerance;
}

double distance_to_prior(const HazardVector& h)
{
    const HazardVector p = HazardVector::prior();
    double d = 0.0;
    for (std::size_t i = 0; i < h.h.size(); ++i) {
        d += (h.h[i] - p.h[i]) * (h.h[i] - p.h[i]);
    }
    return d;
}

}  // namespace

CalibrationResult evaluate_hazards(const CalibrationTargets& targets, const HazardVector& hazards, int jobs)
{
    SimConfig base = calibration_base(targets);
    base.hazards = hazards;
    const auto configs = replicate_configs(base, targets.master_seed, targets.replicates);
    CalibrationResult r;
    r.hazards = hazards;
    r.candidates = 1;
    std::tie(r.graduate_rate, r.quitter_rate) = outcome_rates(run_batch(configs, jobs));
    score(r, targets);
    return r;
}

std::vector<EnrolledCohort> enroll_cohorts(const CalibrationTargets& targets)
{
    SimConfig base = calibration_base(targets);
    base.hazards = HazardVector::prior();
    std::vector<EnrolledCohort> cohorts;
    cohorts.reserve(static_cast<std::size_t>(targets.replicates));
    for (const SimConfig& c : replicate_configs(base, targets.master_seed, targets.replicates)) {
        SimState s = setup(c);
        enroll(s, c);
        // Enrolment does not depend on the hazards, and tick() draws one
        // variate per deaf agent per year, so the year draws can be taken now.
        EnrolledCohort cohort;
        std::vector<std::array<double, kYears>> draws(s.agents.size());
        for (int y = 0; y < kYears; ++y) {
            for (const Agent& a : s.agents) {
                if (a.role == Role::Deaf) {
                    draws[static_cast<std::size_t>(a.id)][static_cast<std::size_t>(y)] = s.dynamics.uniform01();
                }
            }
        }
        for (const Agent& a : s.agents) {
            if (a.status == AgentStatus::Student) {
                cohort.levels.push_back(composite_persistence_level(a));
                cohort.draws.push_back(draws[static_cast<std::size_t>(a.id)]);
            }
        }
        cohorts.push_back(std::move(cohort));
    }
    return cohorts;
}

std::pair<double, double> replay_rates(const std::vector<EnrolledCohort>& cohorts, const HazardVector& hazards)
{
    std::vector<RunResult> runs(cohorts.size());
    for (std::size_t r = 0; r < cohorts.size(); ++r) {
        const EnrolledCohort& c = cohorts[r];
        RunResult& out = runs[r];
        out.attended = static_cast<int>(c.levels.size());
        for (std::size_t i = 0; i < c.levels.size(); ++i) {
            bool left = false;
            for (int y = 1; y <= kYears && !left; ++y) {
                left = c.draws[i][static_cast<std::size_t>(y - 1)] < departure_probability(c.levels[i], y, hazards);
            }
            ++(left ? out.quitters : out.graduates);
        }
    }
    return outcome_rates(runs);
}

CalibrationResult calibrate(const CalibrationTargets& targets, const HazardSearchSpace& space, int jobs)
{
    const std::vector<EnrolledCohort> cohorts = enroll_cohorts(targets);

    const std::vector<double> values = space.values();
    std::vector<HazardVector> candidates;
    for (double h1 : values) {
        for (double h2 : values) {
            for (double h3 : values) {
                for (double h4 : values) {
                    if (h1 >= h2 && h2 >= h3 && h3 >= h4) {
                        candidates.push_back(HazardVector{{h1, h2, h3, h4}});
                    }
                }
            }
        }
    }

    std::vector<CalibrationResult> scored(candidates.size());
    for_each_index(candidates.size(), jobs, [&](std::size_t i) {
        CalibrationResult& r = scored[i];
        r.hazards = candidates[i];
        std::tie(r.graduate_rate, r.quitter_rate) = replay_rates(cohorts, candidates[i]);
        score(r, targets);
    });

    double best = std::numeric_limits<double>::infinity();
    for (const CalibrationResult& r : scored) {
        best = std::min(best, r.residual);
    }
    const CalibrationResult* chosen = nullptr;
    for (const CalibrationResult& r : scored) {
        if (r.residual > best + targets.tie_band) {
            continue;
        }
        if (chosen == nullptr || distance_to_prior(r.hazards) < distance_to_prior(chosen->hazards) ||
            (distance_to_prior(r.hazards) == distance_to_prior(chosen->hazards) &&
             r.squared_error < chosen->squared_error)) {
            chosen = &r;
        }
    }
    CalibrationResult out = *chosen;
    out.candidates = candidates.size();
    return out;
}

}  // namespace persist
