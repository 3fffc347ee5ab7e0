#include "persist/search.hpp"

#include <cmath>
#include <optional>

#include "persist/batch.hpp"

namespace persist {

namespace {

constexpr std::uint64_t kSearchStreamTag = 0x7365617263ULL;

GridPoint random_point(Rng& rng, int intervals)
{
    GridPoint p{};
    for (int& c : p) {
        c = rng.uniform_int(0, intervals);
    }
    return p;
}

std::size_t grid_size(int intervals)
{
    const auto side = static_cast<std::size_t>(intervals + 1);
    return side * side * side * side;
}

}  // namespace

std::string_view objective_name(Objective o) noexcept
{
    return o == Objective::MaximizeGraduates ? "max-graduates" : "min-quitters";
}

Objective parse_objective(std::string_view name)
{
    if (name == "max-graduates") {
        return Objective::MaximizeGraduates;
    }
    if (name == "min-quitters") {
        return Objective::MinimizeQuitters;
    }
    throw ConfigError("unknown objective '" + std::string(name) + "' (valid: max-graduates, min-quitters)");
}

int SearchSpec::intervals() const { return static_cast<int>(std::lround(1.0 / grid_step)); }

void SearchSpec::validate() const
{
    if (!(grid_step > 0.0 && grid_step <= 1.0) || std::abs(intervals() * grid_step - 1.0) > 1e-9) {
        throw ConfigError("grid_step must divide [0,1] evenly");
    }
    if (fitness_replicates < 1 || num_searches < 1 || max_evaluations < 1) {
        throw ConfigError("fitness_replicates, num_searches and max_evaluations must be positive");
    }
    base_config.validate();
}

bool SearchSpec::better(double a, double b) const noexcept
{
    return objective == Objective::MaximizeGraduates ? a > b : a < b;
}

FactorVector to_factors(const GridPoint& p, const SearchSpec& spec)
{
    const int k = spec.intervals();
    auto level = [k](int i) { return static_cast<double>(i) / k; };
    FactorVector v;
    v.goal = level(p[0]);
    v.academic_experience_init = level(p[1]);
    v.social_skill = level(p[2]);
    v.social_integration_init = level(p[3]);
    return v;
}

double evaluate_fitness(const FactorVector& point, const SearchSpec& spec)
{
    point.validate();
    SimConfig base = spec.base_config;
    base.grid.reset();
    for (Factor f : kAllFactors) {
        base.factor_specs[f] = FactorSpec::fixed(point[f]);
    }
    const auto runs = run_batch_serial(replicate_configs(base, spec.master_seed, spec.fitness_replicates));
    double sum = 0.0;
    for (const RunResult& r : runs) {
        sum += spec.objective == Objective::MaximizeGraduates ? r.graduates : r.quitters;
    }
    return sum / static_cast<double>(runs.size());
}

SearchOutcome hill_search(const SearchSpec& spec, int search_index)
{
    spec.validate();
    const int k = spec.intervals();
    Rng rng(stream_seed(spec.master_seed, {kSearchStreamTag, static_cast<std::uint64_t>(search_index)}));

    SearchOutcome out;
    std::map<GridPoint, double> memo;
    std::optional<GridPoint> best;

    auto fitness = [&](const GridPoint& p) -> std::optional<double> {
        if (auto it = memo.find(p); it != memo.end()) {
            return it->second;
        }
        if (static_cast<int>(memo.size()) >= spec.max_evaluations) {
            return std::nullopt;
        }
        const FactorVector v = to_factors(p, spec);
        const double f = evaluate_fitness(v, spec);
        memo.emplace(p, f);
        if (!best || spec.better(f, out.best_fitness)) {
            best = p;
            out.best_fitness = f;
            out.best_point = v;
        }
        out.trajectory.push_back({search_index, static_cast<int>(memo.size()), v, f, out.best_fitness});
        return f;
    };

    const std::size_t total = grid_size(k);
    GridPoint current = random_point(rng, k);
    std::optional<double> current_fit = fitness(current);
    // Restarts that land on explored ground cost nothing; cap them so a
    // nearly exhausted small grid still terminates promptly.
    long idle_restarts = 0;
    const long max_idle_restarts = 1000L * spec.max_evaluations;

    while (current_fit && memo.size() < total && idle_restarts < max_idle_restarts) {
        std::optional<GridPoint> next;
        double next_fit = 0.0;
        bool exhausted = false;
        for (std::size_t axis = 0; axis < 4 && !exhausted; ++axis) {
            for (int delta : {-1, 1}) {
                GridPoint q = current;
                q[axis] += delta;
                if (q[axis] < 0 || q[axis] > k) {
                    continue;
                }
                const auto fq = fitness(q);
                if (!fq) {
                    exhausted = true;
                    break;
                }
                if (!next || spec.better(*fq, next_fit)) {
                    next = q;
                    next_fit = *fq;
                }
            }
        }
        if (exhausted) {
            break;
        }
        if (next && spec.better(next_fit, *current_fit)) {
            current = *next;
            current_fit = next_fit;
            continue;
        }
        const std::size_t before = memo.size();
        current = random_point(rng, k);
        current_fit = fitness(current);
        idle_restarts = memo.size() == before ? idle_restarts + 1 : 0;
    }

    out.per_search_bests.push_back({search_index, out.best_point, out.best_fitness, static_cast<int>(memo.size())});
    return out;
}

SearchOutcome run_searches(const SearchSpec& spec, int jobs)
{
    spec.validate();
    std::vector<SearchOutcome> each(static_cast<std::size_t>(spec.num_searches));
    for_each_index(each.size(), jobs, [&](std::size_t i) { each[i] = hill_search(spec, static_cast<int>(i)); });

    SearchOutcome out;
    for (std::size_t i = 0; i < each.size(); ++i) {
        const SearchOutcome& s = each[i];
        if (i == 0 || spec.better(s.best_fitness, out.best_fitness)) {
            out.best_fitness = s.best_fitness;
            out.best_point = s.best_point;
        }
        out.trajectory.insert(out.trajectory.end(), s.trajectory.begin(), s.trajectory.end());
        out.per_search_bests.insert(out.per_search_bests.end(), s.per_search_bests.begin(), s.per_search_bests.end());
    }
    return out;
}

std::map<GridPoint, double> enumerate_grid(const SearchSpec& spec, double step, int jobs)
{
    SearchSpec coarse = spec;
    coarse.grid_step = step;
    coarse.validate();
    const int k = coarse.intervals();
    std::vector<GridPoint> points;
    for (int a = 0; a <= k; ++a) {
        for (int b = 0; b <= k; ++b) {
            for (int c = 0; c <= k; ++c) {
                for (int d = 0; d <= k; ++d) {
                    points.push_back({a, b, c, d});
                }
            }
        }
    }
    std::vector<double> fit(points.size());
    for_each_index(points.size(), jobs,
                   [&](std::size_t i) { fit[i] = evaluate_fitness(to_factors(points[i], coarse), coarse); });
    std::map<GridPoint, double> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        out.emplace(points[i], fit[i]);
    }
    return out;
}

}  // namespace persist
