#pragma once

// Behaviour search: random-restart steepest-ascent hill climbing over the
// discretized four-factor grid.

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "persist/engine.hpp"

namespace persist {

enum class Objective { MaximizeGraduates, MinimizeQuitters };

std::string_view objective_name(Objective o) noexcept;
/// Accepts "max-graduates" or "min-quitters".
Objective parse_objective(std::string_view name);

struct SearchSpec {
    Objective objective = Objective::MaximizeGraduates;
    double grid_step = 0.1;
    int fitness_replicates = 10;
    int num_searches = 10;
    int max_evaluations = 200;
    SimConfig base_config = baseline_config();
    std::uint64_t master_seed = 0;

    void validate() const;
    /// Grid intervals per axis; levels are 0, step, ..., 1.
    int intervals() const;
    bool better(double a, double b) const noexcept;
};

/// Grid coordinates in axis order goal, academic, skill, integration.
using GridPoint = std::array<int, 4>;

FactorVector to_factors(const GridPoint& p, const SearchSpec& spec);

struct TrajectoryEntry {
    int search_id = 0;
    int evaluation = 0;  // 1-based count of fresh fitness evaluations
    FactorVector point;
    double fitness = 0.0;
    double best_so_far = 0.0;

    bool operator==(const TrajectoryEntry&) const = default;
};

struct SearchBest {
    int search_id = 0;
    FactorVector point;
    double fitness = 0.0;
    int evaluations = 0;
};

struct SearchOutcome {
    FactorVector best_point;
    double best_fitness = 0.0;
    std::vector<TrajectoryEntry> trajectory;
    std::vector<SearchBest> per_search_bests;
};

/// Mean objective count over fitness_replicates runs. Replicate seeds depend
/// only on (master_seed, rep), so every point sees the same random numbers.
double evaluate_fitness(const FactorVector& point, const SearchSpec& spec);

SearchOutcome hill_search(const SearchSpec& spec, int search_index);

/// num_searches independent climbs; searches run concurrently when jobs > 1.
SearchOutcome run_searches(const SearchSpec& spec, int jobs = 1);

/// Fitness of every point on a grid with `step`, in row-major axis order.
std::map<GridPoint, double> enumerate_grid(const SearchSpec& spec, double step, int jobs = 1);

}  // namespace persist
