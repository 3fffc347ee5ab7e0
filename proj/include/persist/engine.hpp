#pragma once

// One seeded simulation run: setup, enrolment with link formation, four
// yearly departure ticks and graduation.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persist/model.hpp"
#include "persist/rng.hpp"

namespace persist {

inline constexpr std::string_view kEngineVersion = "persist-abm 1.0.0";

struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool contains(Cell c) const noexcept
    {
        return c.x >= x && c.x < x + width && c.y >= y && c.y < y + height;
    }
    bool operator==(const Rect&) const = default;
};

/// World geometry, used only for trace export.
struct GridSpec {
    int width = 41;
    int height = 41;
    Rect college{13, 13, 15, 15};

    static GridSpec centered(int width, int height, int college_size);
    bool operator==(const GridSpec&) const = default;
};

struct SimConfig {
    int num_agents = 200;
    double frac_teachers = 0.1;
    double college_attendance_pct = 87.2;
    FactorSpecs factor_specs;
    HazardVector hazards = HazardVector::fitted();
    int years = kYears;
    std::uint64_t seed = 0;
    std::optional<GridSpec> grid;

    int num_teachers() const;
    int num_deaf_agents() const { return num_agents - num_teachers(); }

    /// Throws ConfigError on any invariant violation.
    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

/// Baseline population: 200 agents, 87.2 % attendance, all factors at 0.5.
SimConfig baseline_config();

struct LinkEndpoint {
    int student = 0;
    int partner = 0;
    bool partner_is_teacher = false;
};

struct SimState {
    std::vector<Agent> agents;
    int current_year = 0;
    bool enrolled = false;
    Rng dynamics;
    Rng cosmetic;
    std::optional<GridSpec> grid;
    std::vector<int> occupancy;  // agent id per cell, -1 when free
    std::vector<LinkEndpoint> links;

    explicit SimState(std::uint64_t seed)
        : dynamics(seed, StreamId::Dynamics), cosmetic(seed, StreamId::Cosmetic)
    {
    }
};

struct RunResult {
    int attended = 0;
    std::array<int, kYears> persisted_by_year{};
    std::array<int, kYears> departed_by_year{};
    int graduates = 0;
    int quitters = 0;
    int never_attended = 0;
    std::uint64_t seed = 0;

    bool operator==(const RunResult&) const = default;
};

struct TraceRecord {
    std::uint64_t run_seed = 0;
    int year = 0;
    int agent_id = 0;
    Role role = Role::Deaf;
    AgentStatus status = AgentStatus::Resident;
    int teacher_links = 0;
    int student_links = 0;
    std::optional<Cell> cell;

    bool operator==(const TraceRecord&) const = default;
};

SimState setup(const SimConfig& config);

/// Year-1 attendance decisions and link formation. Requires current_year == 0.
void enroll(SimState& state, const SimConfig& config);

/// Draw an enrolee's link counts. Both counts are drawn from `rng` in a fixed order.
void form_links(Agent& agent, Rng& rng);

/// Advance one academic year: departure decisions, then graduation after the last year.
void tick(SimState& state, const SimConfig& config);

/// Append one record per agent describing the current tick boundary.
void snapshot(const SimState& state, std::uint64_t run_seed, std::vector<TraceRecord>& out);

/// Tally outcomes of a finished (or partially run) state.
RunResult tally(const SimState& state, std::uint64_t seed);

/// setup -> enroll -> tick x years -> tally. Bit-identical for identical configs.
RunResult run(const SimConfig& config);
/// Also records every tick boundary and, when given, the drawn link endpoints.
RunResult run(const SimConfig& config, std::vector<TraceRecord>& trace, std::vector<LinkEndpoint>* links = nullptr);

/// Rebuild a run's tallies from its final-year trace records.
RunResult tally_trace(const std::vector<TraceRecord>& trace, std::uint64_t run_seed);

}  // namespace persist
