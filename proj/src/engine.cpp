#include "persist/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace persist {

namespace {

int cell_index(const GridSpec& g, Cell c) { return c.y * g.width + c.x; }

Cell take_free_cell(SimState& state, bool inside_college)
{
    const GridSpec& g = *state.grid;
    const Rect& r = g.college;
    // Capacity is checked at setup, so rejection sampling terminates.
    for (;;) {
        Cell c;
        if (inside_college) {
            c = {r.x + state.cosmetic.uniform_int(0, r.width - 1), r.y + state.cosmetic.uniform_int(0, r.height - 1)};
        } else {
            c = {state.cosmetic.uniform_int(0, g.width - 1), state.cosmetic.uniform_int(0, g.height - 1)};
            if (r.contains(c)) {
                continue;
            }
        }
        if (state.occupancy[static_cast<std::size_t>(cell_index(g, c))] < 0) {
            return c;
        }
    }
}

void place(SimState& state, Agent& agent, bool inside_college)
{
    if (!state.grid) {
        return;
    }
    if (agent.cell) {
        state.occupancy[static_cast<std::size_t>(cell_index(*state.grid, *agent.cell))] = -1;
    }
    const Cell c = take_free_cell(state, inside_college);
    state.occupancy[static_cast<std::size_t>(cell_index(*state.grid, c))] = agent.id;
    agent.cell = c;
}

// Partial Fisher-Yates: `count` distinct picks from `pool` (or all of it).
std::vector<int> sample_distinct(std::vector<int> pool, int count, Rng& rng)
{
    const auto n = std::min(pool.size(), static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    return pool;
}

void draw_link_endpoints(SimState& state)
{
    std::vector<int> teachers;
    std::vector<int> students;
    for (const Agent& a : state.agents) {
        if (a.role == Role::Teacher) {
            teachers.push_back(a.id);
        } else if (a.status == AgentStatus::Student) {
            students.push_back(a.id);
        }
    }
    for (int id : students) {
        const Agent& a = state.agents[static_cast<std::size_t>(id)];
        for (int t : sample_distinct(teachers, a.teacher_links, state.cosmetic)) {
            state.links.push_back({id, t, true});
        }
        std::vector<int> peers;
        peers.reserve(students.size());
        std::copy_if(students.begin(), students.end(), std::back_inserter(peers), [id](int s) { return s != id; });
        for (int s : sample_distinct(std::move(peers), a.student_links, state.cosmetic)) {
            state.links.push_back({id, s, false});
        }
    }
}

}  // namespace

GridSpec GridSpec::centered(int width, int height, int college_size)
{
    return GridSpec{width, height, Rect{(width - college_size) / 2, (height - college_size) / 2, college_size, college_size}};
}

int SimConfig::num_teachers() const
{
    // The epsilon absorbs representation error in products such as 200 * 0.015.
    return static_cast<int>(std::floor(num_agents * frac_teachers + 1e-9));
}

void SimConfig::validate() const
{
    if (num_agents <= 0) {
        throw ConfigError("num_agents must be positive");
    }
    if (!(frac_teachers >= 0.0 && frac_teachers < 1.0)) {
        throw ConfigError("frac_teachers must lie in [0,1)");
    }
    if (!(college_attendance_pct >= 0.0 && college_attendance_pct <= 100.0)) {
        throw ConfigError("college_attendance_pct must lie in [0,100]");
    }
    if (years != kYears) {
        throw ConfigError("years must be 4");
    }
    hazards.validate();
    if (grid) {
        const GridSpec& g = *grid;
        const Rect& r = g.college;
        if (g.width <= 0 || g.height <= 0 || r.width <= 0 || r.height <= 0 || r.x < 0 || r.y < 0 ||
            r.x + r.width > g.width || r.y + r.height > g.height) {
            throw ConfigError("grid college rectangle must lie inside the grid");
        }
        const long college_cells = static_cast<long>(r.width) * r.height;
        const long residential_cells = static_cast<long>(g.width) * g.height - college_cells;
        // Worst case: every deaf agent enrols at once, or every one is off campus.
        if (college_cells < num_agents) {
            throw ConfigError("grid college too small: needs " + std::to_string(num_agents) + " cells, has " +
                              std::to_string(college_cells) + " (deficit " +
                              std::to_string(num_agents - college_cells) + ")");
        }
        if (residential_cells < num_deaf_agents()) {
            throw ConfigError("grid residential area too small: needs " + std::to_string(num_deaf_agents()) +
                              " cells, has " + std::to_string(residential_cells) + " (deficit " +
                              std::to_string(num_deaf_agents() - residential_cells) + ")");
        }
    }
}

SimConfig baseline_config()
{
    SimConfig c;
    c.num_agents = 200;
    c.frac_teachers = 0.1;
    c.college_attendance_pct = 87.2;
    c.factor_specs = FactorSpecs::all_fixed(0.5);
    return c;
}

SimState setup(const SimConfig& config)
{
    config.validate();
    SimState state(config.seed);
    const int teachers = config.num_teachers();
    state.agents.resize(static_cast<std::size_t>(config.num_agents));
    for (int id = 0; id < config.num_agents; ++id) {
        Agent& a = state.agents[static_cast<std::size_t>(id)];
        a.id = id;
        if (id < teachers) {
            a.role = Role::Teacher;
            a.status = AgentStatus::Teacher;
            continue;
        }
        a.role = Role::Deaf;
        a.status = AgentStatus::Resident;
        for (Factor f : kAllFactors) {
            const FactorSpec& spec = config.factor_specs[f];
            a.factors[f] = spec.is_uniform() ? state.dynamics.uniform01() : spec.value();
        }
    }
    if (config.grid) {
        state.grid = config.grid;
        state.occupancy.assign(static_cast<std::size_t>(config.grid->width * config.grid->height), -1);
        for (Agent& a : state.agents) {
            place(state, a, a.role == Role::Teacher);
        }
    }
    return state;
}

void form_links(Agent& agent, Rng& rng)
{
    agent.teacher_links = rng.uniform_int(0, kMaxTeacherLinks);
    agent.student_links = rng.uniform_int(0, kMaxStudentLinks);
}

void enroll(SimState& state, const SimConfig& config)
{
    if (state.current_year != 0 || state.enrolled) {
        throw std::logic_error("enroll: attendance is decided once, before the first tick");
    }
    const double p = config.college_attendance_pct / 100.0;
    for (Agent& a : state.agents) {
        if (a.role != Role::Deaf) {
            continue;
        }
        // Links are drawn for every deaf agent so that the stream position of
        // later draws does not depend on who enrolled.
        const bool attends = state.dynamics.bernoulli(p);
        Agent drawn = a;
        form_links(drawn, state.dynamics);
        if (attends) {
            a.status = AgentStatus::Student;
            a.teacher_links = drawn.teacher_links;
            a.student_links = drawn.student_links;
            place(state, a, true);
        }
    }
    if (state.grid) {
        draw_link_endpoints(state);
    }
    state.enrolled = true;
}

void tick(SimState& state, const SimConfig& config)
{
    if (!state.enrolled) {
        throw std::logic_error("tick: enroll must run before the first tick");
    }
    const int year = state.current_year + 1;
    if (year > config.years) {
        throw std::logic_error("tick: run already complete");
    }
    for (Agent& a : state.agents) {
        if (a.role != Role::Deaf) {
            continue;
        }
        // One variate per deaf agent per year, whatever its status.
        const double u = state.dynamics.uniform01();
        if (a.status != AgentStatus::Student) {
            continue;
        }
        if (u < departure_probability(composite_persistence_level(a), year, config.hazards)) {
            a.status = AgentStatus::Quitter;
            a.departed_in_year = year;
            place(state, a, false);
        }
    }
    if (year == kYears) {
        for (Agent& a : state.agents) {
            if (a.status == AgentStatus::Student) {
                a.status = AgentStatus::Graduate;
                place(state, a, false);
            }
        }
    }
    state.current_year = year;
}

void snapshot(const SimState& state, std::uint64_t run_seed, std::vector<TraceRecord>& out)
{
    for (const Agent& a : state.agents) {
        out.push_back({run_seed, state.current_year, a.id, a.role, a.status, a.teacher_links, a.student_links, a.cell});
    }
}

RunResult tally(const SimState& state, std::uint64_t seed)
{
    RunResult r;
    r.seed = seed;
    for (const Agent& a : state.agents) {
        switch (a.status) {
        case AgentStatus::Teacher:
            break;
        case AgentStatus::Resident:
            ++r.never_attended;
            break;
        case AgentStatus::Student:
            ++r.attended;
            break;
        case AgentStatus::Quitter:
            ++r.attended;
            ++r.quitters;
            ++r.departed_by_year[static_cast<std::size_t>(*a.departed_in_year - 1)];
            break;
        case AgentStatus::Graduate:
            ++r.attended;
            ++r.graduates;
            break;
        }
    }
    int remaining = r.attended;
    for (int y = 1; y <= state.current_year; ++y) {
        remaining -= r.departed_by_year[static_cast<std::size_t>(y - 1)];
        r.persisted_by_year[static_cast<std::size_t>(y - 1)] = remaining;
    }
    return r;
}

RunResult run(const SimConfig& config)
{
    SimState state = setup(config);
    enroll(state, config);
    for (int y = 0; y < config.years; ++y) {
        tick(state, config);
    }
    return tally(state, config.seed);
}

RunResult run(const SimConfig& config, std::vector<TraceRecord>& trace, std::vector<LinkEndpoint>* links)
{
    SimState state = setup(config);
    snapshot(state, config.seed, trace);
    enroll(state, config);
    for (int y = 0; y < config.years; ++y) {
        tick(state, config);
        snapshot(state, config.seed, trace);
    }
    if (links != nullptr) {
        *links = state.links;
    }
    return tally(state, config.seed);
}

RunResult tally_trace(const std::vector<TraceRecord>& trace, std::uint64_t run_seed)
{
    // agent id -> status at each recorded year
    std::map<int, std::map<int, AgentStatus>> history;
    int last_year = 0;
    for (const TraceRecord& t : trace) {
        if (t.run_seed != run_seed) {
            continue;
        }
        history[t.agent_id][t.year] = t.status;
        last_year = std::max(last_year, t.year);
    }
    RunResult r;
    r.seed = run_seed;
    for (const auto& [id, by_year] : history) {
        const auto final_it = by_year.find(last_year);
        if (final_it == by_year.end()) {
            continue;
        }
        AgentStatus previous = AgentStatus::Resident;
        for (const auto& [year, status] : by_year) {
            if (status == AgentStatus::Quitter && previous != AgentStatus::Quitter && year >= 1) {
                ++r.departed_by_year[static_cast<std::size_t>(year - 1)];
            }
            previous = status;
        }
        switch (final_it->second) {
        case AgentStatus::Teacher:
            break;
        case AgentStatus::Resident:
            ++r.never_attended;
            break;
        case AgentStatus::Student:
            ++r.attended;
            break;
        case AgentStatus::Quitter:
            ++r.attended;
            ++r.quitters;
            break;
        case AgentStatus::Graduate:
            ++r.attended;
            ++r.graduates;
            break;
        }
    }
    int remaining = r.attended;
    for (int y = 1; y <= last_year; ++y) {
        remaining -= r.departed_by_year[static_cast<std::size_t>(y - 1)];
        r.persisted_by_year[static_cast<std::size_t>(y - 1)] = remaining;
    }
    return r;
}

}  // namespace persist
