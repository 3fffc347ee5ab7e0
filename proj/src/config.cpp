#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <sstream>

#include "persist/cli.hpp"
#include "persist/report.hpp"

namespace persist {

namespace {

namespace pt = boost::property_tree;

double to_double(const std::string& key, const std::string& s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + s + "'");
    }
    return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& s)
{
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + s + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& s)
{
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        return false;
    }
    throw ConfigError("config key '" + key + "': expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) {
            throw ConfigError("config key '" + key + "': empty list item");
        }
        out.push_back(to_double(key, item.substr(b, e - b + 1)));
    }
    return out;
}

void apply(CliConfig& c, const std::string& section, const std::string& key, const std::string& value)
{
    const std::string full = section + "." + key;
    SimConfig& sim = c.sim;
    if (section == "population") {
        if (key == "num_agents") {
            sim.num_agents = to_int<int>(full, value);
            return;
        }
        if (key == "frac_teachers") {
            sim.frac_teachers = to_double(full, value);
            return;
        }
        if (key == "college_attendance_pct") {
            sim.college_attendance_pct = to_double(full, value);
            return;
        }
    } else if (section == "factors") {
        const Factor f = parse_factor(key);
        sim.factor_specs[f] = value == "uniform" ? FactorSpec::uniform01() : FactorSpec::fixed(to_double(full, value));
        return;
    } else if (section == "hazards") {
        for (int y = 1; y <= kYears; ++y) {
            if (key == "h" + std::to_string(y)) {
                sim.hazards.h[static_cast<std::size_t>(y - 1)] = to_double(full, value);
                return;
            }
        }
    } else if (section == "sweep") {
        if (key == "levels") {
            c.sweep.levels = to_list(full, value);
            return;
        }
        if (key == "fixed_level") {
            c.sweep.fixed_level = to_double(full, value);
            return;
        }
        if (key == "repetitions") {
            c.sweep.repetitions = to_int<int>(full, value);
            return;
        }
    } else if (section == "sensitivity") {
        if (key == "center") {
            c.sensitivity_center = to_double(full, value);
            return;
        }
        if (key == "repetitions") {
            c.sensitivity_repetitions = to_int<int>(full, value);
            return;
        }
    } else if (section == "search") {
        if (key == "grid_step") {
            c.search.grid_step = to_double(full, value);
            return;
        }
        if (key == "fitness_replicates") {
            c.search.fitness_replicates = to_int<int>(full, value);
            return;
        }
        if (key == "num_searches") {
            c.search.num_searches = to_int<int>(full, value);
            return;
        }
        if (key == "max_evaluations") {
            c.search.max_evaluations = to_int<int>(full, value);
            return;
        }
    } else if (section == "calibrate") {
        if (key == "replicates") {
            c.calibration.replicates = to_int<int>(full, value);
            return;
        }
        if (key == "lo") {
            c.hazard_space.lo = to_double(full, value);
            return;
        }
        if (key == "hi") {
            c.hazard_space.hi = to_double(full, value);
            return;
        }
        if (key == "step") {
            c.hazard_space.step = to_double(full, value);
            return;
        }
    } else {
        throw ConfigError("unknown config section '[" + section + "]'");
    }
    throw ConfigError("unknown config key '" + full + "'");
}

}  // namespace

CliConfig::CliConfig()
{
    sim = baseline_config();
    sim.grid = GridSpec{};
}

CliConfig parse_config(std::string_view text)
{
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    CliConfig c;
    // Grid keys are collected first so `enabled` may appear anywhere in its section.
    std::optional<bool> grid_enabled;
    GridSpec grid = GridSpec{};
    int college_size = grid.college.width;
    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty()) {
            throw ConfigError("config key '" + section + "' must belong to a [section]");
        }
        for (const auto& [key, node] : entries) {
            const std::string value = node.get_value<std::string>();
            if (section == "grid") {
                const std::string full = "grid." + key;
                if (key == "enabled") {
                    grid_enabled = to_bool(full, value);
                } else if (key == "width") {
                    grid.width = to_int<int>(full, value);
                } else if (key == "height") {
                    grid.height = to_int<int>(full, value);
                } else if (key == "college_size") {
                    college_size = to_int<int>(full, value);
                } else {
                    throw ConfigError("unknown config key '" + full + "'");
                }
                continue;
            }
            apply(c, section, key, value);
        }
    }
    if (grid_enabled.value_or(true)) {
        c.sim.grid = GridSpec::centered(grid.width, grid.height, college_size);
    } else {
        c.sim.grid.reset();
    }
    c.sim.validate();
    return c;
}

CliConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

}  // namespace persist
