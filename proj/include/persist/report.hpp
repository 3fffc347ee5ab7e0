#pragma once

// CSV/JSON artifacts and SVG figure rendering.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "persist/engine.hpp"
#include "persist/experiments.hpp"
#include "persist/search.hpp"

namespace persist {

/// Filesystem failures (exit status 2 at the command line).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A CSV file whose header or cells do not match the expected schema.
class SchemaError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const CsvTable&) const = default;
};

inline constexpr std::array<std::string_view, 12> kExperimentColumns = {
    "factor", "level", "metric", "year", "mean", "sd", "min", "q1", "median", "q3", "max", "reps"};
inline constexpr std::array<std::string_view, 8> kTrajectoryColumns = {
    "search_id", "evaluation", "goal", "academic", "skill", "integration", "fitness", "best_so_far"};
inline constexpr std::array<std::string_view, 9> kTraceColumns = {
    "run_seed", "year", "agent_id", "role", "status", "teacher_links", "student_links", "cell_x", "cell_y"};

/// Six significant digits, shortest form ("%.6g").
std::string format_number(double v);

/// Comma-separated, LF line endings, no quoting (no field contains a comma).
std::string to_csv_text(const CsvTable& table);
CsvTable parse_csv_text(std::string_view text);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Throws SchemaError naming the first missing or unexpected column.
void require_columns(const CsvTable& table, std::span<const std::string_view> expected);

CsvTable to_csv(const ExperimentTable& table);
ExperimentTable experiment_from_csv(const CsvTable& csv);

CsvTable to_csv(const std::vector<TrajectoryEntry>& trajectory);
std::vector<TrajectoryEntry> trajectory_from_csv(const CsvTable& csv);

CsvTable to_csv(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> trace_from_csv(const CsvTable& csv);

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const SimConfig& config);
nlohmann::json to_json(const RunResult& result);
nlohmann::json to_json(const HazardVector& hazards);
nlohmann::json to_json(const FactorVector& point);
nlohmann::json to_json(const CalibrationResult& result);
nlohmann::json to_json(const SearchOutcome& outcome);

/// Pretty-printed, keys sorted, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// SVG

enum class PlotKind { PerYearLines, GraduatedDepartedLines, SensitivityBoxplot, SearchTrajectory };

/// "per-year", "graduated-departed", "sensitivity", "trajectory".
PlotKind parse_plot_kind(std::string_view name);
std::string_view plot_kind_name(PlotKind kind) noexcept;

struct PlotSpec {
    PlotKind kind = PlotKind::PerYearLines;
    std::string title;
    std::string x_label;
    std::string y_label;
    /// Metric names (tables) or "best_so_far"/"fitness" (trajectories).
    std::vector<std::string> series;

    static PlotSpec defaults(PlotKind kind);
};

std::string render_svg(const ExperimentTable& table, const PlotSpec& spec);
std::string render_svg(const std::vector<TrajectoryEntry>& trajectory, const PlotSpec& spec);

}  // namespace persist
