#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "persist/report.hpp"

namespace persist {

namespace {

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& cell, std::string_view column)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw SchemaError("column '" + std::string(column) + "': not a number: '" + cell + "'");
    }
    return v;
}

template <class Int>
Int parse_int(const std::string& cell, std::string_view column)
{
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw SchemaError("column '" + std::string(column) + "': not an integer: '" + cell + "'");
    }
    return v;
}

void check_width(const CsvTable& csv)
{
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        if (csv.rows[i].size() != csv.header.size()) {
            throw SchemaError("row " + std::to_string(i + 1) + " has " + std::to_string(csv.rows[i].size()) +
                              " cells, header has " + std::to_string(csv.header.size()));
        }
    }
}

Role parse_role(const std::string& s)
{
    if (s == role_name(Role::Teacher)) {
        return Role::Teacher;
    }
    if (s == role_name(Role::Deaf)) {
        return Role::Deaf;
    }
    throw SchemaError("column 'role': unknown role '" + s + "'");
}

AgentStatus parse_status(const std::string& s)
{
    for (AgentStatus st : {AgentStatus::Teacher, AgentStatus::Resident, AgentStatus::Student, AgentStatus::Quitter,
                           AgentStatus::Graduate}) {
        if (s == status_name(st)) {
            return st;
        }
    }
    throw SchemaError("column 'status': unknown status '" + s + "'");
}

template <std::size_t N>
std::vector<std::string> header_of(const std::array<std::string_view, N>& cols)
{
    return {cols.begin(), cols.end()};
}

}  // namespace

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string to_csv_text(const CsvTable& table)
{
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += cells[i];
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        line(row);
    }
    return out;
}

CsvTable parse_csv_text(std::string_view text)
{
    CsvTable table;
    bool first = true;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        start = end + 1;
        if (first) {
            table.header = split(line, ',');
            first = false;
        } else if (!line.empty()) {
            table.rows.push_back(split(line, ','));
        }
    }
    if (first) {
        throw SchemaError("empty CSV: missing header line");
    }
    check_width(table);
    return table;
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("write failed: '" + path.string() + "'");
    }
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_text_file(path, to_csv_text(table)); }

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv_text(read_text_file(path)); }

void require_columns(const CsvTable& table, std::span<const std::string_view> expected)
{
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= table.header.size()) {
            throw SchemaError("missing column '" + std::string(expected[i]) + "'");
        }
        if (table.header[i] != expected[i]) {
            throw SchemaError("unexpected column '" + table.header[i] + "' at position " + std::to_string(i + 1) +
                              " (expected '" + std::string(expected[i]) + "')");
        }
    }
    if (table.header.size() > expected.size()) {
        throw SchemaError("unexpected column '" + table.header[expected.size()] + "'");
    }
}

CsvTable to_csv(const ExperimentTable& table)
{
    CsvTable csv{header_of(kExperimentColumns), {}};
    for (const TableRow& r : table.rows) {
        const Summary& s = r.stats;
        csv.rows.push_back({r.factor, format_number(r.level), r.metric, std::to_string(r.year), format_number(s.mean),
                            format_number(s.sd), format_number(s.min), format_number(s.q1), format_number(s.median),
                            format_number(s.q3), format_number(s.max), std::to_string(s.n)});
    }
    return csv;
}

ExperimentTable experiment_from_csv(const CsvTable& csv)
{
    require_columns(csv, kExperimentColumns);
    check_width(csv);
    ExperimentTable table;
    const auto& c = kExperimentColumns;
    for (const auto& row : csv.rows) {
        TableRow r;
        r.factor = row[0];
        r.level = parse_double(row[1], c[1]);
        r.metric = row[2];
        r.year = parse_int<int>(row[3], c[3]);
        r.stats.mean = parse_double(row[4], c[4]);
        r.stats.sd = parse_double(row[5], c[5]);
        r.stats.min = parse_double(row[6], c[6]);
        r.stats.q1 = parse_double(row[7], c[7]);
        r.stats.median = parse_double(row[8], c[8]);
        r.stats.q3 = parse_double(row[9], c[9]);
        r.stats.max = parse_double(row[10], c[10]);
        r.stats.n = parse_int<int>(row[11], c[11]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

CsvTable to_csv(const std::vector<TrajectoryEntry>& trajectory)
{
    CsvTable csv{header_of(kTrajectoryColumns), {}};
    for (const TrajectoryEntry& t : trajectory) {
        csv.rows.push_back({std::to_string(t.search_id), std::to_string(t.evaluation), format_number(t.point.goal),
                            format_number(t.point.academic_experience_init), format_number(t.point.social_skill),
                            format_number(t.point.social_integration_init), format_number(t.fitness),
                            format_number(t.best_so_far)});
    }
    return csv;
}

std::vector<TrajectoryEntry> trajectory_from_csv(const CsvTable& csv)
{
    require_columns(csv, kTrajectoryColumns);
    check_width(csv);
    const auto& c = kTrajectoryColumns;
    std::vector<TrajectoryEntry> out;
    for (const auto& row : csv.rows) {
        TrajectoryEntry t;
        t.search_id = parse_int<int>(row[0], c[0]);
        t.evaluation = parse_int<int>(row[1], c[1]);
        t.point.goal = parse_double(row[2], c[2]);
        t.point.academic_experience_init = parse_double(row[3], c[3]);
        t.point.social_skill = parse_double(row[4], c[4]);
        t.point.social_integration_init = parse_double(row[5], c[5]);
        t.fitness = parse_double(row[6], c[6]);
        t.best_so_far = parse_double(row[7], c[7]);
        out.push_back(t);
    }
    return out;
}

CsvTable to_csv(const std::vector<TraceRecord>& trace)
{
    CsvTable csv{header_of(kTraceColumns), {}};
    csv.rows.reserve(trace.size());
    for (const TraceRecord& t : trace) {
        csv.rows.push_back({std::to_string(t.run_seed), std::to_string(t.year), std::to_string(t.agent_id),
                            std::string(role_name(t.role)), std::string(status_name(t.status)),
                            std::to_string(t.teacher_links), std::to_string(t.student_links),
                            t.cell ? std::to_string(t.cell->x) : std::string(),
                            t.cell ? std::to_string(t.cell->y) : std::string()});
    }
    return csv;
}

std::vector<TraceRecord> trace_from_csv(const CsvTable& csv)
{
    require_columns(csv, kTraceColumns);
    check_width(csv);
    const auto& c = kTraceColumns;
    std::vector<TraceRecord> out;
    out.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        TraceRecord t;
        t.run_seed = parse_int<std::uint64_t>(row[0], c[0]);
        t.year = parse_int<int>(row[1], c[1]);
        t.agent_id = parse_int<int>(row[2], c[2]);
        t.role = parse_role(row[3]);
        t.status = parse_status(row[4]);
        t.teacher_links = parse_int<int>(row[5], c[5]);
        t.student_links = parse_int<int>(row[6], c[6]);
        if (!row[7].empty() || !row[8].empty()) {
            t.cell = Cell{parse_int<int>(row[7], c[7]), parse_int<int>(row[8], c[8])};
        }
        out.push_back(t);
    }
    return out;
}

}  // namespace persist
