#include "persist/report.hpp"

namespace persist {

using nlohmann::json;

namespace {

json to_json(const FactorSpec& s)
{
    if (s.is_uniform()) {
        return "uniform";
    }
    return s.value();
}

}  // namespace

json to_json(const HazardVector& hazards) { return json::array({hazards.h[0], hazards.h[1], hazards.h[2], hazards.h[3]}); }

json to_json(const FactorVector& p)
{
    return json{{"goal", p.goal},
                {"academic_experience", p.academic_experience_init},
                {"social_skill", p.social_skill},
                {"social_integration", p.social_integration_init}};
}

json to_json(const SimConfig& c)
{
    json factors;
    for (Factor f : kAllFactors) {
        factors[std::string(factor_name(f))] = to_json(c.factor_specs[f]);
    }
    json doc{{"num_agents", c.num_agents},
             {"frac_teachers", c.frac_teachers},
             {"college_attendance_pct", c.college_attendance_pct},
             {"factors", factors},
             {"hazards", to_json(c.hazards)},
             {"years", c.years},
             {"seed", c.seed}};
    if (c.grid) {
        const GridSpec& g = *c.grid;
        doc["grid"] = json{{"width", g.width},
                           {"height", g.height},
                           {"college", json::array({g.college.x, g.college.y, g.college.width, g.college.height})}};
    } else {
        doc["grid"] = nullptr;
    }
    return doc;
}

json to_json(const RunResult& r)
{
    return json{{"attended", r.attended},
                {"persisted_by_year", r.persisted_by_year},
                {"departed_by_year", r.departed_by_year},
                {"graduates", r.graduates},
                {"quitters", r.quitters},
                {"never_attended", r.never_attended},
                {"seed", r.seed}};
}

json to_json(const CalibrationResult& r)
{
    return json{{"hazards", to_json(r.hazards)},
                {"graduate_rate", r.graduate_rate},
                {"quitter_rate", r.quitter_rate},
                {"squared_error", r.squared_error},
                {"residual", r.residual},
                {"feasible", r.feasible},
                {"candidates", r.candidates}};
}

json to_json(const SearchOutcome& o)
{
    json bests = json::array();
    for (const SearchBest& b : o.per_search_bests) {
        bests.push_back(
            json{{"search_id", b.search_id}, {"point", to_json(b.point)}, {"fitness", b.fitness}, {"evaluations", b.evaluations}});
    }
    return json{{"best_point", to_json(o.best_point)}, {"best_fitness", o.best_fitness}, {"per_search_bests", bests}};
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

}  // namespace persist
