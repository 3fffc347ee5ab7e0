#include "persist/model.hpp"

#include <cmath>

namespace persist {

namespace {

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

std::string_view factor_name(Factor f) noexcept
{
    switch (f) {
    case Factor::Goal:
        return "goal";
    case Factor::AcademicExperience:
        return "academic_experience";
    case Factor::SocialSkill:
        return "social_skill";
    case Factor::SocialIntegration:
        return "social_integration";
    }
    return "?";
}

std::string valid_factor_names()
{
    std::string out;
    for (Factor f : kAllFactors) {
        if (!out.empty()) {
            out += ", ";
        }
        out += factor_name(f);
    }
    return out;
}

Factor parse_factor(std::string_view name)
{
    for (Factor f : kAllFactors) {
        if (factor_name(f) == name) {
            return f;
        }
    }
    throw ConfigError("unknown factor '" + std::string(name) + "' (valid factors: " + valid_factor_names() + ")");
}

FactorSpec FactorSpec::fixed(double value)
{
    if (!in_unit(value)) {
        throw ConfigError("fixed factor value must lie in [0,1], got " + std::to_string(value));
    }
    FactorSpec s;
    s.uniform_ = false;
    s.value_ = value;
    return s;
}

FactorSpec& FactorSpecs::operator[](Factor f) noexcept
{
    switch (f) {
    case Factor::Goal:
        return goal;
    case Factor::AcademicExperience:
        return academic_experience;
    case Factor::SocialSkill:
        return social_skill;
    case Factor::SocialIntegration:
        break;
    }
    return social_integration;
}

const FactorSpec& FactorSpecs::operator[](Factor f) const noexcept
{
    return const_cast<FactorSpecs&>(*this)[f];
}

FactorSpecs FactorSpecs::all_fixed(double value)
{
    const auto s = FactorSpec::fixed(value);
    return FactorSpecs{s, s, s, s};
}

double& FactorVector::operator[](Factor f) noexcept
{
    switch (f) {
    case Factor::Goal:
        return goal;
    case Factor::AcademicExperience:
        return academic_experience_init;
    case Factor::SocialSkill:
        return social_skill;
    case Factor::SocialIntegration:
        break;
    }
    return social_integration_init;
}

double FactorVector::operator[](Factor f) const noexcept { return const_cast<FactorVector&>(*this)[f]; }

void FactorVector::validate() const
{
    for (Factor f : kAllFactors) {
        if (!in_unit((*this)[f])) {
            throw ConfigError(std::string(factor_name(f)) + " must lie in [0,1]");
        }
    }
}

void HazardVector::validate() const
{
    for (double v : h) {
        if (!in_unit(v)) {
            throw ConfigError("hazards must lie in [0,1]");
        }
    }
    for (std::size_t i = 1; i < h.size(); ++i) {
        if (h[i] > h[i - 1]) {
            throw ConfigError("hazards must be non-increasing by year (h1 >= h2 >= h3 >= h4)");
        }
    }
}

std::string_view role_name(Role r) noexcept { return r == Role::Teacher ? "teacher" : "deaf"; }

std::string_view status_name(AgentStatus s) noexcept
{
    switch (s) {
    case AgentStatus::Teacher:
        return "teacher";
    case AgentStatus::Resident:
        return "resident";
    case AgentStatus::Student:
        return "student";
    case AgentStatus::Quitter:
        return "quitter";
    case AgentStatus::Graduate:
        return "graduate";
    }
    return "?";
}

bool legal_transition(AgentStatus from, AgentStatus to, int year) noexcept
{
    if (from == to) {
        // Students cannot survive past the final year as students.
        return !(from == AgentStatus::Student && year == kYears);
    }
    switch (from) {
    case AgentStatus::Resident:
        // Enrolment happens in year 1; an enrolee may leave in that same year.
        return year == 1 && (to == AgentStatus::Student || to == AgentStatus::Quitter);
    case AgentStatus::Student:
        return to == AgentStatus::Quitter || (to == AgentStatus::Graduate && year == kYears);
    default:
        return false;
    }
}

double effective_factor(double initial, int links)
{
    return clamp01(initial * (kFactorFloor + kPerLinkGain * links));
}

double composite_persistence_level(const FactorVector& factors, int teacher_links, int student_links)
{
    const double academic = effective_factor(factors.academic_experience_init, teacher_links);
    const double integration = effective_factor(factors.social_integration_init, student_links);
    return (factors.goal + factors.social_skill + academic + integration) / 4.0;
}

double composite_persistence_level(const Agent& agent)
{
    return composite_persistence_level(agent.factors, agent.teacher_links, agent.student_links);
}

double departure_probability(double level, int year, const HazardVector& hazards)
{
    return clamp01(hazards[year] * (1.0 - level));
}

}  // namespace persist
