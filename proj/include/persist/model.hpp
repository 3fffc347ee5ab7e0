#pragma once

// Domain types and the pure decision rules of the persistence model.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace persist {

inline constexpr int kYears = 4;
inline constexpr int kMaxTeacherLinks = 3;
inline constexpr int kMaxStudentLinks = 8;
inline constexpr double kFactorFloor = 0.2;
inline constexpr double kPerLinkGain = 0.1;

/// Thrown for any configuration or argument outside its documented domain.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

constexpr double clamp01(double x) noexcept { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

enum class Factor { Goal, AcademicExperience, SocialSkill, SocialIntegration };
inline constexpr std::array<Factor, 4> kAllFactors = {Factor::Goal, Factor::AcademicExperience,
                                                      Factor::SocialSkill, Factor::SocialIntegration};

std::string_view factor_name(Factor f) noexcept;
/// Accepts the canonical snake_case names; throws ConfigError listing them otherwise.
Factor parse_factor(std::string_view name);
std::string valid_factor_names();

/// How one factor is assigned to deaf agents at setup.
class FactorSpec {
public:
    static FactorSpec fixed(double value);
    static FactorSpec uniform01() { return FactorSpec{}; }

    bool is_uniform() const noexcept { return uniform_; }
    double value() const noexcept { return value_; }

    bool operator==(const FactorSpec&) const = default;

private:
    FactorSpec() = default;
    bool uniform_ = true;
    double value_ = 0.0;
};

struct FactorSpecs {
    FactorSpec goal = FactorSpec::fixed(0.5);
    FactorSpec academic_experience = FactorSpec::fixed(0.5);
    FactorSpec social_skill = FactorSpec::fixed(0.5);
    FactorSpec social_integration = FactorSpec::fixed(0.5);

    FactorSpec& operator[](Factor f) noexcept;
    const FactorSpec& operator[](Factor f) const noexcept;
    bool operator==(const FactorSpecs&) const = default;

    static FactorSpecs all_fixed(double value);
};

/// Initial (user-level) factor values of one deaf agent.
struct FactorVector {
    double goal = 0.0;
    double social_skill = 0.0;
    double academic_experience_init = 0.0;
    double social_integration_init = 0.0;

    double& operator[](Factor f) noexcept;
    double operator[](Factor f) const noexcept;
    bool operator==(const FactorVector&) const = default;

    void validate() const;
};

/// Per-year base departure hazards, non-increasing over the four years.
struct HazardVector {
    std::array<double, kYears> h{};

    double operator[](int year) const { return h.at(static_cast<std::size_t>(year - 1)); }
    bool operator==(const HazardVector&) const = default;

    void validate() const;

    /// Starting point before calibration.
    static constexpr HazardVector prior() { return HazardVector{{0.90, 0.45, 0.25, 0.15}}; }
    /// Fitted by `calibrate` against the optimum-point target rates (master seed 2021,
    /// 200 replicates); see tests/test_experiments.cpp for the reproduction check.
    static constexpr HazardVector fitted() { return HazardVector{{0.95, 0.60, 0.35, 0.25}}; }
};

enum class Role { Teacher, Deaf };
enum class AgentStatus { Teacher, Resident, Student, Quitter, Graduate };

std::string_view role_name(Role r) noexcept;
std::string_view status_name(AgentStatus s) noexcept;

/// Whether a deaf agent may move from `from` to `to` across one tick boundary.
/// `year` is the tick just completed (1..4).
bool legal_transition(AgentStatus from, AgentStatus to, int year) noexcept;

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

struct Agent {
    int id = 0;
    Role role = Role::Deaf;
    AgentStatus status = AgentStatus::Resident;
    FactorVector factors;
    int teacher_links = 0;
    int student_links = 0;
    std::optional<Cell> cell;
    std::optional<int> departed_in_year;

    bool operator==(const Agent&) const = default;
};

/// initial * (0.2 + 0.1 * links), clamped to [0, 1].
double effective_factor(double initial, int links);

/// Equal-weight mean of goal, social skill and the two link-derived factors.
double composite_persistence_level(const FactorVector& factors, int teacher_links, int student_links);
double composite_persistence_level(const Agent& agent);

/// hazards[year] * (1 - level).
double departure_probability(double level, int year, const HazardVector& hazards);

}  // namespace persist
