#include "doctest.h"

#include <algorithm>
#include <string>

#include "invariants.hpp"
#include "persist/engine.hpp"

using namespace persist;

namespace {

int count_role(const SimState& s, Role r)
{
    return static_cast<int>(std::count_if(s.agents.begin(), s.agents.end(), [r](const Agent& a) { return a.role == r; }));
}

int count_status(const SimState& s, AgentStatus st)
{
    return static_cast<int>(
        std::count_if(s.agents.begin(), s.agents.end(), [st](const Agent& a) { return a.status == st; }));
}

}  // namespace

TEST_SUITE("engine")
{
    TEST_CASE("setup creates the teacher and resident roster")
    {
        SimConfig c = baseline_config();
        struct Case {
            double frac;
            int teachers;
        };
        for (const Case k : {Case{0.1, 20}, Case{0.0, 0}, Case{0.015, 3}}) {
            c.frac_teachers = k.frac;
            const SimState s = setup(c);
            CHECK(count_role(s, Role::Teacher) == k.teachers);
            CHECK(count_role(s, Role::Deaf) == 200 - k.teachers);
            CHECK(count_status(s, AgentStatus::Resident) == 200 - k.teachers);
            for (std::size_t i = 0; i < s.agents.size(); ++i) {
                CHECK(s.agents[i].id == static_cast<int>(i));
            }
        }
    }

    TEST_CASE("setup assigns fixed and uniform factors")
    {
        SimConfig c = baseline_config();
        c.factor_specs[Factor::SocialSkill] = FactorSpec::uniform01();
        const SimState s = setup(c);
        double sum = 0.0;
        int n = 0;
        for (const Agent& a : s.agents) {
            if (a.role != Role::Deaf) {
                continue;
            }
            CHECK(a.factors.goal == 0.5);
            CHECK(a.factors.academic_experience_init == 0.5);
            CHECK(a.factors.social_skill >= 0.0);
            CHECK(a.factors.social_skill < 1.0);
            sum += a.factors.social_skill;
            ++n;
        }
        CHECK(sum / n == doctest::Approx(0.5).epsilon(0.15));
    }

    TEST_CASE("a grid too small for the population names the deficit")
    {
        SimConfig c = baseline_config();
        c.grid = GridSpec::centered(33, 33, 13);
        try {
            setup(c);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("deficit 31") != std::string::npos);
        }
        c.grid = GridSpec{};
        CHECK_NOTHROW(setup(c));
    }

    TEST_CASE("invalid configurations are rejected")
    {
        SimConfig c = baseline_config();
        c.num_agents = 0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = baseline_config();
        c.college_attendance_pct = 101.0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = baseline_config();
        c.years = 3;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = baseline_config();
        c.hazards = HazardVector{{0.2, 0.3, 0.1, 0.1}};
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }

    TEST_CASE("enroll at certain and zero attendance")
    {
        SimConfig c = baseline_config();
        c.college_attendance_pct = 100.0;
        SimState s = setup(c);
        enroll(s, c);
        CHECK(count_status(s, AgentStatus::Student) == 180);

        c.college_attendance_pct = 0.0;
        s = setup(c);
        enroll(s, c);
        CHECK(count_status(s, AgentStatus::Student) == 0);
        CHECK_THROWS_AS(enroll(s, c), std::logic_error);
    }

    TEST_CASE("mean attendance over 1000 seeds matches the binomial mean")
    {
        SimConfig c = baseline_config();
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            c.seed = seed;
            SimState s = setup(c);
            enroll(s, c);
            total += count_status(s, AgentStatus::Student);
        }
        const double oracle = 180 * 0.872;
        CHECK(oracle == doctest::Approx(156.96));
        CHECK(std::abs(total / 1000.0 - oracle) <= 1.0);
    }

    TEST_CASE("link counts have the right support and means")
    {
        Rng rng(2024);
        double t_sum = 0.0;
        double s_sum = 0.0;
        const int n = 100000;
        std::array<bool, kMaxTeacherLinks + 1> t_seen{};
        std::array<bool, kMaxStudentLinks + 1> s_seen{};
        for (int i = 0; i < n; ++i) {
            Agent a;
            form_links(a, rng);
            REQUIRE(a.teacher_links >= 0);
            REQUIRE(a.teacher_links <= 3);
            REQUIRE(a.student_links >= 0);
            REQUIRE(a.student_links <= 8);
            t_seen[static_cast<std::size_t>(a.teacher_links)] = true;
            s_seen[static_cast<std::size_t>(a.student_links)] = true;
            t_sum += a.teacher_links;
            s_sum += a.student_links;
        }
        CHECK(std::all_of(t_seen.begin(), t_seen.end(), [](bool b) { return b; }));
        CHECK(std::all_of(s_seen.begin(), s_seen.end(), [](bool b) { return b; }));
        CHECK(std::abs(t_sum / n - 1.5) <= 0.02);
        CHECK(std::abs(s_sum / n - 4.0) <= 0.04);
    }

    TEST_CASE("tick requires enrolment and stops after the final year")
    {
        SimConfig c = baseline_config();
        SimState s = setup(c);
        CHECK_THROWS_AS(tick(s, c), std::logic_error);
        enroll(s, c);
        for (int y = 0; y < kYears; ++y) {
            tick(s, c);
        }
        CHECK(s.current_year == kYears);
        CHECK_THROWS_AS(tick(s, c), std::logic_error);
    }

    TEST_CASE("all-ones factors with saturated links still see departures")
    {
        // Academic experience saturates at 0.5, so the level is at most 0.875
        // and the year-1 departure probability is at least h1 / 8.
        SimConfig c = baseline_config();
        c.factor_specs = FactorSpecs::all_fixed(1.0);
        c.college_attendance_pct = 100.0;
        long quitters = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            c.seed = seed;
            quitters += run(c).quitters;
        }
        CHECK(quitters > 0);
    }

    TEST_CASE("zero hazards mean no departures and everyone graduates")
    {
        SimConfig c = baseline_config();
        c.hazards = HazardVector{{0.0, 0.0, 0.0, 0.0}};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            c.seed = seed;
            const RunResult r = run(c);
            CHECK(r.quitters == 0);
            CHECK(r.graduates == r.attended);
            CHECK(r.attended > 0);
        }
    }

    TEST_CASE("zero attendance gives empty tallies")
    {
        SimConfig c = baseline_config();
        c.college_attendance_pct = 0.0;
        const RunResult r = run(c);
        CHECK(r.attended == 0);
        CHECK(r.graduates == 0);
        CHECK(r.quitters == 0);
        CHECK(r.never_attended == 180);
    }

    TEST_CASE("run is deterministic for a fixed seed")
    {
        SimConfig c = baseline_config();
        c.seed = 42;
        c.grid = GridSpec{};
        std::vector<TraceRecord> t1;
        std::vector<TraceRecord> t2;
        const RunResult a = run(c, t1);
        const RunResult b = run(c, t2);
        CHECK(a == b);
        CHECK(t1 == t2);
        CHECK(run(c) == a);
    }

    TEST_CASE("grid geometry does not change outcomes")
    {
        SimConfig c = baseline_config();
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            c.seed = seed;
            c.grid.reset();
            const RunResult plain = run(c);
            c.grid = GridSpec{};
            CHECK(run(c) == plain);
            c.grid = GridSpec::centered(60, 50, 20);
            CHECK(run(c) == plain);
        }
    }

    TEST_CASE("persisted counts are non-increasing over years")
    {
        SimConfig c = baseline_config();
        for (int rep = 0; rep < 10; ++rep) {
            c.seed = static_cast<std::uint64_t>(rep) * 7919;
            const RunResult r = run(c);
            for (int y = 1; y < kYears; ++y) {
                CHECK(r.persisted_by_year[static_cast<std::size_t>(y)] <=
                      r.persisted_by_year[static_cast<std::size_t>(y - 1)]);
            }
            CHECK(r.persisted_by_year[0] <= r.attended);
        }
    }

    TEST_CASE("baseline departures concentrate in the first year")
    {
        SimConfig c = baseline_config();
        std::array<long, kYears> departed{};
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            c.seed = seed;
            const RunResult r = run(c);
            for (int y = 0; y < kYears; ++y) {
                departed[static_cast<std::size_t>(y)] += r.departed_by_year[static_cast<std::size_t>(y)];
            }
        }
        for (int y = 1; y < kYears; ++y) {
            CHECK(departed[0] > departed[static_cast<std::size_t>(y)]);
        }
    }

    TEST_CASE("tallies rebuilt from the trace equal the direct tallies")
    {
        SimConfig c = baseline_config();
        c.grid = GridSpec{};
        for (std::uint64_t seed = 100; seed < 120; ++seed) {
            c.seed = seed;
            std::vector<TraceRecord> trace;
            const RunResult r = run(c, trace);
            CHECK(trace.size() == static_cast<std::size_t>((kYears + 1) * c.num_agents));
            CHECK(tally_trace(trace, seed) == r);
        }
    }

    TEST_CASE("link endpoints respect the drawn counts")
    {
        SimConfig c = baseline_config();
        c.grid = GridSpec{};
        c.seed = 5;
        SimState s = setup(c);
        enroll(s, c);
        std::vector<int> t_count(s.agents.size());
        std::vector<int> s_count(s.agents.size());
        for (const LinkEndpoint& l : s.links) {
            const Agent& partner = s.agents[static_cast<std::size_t>(l.partner)];
            CHECK(l.partner != l.student);
            CHECK((partner.role == Role::Teacher) == l.partner_is_teacher);
            (l.partner_is_teacher ? t_count : s_count)[static_cast<std::size_t>(l.student)]++;
        }
        for (const Agent& a : s.agents) {
            if (a.status == AgentStatus::Student) {
                CHECK(t_count[static_cast<std::size_t>(a.id)] == a.teacher_links);
                CHECK(s_count[static_cast<std::size_t>(a.id)] == a.student_links);
            }
        }
    }

    TEST_CASE("invariants hold for 1000 random configurations")
    {
        Rng rng(20211);
        int failures = 0;
        for (int i = 0; i < 1000; ++i) {
            const SimConfig c = testing::random_config(rng);
            const testing::Violations v = testing::check_run(c);
            if (!v.ok()) {
                ++failures;
                MESSAGE("config " << i << ": " << v.messages.front());
            }
        }
        CHECK(failures == 0);
    }
}
