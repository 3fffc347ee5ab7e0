#include "doctest.h"

#include <algorithm>

#include "oracles.hpp"
#include "persist/model.hpp"
#include "persist/rng.hpp"

using namespace persist;

TEST_SUITE("model")
{
    TEST_CASE("effective_factor examples")
    {
        CHECK(effective_factor(0.5, 3) == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(effective_factor(1.0, 8) == 1.0);
        CHECK(effective_factor(0.0, 5) == 0.0);
    }

    TEST_CASE("effective_factor with no links is one fifth of the initial value")
    {
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            CHECK(effective_factor(x, 0) == doctest::Approx(0.2 * x).epsilon(1e-15));
        }
    }

    TEST_CASE("effective_factor is monotone in both arguments and stays in [0,1]")
    {
        for (int i = 0; i <= 50; ++i) {
            const double x = i / 50.0;
            for (int links = 0; links <= kMaxStudentLinks; ++links) {
                const double v = effective_factor(x, links);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                CHECK(v == doctest::Approx(testing::oracle_effective(x, links)));
                if (links > 0) {
                    CHECK(v >= effective_factor(x, links - 1));
                }
                if (i > 0) {
                    CHECK(v >= effective_factor((i - 1) / 50.0, links));
                }
            }
        }
    }

    TEST_CASE("composite level examples")
    {
        CHECK(composite_persistence_level(FactorVector{0.0, 0.0, 0.0, 0.0}, 2, 5) == 0.0);

        // goal 0.5, skill 0.5, academic 0.5 with 3 teacher links, integration 0.5 with 8 student links.
        const double expected = testing::oracle_level(0.5, 0.5, 0.5, 3, 0.5, 8);
        CHECK(expected == doctest::Approx(0.4375).epsilon(1e-15));
        CHECK(composite_persistence_level(FactorVector{0.5, 0.5, 0.5, 0.5}, 3, 8) == doctest::Approx(expected));
    }

    TEST_CASE("composite level at saturated links")
    {
        // Academic experience tops out at 0.5 with three teacher links, so the
        // highest reachable level is (1 + 1 + 0.5 + 1) / 4.
        Agent a;
        a.status = AgentStatus::Student;
        a.factors = {1.0, 1.0, 1.0, 1.0};
        a.teacher_links = kMaxTeacherLinks;
        a.student_links = kMaxStudentLinks;
        const double expected = testing::oracle_level(1.0, 1.0, 1.0, 3, 1.0, 8);
        CHECK(expected == doctest::Approx(0.875));
        CHECK(composite_persistence_level(a) == doctest::Approx(expected).epsilon(1e-15));
    }

    TEST_CASE("composite level lies in the convex hull of its inputs and ignores order of equal factors")
    {
        Rng rng(11);
        for (int trial = 0; trial < 2000; ++trial) {
            FactorVector f{rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()};
            const int t = rng.uniform_int(0, 3);
            const int s = rng.uniform_int(0, 8);
            const std::array<double, 4> terms = {f.goal, f.social_skill, effective_factor(f.academic_experience_init, t),
                                                 effective_factor(f.social_integration_init, s)};
            const double level = composite_persistence_level(f, t, s);
            CHECK(level >= *std::min_element(terms.begin(), terms.end()) - 1e-15);
            CHECK(level <= *std::max_element(terms.begin(), terms.end()) + 1e-15);

            FactorVector swapped = f;
            std::swap(swapped.goal, swapped.social_skill);
            CHECK(composite_persistence_level(swapped, t, s) == doctest::Approx(level).epsilon(1e-15));
        }
    }

    TEST_CASE("departure_probability examples")
    {
        const HazardVector h{{0.9, 0.45, 0.25, 0.15}};
        CHECK(departure_probability(1.0, 1, h) == 0.0);
        CHECK(departure_probability(1.0, 1, HazardVector{{1.0, 1.0, 1.0, 1.0}}) == 0.0);
        CHECK(departure_probability(0.0, 1, h) == doctest::Approx(0.9));
        // Brute-force evaluation of h1 * (1 - level).
        const double oracle = 0.9 * (1.0 - 0.4375);
        CHECK(oracle == doctest::Approx(0.50625).epsilon(1e-15));
        CHECK(departure_probability(0.4375, 1, h) == doctest::Approx(oracle).epsilon(1e-15));
    }

    TEST_CASE("departure_probability is bounded, decreasing in level and non-increasing in year")
    {
        Rng rng(5);
        for (int trial = 0; trial < 500; ++trial) {
            std::array<double, 4> raw{rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()};
            std::sort(raw.begin(), raw.end(), std::greater<>());
            const HazardVector h{raw};
            for (int y = 1; y <= kYears; ++y) {
                double previous = 2.0;
                for (int i = 0; i <= 20; ++i) {
                    const double level = i / 20.0;
                    const double p = departure_probability(level, y, h);
                    CHECK(p >= 0.0);
                    CHECK(p <= 1.0);
                    if (h[y] > 0.0) {
                        CHECK(p < previous);
                    }
                    previous = p;
                    if (y > 1) {
                        CHECK(p <= departure_probability(level, y - 1, h));
                    }
                }
                CHECK(departure_probability(1.0, y, h) == 0.0);
            }
        }
    }

    TEST_CASE("factor and hazard validation")
    {
        CHECK_THROWS_AS(FactorSpec::fixed(1.5), ConfigError);
        CHECK_THROWS_AS(FactorSpec::fixed(-0.1), ConfigError);
        CHECK_NOTHROW(FactorSpec::fixed(0.0));
        CHECK_NOTHROW(FactorSpec::fixed(1.0));
        CHECK_THROWS_AS((HazardVector{{0.1, 0.2, 0.1, 0.0}}.validate()), ConfigError);
        CHECK_NOTHROW(HazardVector::prior().validate());
        CHECK_NOTHROW(HazardVector::fitted().validate());
        CHECK_THROWS_AS((FactorVector{0.5, 1.2, 0.5, 0.5}.validate()), ConfigError);
    }

    TEST_CASE("factor names round trip and unknown names list the valid ones")
    {
        for (Factor f : kAllFactors) {
            CHECK(parse_factor(factor_name(f)) == f);
        }
        try {
            parse_factor("bogus");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("goal") != std::string::npos);
            CHECK(msg.find("social_integration") != std::string::npos);
        }
    }

    TEST_CASE("legal transitions")
    {
        using S = AgentStatus;
        CHECK(legal_transition(S::Resident, S::Student, 1));
        CHECK_FALSE(legal_transition(S::Resident, S::Student, 2));
        CHECK(legal_transition(S::Resident, S::Resident, 3));
        CHECK(legal_transition(S::Student, S::Quitter, 3));
        CHECK(legal_transition(S::Student, S::Graduate, 4));
        CHECK_FALSE(legal_transition(S::Student, S::Graduate, 3));
        CHECK_FALSE(legal_transition(S::Student, S::Student, 4));
        CHECK_FALSE(legal_transition(S::Quitter, S::Student, 2));
        CHECK_FALSE(legal_transition(S::Graduate, S::Quitter, 4));
        CHECK(legal_transition(S::Quitter, S::Quitter, 4));
    }
}
