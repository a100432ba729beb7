#include <cmath>
#include <vector>

#include "schoolsim/transmission.hpp"

#include <doctest.h>

using namespace schoolsim;

TEST_CASE("infection probability is a clipped line in log10 viral load")
{
    InfectivityParams p;
    p.gamma = 0.1;
    p.lli = 1e6;

    CHECK(infection_probability(p, 0.0) == 0.0);
    CHECK(infection_probability(p, 1e6) == 0.0);
    CHECK(infection_probability(p, 1e5) == 0.0); // below the limit clips at zero
    CHECK(infection_probability(p, 1e8) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(infection_probability(p, 1e11) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(infection_probability(p, 1e20) == 1.0); // clipped from 1.4

    p.gamma = 0.0;
    CHECK(infection_probability(p, 1e10) == 0.0);

    p.gamma = 0.1;
    p.lli = 1e3;
    CHECK(infection_probability(p, 1e8) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("invalid infectivity parameters are rejected")
{
    InfectivityParams p;
    p.gamma = -0.1;
    CHECK_THROWS_AS(infection_probability(p, 1e7), ConfigError);
    p.gamma = 0.1;
    p.lli = 0.0;
    CHECK_THROWS_AS(infection_probability(p, 1e7), ConfigError);
}

TEST_CASE("attempt_transmission resolves carrier and susceptible sides")
{
    InfectivityParams p;
    p.gamma = 1.0; // log10 vl 7 - 6 = 1 -> certain transmission
    p.lli = 1e6;

    std::vector<char> ever(4, 0);
    std::vector<double> vl(4, 0.0);
    ContactEvent c{0, 1, ContactLevel::Bubble, 5};

    SUBCASE("carrier infects the susceptible side with certainty at f = 1")
    {
        ever[0] = 1;
        vl[0] = 1e8;
        const auto hit = attempt_transmission(c, ever, vl, p, 99);
        REQUIRE(hit.has_value());
        CHECK(*hit == 1);
    }

    SUBCASE("direction flips with the carrier")
    {
        ever[1] = 1;
        vl[1] = 1e8;
        const auto hit = attempt_transmission(c, ever, vl, p, 99);
        REQUIRE(hit.has_value());
        CHECK(*hit == 0);
    }

    SUBCASE("no carrier, nothing happens")
    {
        CHECK_FALSE(attempt_transmission(c, ever, vl, p, 99).has_value());
    }

    SUBCASE("both already infected, nothing happens")
    {
        ever[0] = ever[1] = 1;
        vl[0] = 1e8;
        vl[1] = 1e7;
        CHECK_FALSE(attempt_transmission(c, ever, vl, p, 99).has_value());
    }

    SUBCASE("recovered carrier with zero load cannot transmit")
    {
        ever[0] = 1;
        vl[0] = 0.0;
        CHECK_FALSE(attempt_transmission(c, ever, vl, p, 99).has_value());
    }
}

TEST_CASE("transmission frequency matches the linear probability")
{
    InfectivityParams p;
    p.gamma = 0.1;
    p.lli = 1e6;

    std::vector<char> ever = {1, 0};
    std::vector<double> vl = {1e8, 0.0}; // f = 0.2

    int hits = 0;
    const int n = 20000;
    for (int day = 0; day < n; ++day) {
        const ContactEvent c{0, 1, ContactLevel::School, day};
        if (attempt_transmission(c, ever, vl, p, 1234).has_value())
            ++hits;
    }
    CHECK(static_cast<double>(hits) / n == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("transmission draws are keyed by pair, day and level")
{
    InfectivityParams p;
    p.gamma = 0.05;
    p.lli = 1e6;
    std::vector<char> ever = {1, 0};
    std::vector<double> vl = {1e9, 0.0};

    const ContactEvent c1{0, 1, ContactLevel::Bubble, 3};
    const auto r1 = attempt_transmission(c1, ever, vl, p, 42);
    const auto r2 = attempt_transmission(c1, ever, vl, p, 42);
    CHECK(r1.has_value() == r2.has_value());

    // Same pair and day at another level resolves independently; over many
    // days the two levels must disagree at least once.
    bool disagree = false;
    for (int day = 0; day < 200 && !disagree; ++day) {
        const ContactEvent cb{0, 1, ContactLevel::Bubble, day};
        const ContactEvent cs{0, 1, ContactLevel::School, day};
        disagree = attempt_transmission(cb, ever, vl, p, 42).has_value() !=
                   attempt_transmission(cs, ever, vl, p, 42).has_value();
    }
    CHECK(disagree);
}
