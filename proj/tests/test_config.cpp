#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "schoolsim/config.hpp"

#include <doctest.h>

using namespace schoolsim;
using nlohmann::json;

TEST_CASE("defaults carry the calibrated anchors")
{
    const ScenarioConfig c = default_config();
    CHECK(c.infectivity.gamma == 0.03991913239861386);
    CHECK(c.lfd.eta == 1.7507691393088258);
    CHECK(c.policy.kind == PolicyKind::Reference);
    CHECK(c.horizon_days == 42);
    CHECK(c.replications == 250);
    CHECK(c.school.n_pupils() == 324);
    CHECK(c.external_infection_prob == doctest::Approx(1.0 / 2268.0).epsilon(1e-12));
    CHECK_FALSE(c.compliance.enabled);
    CHECK_FALSE(c.noise.enabled); // heavy-tail noise is an opt-in extension
}

TEST_CASE("a minimal config equals the defaults")
{
    const ScenarioConfig c = config_from_json(json{{"schema_version", 1}});
    CHECK(config_to_json(c) == config_to_json(default_config()));
}

TEST_CASE("schema version is mandatory and fixed")
{
    CHECK_THROWS_WITH_AS(config_from_json(json::object()),
                         "config: missing 'schema_version'", ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"schema_version", 2}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"schema_version", "1"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
}

TEST_CASE("the top-level detection limit reaches both consumers")
{
    const ScenarioConfig c =
        config_from_json(json{{"schema_version", 1}, {"lli", 1e5}});
    CHECK(c.disease.lli == 1e5);
    CHECK(c.infectivity.lli == 1e5);
}

TEST_CASE("unknown keys are rejected with their dotted path")
{
    CHECK_THROWS_WITH_AS(
        config_from_json(json{{"schema_version", 1}, {"bogus", 3}}),
        "config: unknown key 'bogus'", ConfigError);
    CHECK_THROWS_WITH_AS(
        config_from_json(json{{"schema_version", 1},
                              {"policy", {{"kin", "Reference"}}}}),
        "config: unknown key 'policy.kin'", ConfigError);
    CHECK_THROWS_WITH_AS(
        config_from_json(json{{"schema_version", 1}, {"lfd", {{"theta", 1.0}}}}),
        "config: unknown key 'lfd.theta'", ConfigError);
}

TEST_CASE("type mismatches name the offending field")
{
    CHECK_THROWS_WITH_AS(
        config_from_json(json{{"schema_version", 1}, {"policy", {{"kind", 3}}}}),
        "config: 'policy.kind' must be a string", ConfigError);
    CHECK_THROWS_WITH_AS(
        config_from_json(json{{"schema_version", 1}, {"replications", 2.5}}),
        "config: 'replications' must be an integer", ConfigError);
    CHECK_THROWS_WITH_AS(
        config_from_json(json{{"schema_version", 1}, {"noise", {{"enabled", 1}}}}),
        "config: 'noise.enabled' must be a boolean", ConfigError);
    CHECK_THROWS_WITH_AS(
        config_from_json(json{{"schema_version", 1}, {"base_seed", -5}}),
        "config: 'base_seed' must be non-negative", ConfigError);
    CHECK_THROWS_AS(
        config_from_json(json{{"schema_version", 1}, {"policy", {{"kind", "Midweek"}}}}),
        ConfigError);
}

TEST_CASE("configs survive a serialization round trip")
{
    ScenarioConfig c = default_config();
    c.school = SchoolConfig{4, 2, 2, 8};
    c.contacts = ContactStructure{0.9, 0.2, 0.01};
    c.disease.p_symptomatic = 0.4;
    c.noise.dof = 4.0;
    c.infectivity.gamma = 0.05;
    c.lfd.eta = 2.0;
    c.lfd.ar_gain = 0.75;
    c.pcr.turnaround_days = 3;
    c.compliance.enabled = true;
    c.policy.kind = PolicyKind::TestForRelease;
    c.policy.isolation_days = 12;
    c.policy.negative_release_days = 3;
    c.policy.tfr_followup_schooldays = 5;
    c.horizon_days = 35;
    c.external_infection_prob = 0.001;
    c.replications = 10;
    c.base_seed = 555;
    c.emit_daily = true;

    const json j = config_to_json(c);
    const ScenarioConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(back.policy.kind == PolicyKind::TestForRelease);
    CHECK(back.contacts.has_value());
    CHECK(back.contacts->p_class == 0.2);
}

TEST_CASE("loaded configs pass scenario validation")
{
    CHECK_THROWS_AS(
        config_from_json(json{{"schema_version", 1}, {"horizon_days", 0}}),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_json(json{{"schema_version", 1}, {"lli", -1.0}}),
        ConfigError);
}

TEST_CASE("a grid expands to the key-sorted cross product")
{
    json j{{"schema_version", 1},
           {"replications", 5},
           {"grid",
            {{"infectivity.gamma", {0.01, 0.02, 0.03}},
             {"policy.kind", {"Reference", "TestForRelease"}}}}};

    const auto cells = scenarios_from_json(j);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].id == "infectivity.gamma=0.01,policy.kind=Reference");
    CHECK(cells[1].id == "infectivity.gamma=0.01,policy.kind=TestForRelease");
    CHECK(cells[5].id == "infectivity.gamma=0.03,policy.kind=TestForRelease");
    CHECK(cells[0].config.infectivity.gamma == 0.01);
    CHECK(cells[0].config.policy.kind == PolicyKind::Reference);
    CHECK(cells[5].config.infectivity.gamma == 0.03);
    CHECK(cells[5].config.policy.kind == PolicyKind::TestForRelease);
    for (const auto& cell : cells) {
        CHECK(cell.config.replications == 5); // base settings reach every cell
        CHECK(cell.config.lfd.eta == default_config().lfd.eta);
    }
}

TEST_CASE("gridless files yield the single base cell")
{
    const auto plain = scenarios_from_json(json{{"schema_version", 1}});
    REQUIRE(plain.size() == 1);
    CHECK(plain[0].id == "base");

    const auto empty_grid =
        scenarios_from_json(json{{"schema_version", 1}, {"grid", json::object()}});
    REQUIRE(empty_grid.size() == 1);
    CHECK(empty_grid[0].id == "base");
}

TEST_CASE("grid errors carry the failing cell id")
{
    json j{{"schema_version", 1},
           {"grid", {{"infectivity.gamma", {0.01, -1.0}}}}};
    try {
        scenarios_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("grid cell 'infectivity.gamma=-1.0'") != std::string::npos);
    }

    CHECK_THROWS_AS(
        scenarios_from_json(json{{"schema_version", 1}, {"grid", {{"lli", 5.0}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        scenarios_from_json(
            json{{"schema_version", 1}, {"grid", {{"lli", json::array()}}}}),
        ConfigError);
}

TEST_CASE("file loading distinguishes io and parse failures")
{
    CHECK_THROWS_AS(load_config("/tmp/definitely_missing_config.json"), IoError);

    const std::string path = "/tmp/schoolsim_bad_config.json";
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << R"({"schema_version": 1, "replications": 7})";
    }
    const ScenarioConfig c = load_config(path);
    CHECK(c.replications == 7);
    const auto cells = load_scenarios(path);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].config.replications == 7);
    std::remove(path.c_str());
}
