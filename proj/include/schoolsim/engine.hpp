#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schoolsim/disease.hpp"
#include "schoolsim/policy.hpp"
#include "schoolsim/population.hpp"
#include "schoolsim/testing.hpp"
#include "schoolsim/transmission.hpp"
#include "schoolsim/types.hpp"

namespace schoolsim {

struct ScenarioConfig {
    SchoolConfig school;
    std::optional<ContactStructure> contacts; // defaults derived from school when absent
    DiseaseParams disease;
    HeavyTailNoiseParams noise;
    InfectivityParams infectivity;
    LfdModelParams lfd;
    PcrModelParams pcr;
    ComplianceParams compliance;
    PolicySpec policy;
    int horizon_days = 42;          // day 0 is a Monday
    double external_infection_prob = 1.0 / 324.0 / 7.0; // per susceptible pupil-day
    int replications = 250;
    std::uint64_t base_seed = 12345;
    bool emit_daily = false;
};

void validate_scenario(const ScenarioConfig& config);

struct PupilState {
    std::optional<ViralLoadTrajectory> trajectory;
    Day infection_day = 0;       // meaningful only when trajectory is set
    PupilId infected_by = -2;    // -1 external, >= 0 source pupil
    double compliance_p = 1.0;
    double sensitivity_effect = 0.0;
    TestHistory history;
    std::vector<PersonalConstraint> constraints;
    bool symptomatic_yesterday = false;
    int days_attended = 0;
    int days_missed = 0;
    int lfd_tests = 0;
    int pcr_tests = 0;
};

struct RunState {
    const ScenarioConfig* config = nullptr;
    SchoolLayout layout;
    std::uint64_t seed = 0;         // contacts, tests, symptoms, external events
    std::uint64_t disease_seed = 0; // trajectories, noise, per-pupil effects
    std::optional<NoiseSampler> noise_sampler;

    std::vector<PupilState> pupils;
    std::vector<std::vector<BubbleConstraint>> bubble_constraints;
    std::vector<PendingPcr> pending_pcrs;
    std::vector<TfrFollowup> followups;

    std::vector<char> ever_infected;
    std::vector<char> forced_absent; // empty, or per-pupil exclusion from school
    std::vector<double> vl_today;
    int n_infected = 0;
    int n_external = 0;
    std::vector<int> daily_infectious_free; // carriers not isolated, per day

    RunState(const ScenarioConfig& cfg, const SchoolLayout& layout_,
             std::uint64_t run_seed_);
};

struct RunResult {
    int replication = 0;
    std::uint64_t seed = 0;
    double proportion_infected = 0.0;
    double proportion_schooldays_missed = 0.0;
    double lfd_tests_per_pupil = 0.0;
    double pcr_tests_per_pupil = 0.0;
    std::vector<int> daily_infectious_free; // filled only when emit_daily is set
};

// Seeds a trajectory for one pupil; infected_by = -1 marks a community source.
void infect_pupil(RunState& state, PupilId pupil, Day day, PupilId infected_by);

double current_vl(const RunState& state, PupilId pupil, Day day);
void refresh_vl_today(RunState& state, Day day);

bool attends_school(const RunState& state, PupilId pupil, Day day);

// In-school contact and transmission pass for one day; assumes vl_today is
// current.  Only carrier-susceptible pairs are resolved; the keyed draws make
// this equivalent to enumerating all contacts.
void transmission_step(RunState& state, Day day);

void run_day(RunState& state, Day day);
RunResult finish_run(const RunState& state, int replication);
RunResult run_one(const ScenarioConfig& config, const SchoolLayout& layout,
                  int replication);
std::vector<RunResult> run_scenario(const ScenarioConfig& config);

} // namespace schoolsim
