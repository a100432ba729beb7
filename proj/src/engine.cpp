#include "schoolsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace schoolsim {

void validate_scenario(const ScenarioConfig& c)
{
    if (c.horizon_days < 1)
        throw ConfigError("horizon_days must be >= 1");
    if (c.replications < 1)
        throw ConfigError("replications must be >= 1");
    if (!(c.external_infection_prob >= 0.0 && c.external_infection_prob <= 1.0))
        throw ConfigError("external_infection_prob must lie in [0, 1]");
    if (!(c.disease.noncovid_symptom_rate >= 0.0 && c.disease.noncovid_symptom_rate <= 1.0))
        throw ConfigError("disease.noncovid_symptom_rate must lie in [0, 1]");
    if (!(c.disease.p_symptomatic >= 0.0 && c.disease.p_symptomatic <= 1.0))
        throw ConfigError("disease.p_symptomatic must lie in [0, 1]");
    if (!(c.disease.lli > 0.0) || !(c.infectivity.lli > 0.0))
        throw ConfigError("lli must be positive");
    if (c.policy.isolation_days < 1 || c.policy.negative_release_days < 0 ||
        c.policy.tfr_followup_schooldays < 1)
        throw ConfigError("policy day spans out of range");
    if (c.policy.negative_release_days > c.policy.isolation_days)
        throw ConfigError("policy: negative_release_days must not exceed isolation_days");
    if (!(c.infectivity.gamma >= 0.0))
        throw ConfigError("infectivity.gamma must be >= 0");
    if (c.pcr.turnaround_days < 1)
        throw ConfigError("pcr.turnaround_days must be >= 1");
    // Construction doubles as validation for the structured sub-models.
    if (c.contacts.has_value())
        (void)build_school(c.school, *c.contacts);
    else
        (void)build_school(c.school);
    if (c.noise.enabled)
        (void)NoiseSampler(c.noise);
    (void)lfd_positive_probability(c.lfd, 0.0, 0.0, {}, 0);
    (void)pcr_positive(c.pcr, 0.0, 0.5);
    if (c.compliance.enabled) {
        SplitMix64 probe(1);
        (void)sample_compliance(c.compliance, probe);
    }
}

RunState::RunState(const ScenarioConfig& cfg, const SchoolLayout& layout_,
                   std::uint64_t run_seed_)
    : config(&cfg), layout(layout_), seed(run_seed_), disease_seed(run_seed_)
{
    const int n = layout.n_pupils();
    pupils.assign(static_cast<std::size_t>(n), PupilState{});
    bubble_constraints.assign(layout.bubble_members.size(), {});
    ever_infected.assign(static_cast<std::size_t>(n), 0);
    vl_today.assign(static_cast<std::size_t>(n), 0.0);
    if (cfg.noise.enabled)
        noise_sampler.emplace(cfg.noise);
    for (PupilId p = 0; p < n; ++p) {
        if (cfg.compliance.enabled) {
            auto eng = keyed_engine(seed, Stream::Compliance, static_cast<std::uint64_t>(p));
            pupils[static_cast<std::size_t>(p)].compliance_p =
                sample_compliance(cfg.compliance, eng);
        }
        if (cfg.lfd.beta_u != 0.0) {
            auto eng = keyed_engine(disease_seed, Stream::Effect, static_cast<std::uint64_t>(p));
            std::normal_distribution<double> gauss(0.0, 1.0);
            pupils[static_cast<std::size_t>(p)].sensitivity_effect = gauss(eng);
        }
    }
}

void infect_pupil(RunState& st, PupilId pupil, Day day, PupilId infected_by)
{
    auto& ps = st.pupils[static_cast<std::size_t>(pupil)];
    auto eng = keyed_engine(st.disease_seed, Stream::Disease, static_cast<std::uint64_t>(pupil));
    ViralLoadTrajectory traj = sample_trajectory(st.config->disease, eng);
    if (st.noise_sampler.has_value())
        attach_noise(traj, *st.noise_sampler, eng);
    ps.trajectory = traj;
    ps.infection_day = day;
    ps.infected_by = infected_by;
    st.ever_infected[static_cast<std::size_t>(pupil)] = 1;
    ++st.n_infected;
    if (infected_by == -1)
        ++st.n_external;
}

double current_vl(const RunState& st, PupilId pupil, Day day)
{
    const auto& ps = st.pupils[static_cast<std::size_t>(pupil)];
    if (!ps.trajectory.has_value() || day < ps.infection_day)
        return 0.0;
    return viral_load_on_day(*ps.trajectory, day - ps.infection_day);
}

void refresh_vl_today(RunState& st, Day day)
{
    const int n = st.layout.n_pupils();
    for (PupilId p = 0; p < n; ++p)
        st.vl_today[static_cast<std::size_t>(p)] = current_vl(st, p, day);
}

bool attends_school(const RunState& st, PupilId pupil, Day day)
{
    return is_school_day(st.config->policy.kind, day) && !is_isolated(st, pupil, day);
}

void transmission_step(RunState& st, Day day)
{
    const SchoolLayout& layout = st.layout;
    const ContactStructure& cs = layout.contacts;
    const InfectivityParams& inf = st.config->infectivity;
    const int n = layout.n_pupils();

    std::vector<char> present(static_cast<std::size_t>(n), 0);
    std::vector<PupilId> sources;
    for (PupilId p = 0; p < n; ++p) {
        if (!st.forced_absent.empty() && st.forced_absent[static_cast<std::size_t>(p)])
            continue;
        if (is_isolated(st, p, day))
            continue;
        present[static_cast<std::size_t>(p)] = 1;
        if (st.vl_today[static_cast<std::size_t>(p)] > inf.lli)
            sources.push_back(p);
    }

    // Only carrier-susceptible pairs with positive transmission odds carry a
    // draw that can land; the keyed substreams make skipping the rest exact.
    for (PupilId src : sources) {
        const double f = infection_probability(inf, st.vl_today[static_cast<std::size_t>(src)]);
        if (f <= 0.0)
            continue;
        for (PupilId tgt = 0; tgt < n; ++tgt) {
            if (tgt == src || !present[static_cast<std::size_t>(tgt)] ||
                st.ever_infected[static_cast<std::size_t>(tgt)])
                continue;
            const PupilId a = std::min(src, tgt), b = std::max(src, tgt);
            const std::uint64_t ka = static_cast<std::uint64_t>(a);
            const std::uint64_t kb = static_cast<std::uint64_t>(b);
            const bool same_class = layout.class_of[a] == layout.class_of[b];
            const bool same_bubble = layout.bubble_of[a] == layout.bubble_of[b];
            for (int lvl = 0; lvl < 3; ++lvl) {
                const auto level = static_cast<ContactLevel>(lvl);
                double p_contact;
                if (level == ContactLevel::Bubble) {
                    if (!same_bubble)
                        continue;
                    p_contact = cs.p_bubble;
                } else if (level == ContactLevel::Class) {
                    if (!same_class)
                        continue;
                    p_contact = cs.p_class;
                } else {
                    p_contact = cs.p_school;
                }
                if (p_contact <= 0.0)
                    continue;
                const std::uint64_t lvl_key =
                    static_cast<std::uint64_t>(day) * 4 + static_cast<std::uint64_t>(lvl);
                if (keyed_uniform(st.seed, Stream::Contact, ka, kb, lvl_key) >= p_contact)
                    continue;
                if (keyed_uniform(st.seed, Stream::Transmission, ka, kb, lvl_key) < f) {
                    infect_pupil(st, tgt, day, src);
                    break;
                }
            }
        }
    }
}

void run_day(RunState& st, Day day)
{
    const ScenarioConfig& cfg = *st.config;
    const int n = st.layout.n_pupils();

    // Community introductions land overnight, independent of isolation.
    if (cfg.external_infection_prob > 0.0) {
        for (PupilId p = 0; p < n; ++p) {
            if (st.ever_infected[static_cast<std::size_t>(p)])
                continue;
            if (keyed_uniform(st.seed, Stream::External, static_cast<std::uint64_t>(p),
                              static_cast<std::uint64_t>(day)) < cfg.external_infection_prob)
                infect_pupil(st, p, day, -1);
        }
    }

    refresh_vl_today(st, day);
    morning_step(st, day);

    if (is_standard_school_day(day)) {
        const bool closed = is_closure_day(cfg.policy.kind, day);
        for (PupilId p = 0; p < n; ++p) {
            auto& ps = st.pupils[static_cast<std::size_t>(p)];
            if (closed || is_isolated(st, p, day))
                ++ps.days_missed;
            else
                ++ps.days_attended;
        }
    }

    int free_carriers = 0;
    for (PupilId p = 0; p < n; ++p)
        if (st.vl_today[static_cast<std::size_t>(p)] > cfg.infectivity.lli &&
            attends_school(st, p, day))
            ++free_carriers;
    st.daily_infectious_free.push_back(free_carriers);

    if (is_school_day(cfg.policy.kind, day))
        transmission_step(st, day);
}

static int standard_school_days(int horizon)
{
    int k = 0;
    for (Day d = 0; d < horizon; ++d)
        if (is_standard_school_day(d))
            ++k;
    return k;
}

RunResult finish_run(const RunState& st, int replication)
{
    const int n = st.layout.n_pupils();
    const int school_days = standard_school_days(st.config->horizon_days);

    RunResult r;
    r.replication = replication;
    r.seed = st.seed;
    r.proportion_infected = static_cast<double>(st.n_infected) / n;
    long missed = 0, lfd = 0, pcr = 0;
    for (const auto& ps : st.pupils) {
        missed += ps.days_missed;
        lfd += ps.lfd_tests;
        pcr += ps.pcr_tests;
    }
    r.proportion_schooldays_missed =
        school_days > 0 ? static_cast<double>(missed) / (static_cast<double>(n) * school_days)
                        : 0.0;
    r.lfd_tests_per_pupil = static_cast<double>(lfd) / n;
    r.pcr_tests_per_pupil = static_cast<double>(pcr) / n;
    if (st.config->emit_daily)
        r.daily_infectious_free = st.daily_infectious_free;
    return r;
}

RunResult run_one(const ScenarioConfig& cfg, const SchoolLayout& layout, int replication)
{
    RunState st(cfg, layout, run_seed(cfg.base_seed, replication));
    for (Day d = 0; d < cfg.horizon_days; ++d)
        run_day(st, d);
    return finish_run(st, replication);
}

std::vector<RunResult> run_scenario(const ScenarioConfig& cfg)
{
    validate_scenario(cfg);
    const SchoolLayout layout =
        cfg.contacts.has_value() ? build_school(cfg.school, *cfg.contacts)
                                 : build_school(cfg.school);
    std::vector<RunResult> results;
    results.reserve(static_cast<std::size_t>(cfg.replications));
    for (int rep = 0; rep < cfg.replications; ++rep)
        results.push_back(run_one(cfg, layout, rep));
    return results;
}

} // namespace schoolsim
