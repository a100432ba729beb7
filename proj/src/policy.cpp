#include "schoolsim/policy.hpp"

#include <algorithm>
#include <vector>

#include "schoolsim/engine.hpp"
#include "schoolsim/rng.hpp"

namespace schoolsim {

const char* policy_name(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::Reference: return "Reference";
    case PolicyKind::ExtendedWeekend: return "ExtendedWeekend";
    case PolicyKind::MondayScreening: return "MondayScreening";
    case PolicyKind::MonWedScreening: return "MonWedScreening";
    case PolicyKind::TestForRelease: return "TestForRelease";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy(const std::string& name)
{
    for (PolicyKind k : {PolicyKind::Reference, PolicyKind::ExtendedWeekend,
                         PolicyKind::MondayScreening, PolicyKind::MonWedScreening,
                         PolicyKind::TestForRelease})
        if (name == policy_name(k))
            return k;
    return std::nullopt;
}

bool is_isolated(const RunState& st, PupilId pupil, Day day)
{
    for (const auto& c : st.pupils[static_cast<std::size_t>(pupil)].constraints)
        if (day < c.release)
            return true;
    const int bubble = st.layout.bubble_of[static_cast<std::size_t>(pupil)];
    for (const auto& c : st.bubble_constraints[static_cast<std::size_t>(bubble)])
        if (day < c.release)
            return true;
    return false;
}

IsolationView isolation_view(const RunState& st, PupilId pupil, Day day)
{
    IsolationView v;
    for (const auto& c : st.pupils[static_cast<std::size_t>(pupil)].constraints) {
        if (day < c.release && c.release > v.release_day) {
            v.isolated = true;
            v.release_day = c.release;
            v.cause = c.cause;
        }
    }
    const int bubble = st.layout.bubble_of[static_cast<std::size_t>(pupil)];
    for (const auto& c : st.bubble_constraints[static_cast<std::size_t>(bubble)]) {
        if (day < c.release && c.release > v.release_day) {
            v.isolated = true;
            v.release_day = c.release;
            v.cause = IsolationCause::Bubble;
        }
    }
    return v;
}

// A new index case: isolate, swab for PCR, and open the policy follow-up
// (bubble follow-up testing under TestForRelease, provisional bubble
// quarantine on a screening hit).
static void trigger_index(RunState& st, PupilId pupil, Day day, IsolationCause cause,
                          bool was_isolated)
{
    const ScenarioConfig& cfg = *st.config;
    auto& ps = st.pupils[static_cast<std::size_t>(pupil)];

    ps.constraints.push_back(PersonalConstraint{day + cfg.policy.isolation_days, day, cause});
    st.pending_pcrs.push_back(PendingPcr{pupil, day, false});
    ++ps.pcr_tests;

    const int bubble = st.layout.bubble_of[static_cast<std::size_t>(pupil)];
    if (cfg.policy.kind == PolicyKind::TestForRelease) {
        // An index already in isolation exposes nobody; no fresh follow-up.
        if (!was_isolated)
            st.followups.push_back(TfrFollowup{bubble, pupil, day,
                                               cfg.policy.tfr_followup_schooldays, true});
    } else if (cause == IsolationCause::LfdPositive) {
        st.bubble_constraints[static_cast<std::size_t>(bubble)].push_back(
            BubbleConstraint{day + cfg.policy.isolation_days, day, pupil});
    }
}

static void resolve_pcr(RunState& st, PendingPcr& pcr, Day today)
{
    const ScenarioConfig& cfg = *st.config;
    auto& ps = st.pupils[static_cast<std::size_t>(pcr.pupil)];
    const double vl = current_vl(st, pcr.pupil, pcr.swab_day);
    const double u = keyed_uniform(st.seed, Stream::Pcr,
                                   static_cast<std::uint64_t>(pcr.pupil),
                                   static_cast<std::uint64_t>(pcr.swab_day));
    const bool positive = pcr_positive(cfg.pcr, vl, u);
    ps.history.push_back(TestRecord{pcr.swab_day, TestKind::Pcr, positive});

    for (auto& c : ps.constraints) {
        if (c.pending_swab == pcr.swab_day) {
            if (!positive)
                c.release = pcr.swab_day + cfg.policy.negative_release_days;
            c.pending_swab.reset();
        }
    }

    const int bubble = st.layout.bubble_of[static_cast<std::size_t>(pcr.pupil)];
    auto& bcs = st.bubble_constraints[static_cast<std::size_t>(bubble)];
    for (auto& c : bcs) {
        if (c.pending_swab == pcr.swab_day && c.source == pcr.pupil) {
            if (!positive)
                c.release = pcr.swab_day + cfg.policy.negative_release_days;
            c.pending_swab.reset();
        }
    }

    if (cfg.policy.kind == PolicyKind::TestForRelease) {
        if (!positive)
            for (auto& f : st.followups)
                if (f.index == pcr.pupil && f.trigger_day == pcr.swab_day)
                    f.active = false;
    } else if (positive) {
        // Quarantine the bubble from the result day; any later positive in the
        // bubble pushes the shared release out again via its own constraint.
        bcs.push_back(BubbleConstraint{pcr.swab_day + cfg.policy.isolation_days,
                                       std::nullopt, pcr.pupil});
    }

    pcr.resolved = true;
    (void)today;
}

// One LFD for every listed pupil, all swabs before any consequence is applied:
// a positive classmate found this morning cannot cancel a neighbour's test.
static void lfd_test_group(RunState& st, const std::vector<PupilId>& group, Day day)
{
    const ScenarioConfig& cfg = *st.config;
    std::vector<PupilId> positives;
    for (PupilId p : group) {
        auto& ps = st.pupils[static_cast<std::size_t>(p)];
        if (cfg.compliance.enabled &&
            keyed_uniform(st.seed, Stream::ComplianceCoin, static_cast<std::uint64_t>(p),
                          static_cast<std::uint64_t>(day)) >= ps.compliance_p)
            continue;
        const double prob = lfd_positive_probability(cfg.lfd,
                                                     st.vl_today[static_cast<std::size_t>(p)],
                                                     ps.sensitivity_effect, ps.history, day);
        const bool positive = keyed_uniform(st.seed, Stream::Lfd,
                                            static_cast<std::uint64_t>(p),
                                            static_cast<std::uint64_t>(day)) < prob;
        ps.history.push_back(TestRecord{day, TestKind::Lfd, positive});
        ++ps.lfd_tests;
        if (positive)
            positives.push_back(p);
    }
    for (PupilId p : positives)
        trigger_index(st, p, day, IsolationCause::LfdPositive, false);
}

static void screening_pass(RunState& st, Day day)
{
    std::vector<PupilId> group;
    const int n = st.layout.n_pupils();
    for (PupilId p = 0; p < n; ++p)
        if (!is_isolated(st, p, day))
            group.push_back(p);
    lfd_test_group(st, group, day);
}

static void followup_pass(RunState& st, Day day)
{
    std::vector<int> due;
    for (const auto& f : st.followups)
        if (f.active && f.remaining_schooldays > 0 && f.trigger_day < day)
            due.push_back(f.bubble);
    std::sort(due.begin(), due.end());
    due.erase(std::unique(due.begin(), due.end()), due.end());

    std::vector<PupilId> group;
    for (int bubble : due)
        for (PupilId p : st.layout.bubble_members[static_cast<std::size_t>(bubble)])
            if (!is_isolated(st, p, day))
                group.push_back(p);
    lfd_test_group(st, group, day);

    // Today consumed one follow-up school day; follow-ups opened this morning
    // (trigger_day == day) begin counting tomorrow.
    for (auto& f : st.followups) {
        if (f.active && f.remaining_schooldays > 0 && f.trigger_day < day) {
            --f.remaining_schooldays;
            if (f.remaining_schooldays == 0)
                f.active = false;
        }
    }
}

void morning_step(RunState& st, Day day)
{
    const ScenarioConfig& cfg = *st.config;
    const int n = st.layout.n_pupils();

    for (auto& pcr : st.pending_pcrs)
        if (!pcr.resolved && pcr.swab_day + cfg.pcr.turnaround_days == day)
            resolve_pcr(st, pcr, day);

    // Symptom onsets are checked every day, weekends included; consecutive
    // symptomatic days merge into the one trigger at onset.
    for (PupilId p = 0; p < n; ++p) {
        auto& ps = st.pupils[static_cast<std::size_t>(p)];
        bool sym = false;
        if (ps.trajectory.has_value() && day >= ps.infection_day)
            sym = symptomatic_on_day(*ps.trajectory, day - ps.infection_day);
        if (!sym && cfg.disease.noncovid_symptom_rate > 0.0)
            sym = keyed_uniform(st.seed, Stream::Noncovid, static_cast<std::uint64_t>(p),
                                static_cast<std::uint64_t>(day)) <
                  cfg.disease.noncovid_symptom_rate;
        if (sym && !ps.symptomatic_yesterday)
            trigger_index(st, p, day, IsolationCause::Symptom, is_isolated(st, p, day));
        ps.symptomatic_yesterday = sym;
    }

    if (is_school_day(cfg.policy.kind, day)) {
        const int wd = weekday(day);
        const PolicyKind kind = cfg.policy.kind;
        if ((kind == PolicyKind::MondayScreening && wd == 0) ||
            (kind == PolicyKind::MonWedScreening && (wd == 0 || wd == 2)))
            screening_pass(st, day);
        if (kind == PolicyKind::TestForRelease)
            followup_pass(st, day);
    }

    // Drop spent state; anything pending still has a live release date.
    for (auto& ps : st.pupils) {
        auto& cs = ps.constraints;
        cs.erase(std::remove_if(cs.begin(), cs.end(),
                                [day](const PersonalConstraint& c) { return c.release <= day; }),
                 cs.end());
    }
    for (auto& bcs : st.bubble_constraints)
        bcs.erase(std::remove_if(bcs.begin(), bcs.end(),
                                 [day](const BubbleConstraint& c) { return c.release <= day; }),
                  bcs.end());
    st.pending_pcrs.erase(std::remove_if(st.pending_pcrs.begin(), st.pending_pcrs.end(),
                                         [](const PendingPcr& p) { return p.resolved; }),
                          st.pending_pcrs.end());
    st.followups.erase(std::remove_if(st.followups.begin(), st.followups.end(),
                                      [](const TfrFollowup& f) { return !f.active; }),
                       st.followups.end());
}

} // namespace schoolsim
