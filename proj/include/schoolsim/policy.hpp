#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "schoolsim/types.hpp"

namespace schoolsim {

enum class PolicyKind {
    Reference,        // symptom-triggered isolation, PCR confirmation, bubble quarantine
    ExtendedWeekend,  // Reference rules with Thursday and Friday closed
    MondayScreening,  // Reference rules plus LFD screening every Monday
    MonWedScreening,  // Reference rules plus LFD screening Monday and Wednesday
    TestForRelease    // no bubble quarantine; daily LFD follow-up of index bubbles
};

const char* policy_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy(const std::string& name);

struct PolicySpec {
    PolicyKind kind = PolicyKind::Reference;
    int isolation_days = 10;       // release at swab/trigger day + this
    int negative_release_days = 2; // release at swab day + this on a negative PCR
    int tfr_followup_schooldays = 7;
};

inline bool is_closure_day(PolicyKind kind, Day d)
{
    return kind == PolicyKind::ExtendedWeekend && (weekday(d) == 3 || weekday(d) == 4);
}

inline bool is_school_day(PolicyKind kind, Day d)
{
    return is_standard_school_day(d) && !is_closure_day(kind, d);
}

enum class IsolationCause { None, Symptom, LfdPositive, Bubble };

// A pupil stays home while any constraint keeps day < release.  A constraint
// holding a pending swab shortens to swab + negative_release_days when that
// PCR comes back negative; a positive resolves it at the full span.
struct PersonalConstraint {
    Day release = 0; // first day back, exclusive bound on isolation
    std::optional<Day> pending_swab;
    IsolationCause cause = IsolationCause::None;
};

struct BubbleConstraint {
    Day release = 0;
    std::optional<Day> pending_swab; // provisional until the source pupil's PCR resolves
    PupilId source = -1;
};

struct PendingPcr {
    PupilId pupil = -1;
    Day swab_day = 0;
    bool resolved = false;
};

// One index case's daily LFD follow-up of their bubble.  Tests run on school
// days strictly after the trigger day; remaining counts school days consumed.
struct TfrFollowup {
    int bubble = -1;
    PupilId index = -1;
    Day trigger_day = 0;
    int remaining_schooldays = 0;
    bool active = false;
};

struct RunState;

// Per-day policy pass, before contacts: resolve due PCR results, check
// symptom onsets (every day), then run school-day testing actions.
void morning_step(RunState& state, Day day);

struct IsolationView {
    bool isolated = false;
    Day release_day = 0; // max over active constraints when isolated
    IsolationCause cause = IsolationCause::None;
};

IsolationView isolation_view(const RunState& state, PupilId pupil, Day day);
bool is_isolated(const RunState& state, PupilId pupil, Day day);

} // namespace schoolsim
