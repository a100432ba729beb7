#pragma once

#include <cstdint>
#include <vector>

#include "schoolsim/types.hpp"

namespace schoolsim {

struct SchoolConfig {
    int years = 6;
    int classes_per_year = 2;
    int bubbles_per_class = 3;
    int pupils_per_bubble = 9;

    int pupils_per_class() const { return bubbles_per_class * pupils_per_bubble; }
    int n_classes() const { return years * classes_per_year; }
    int n_bubbles() const { return n_classes() * bubbles_per_class; }
    int n_pupils() const { return n_bubbles() * pupils_per_bubble; }
};

// Per-day contact probability for a pair, by the closest shared level.
// A same-bubble pair is also drawn at class and school level, so levels add.
struct ContactStructure {
    double p_bubble = 1.0;
    double p_class = 0.0;
    double p_school = 0.0;

    // p_class = 3/(class size - 1), p_school = 1/(school size - 1): three
    // expected class contacts and one expected school contact per pupil-day.
    static ContactStructure defaults_for(const SchoolConfig& school);
};

struct SchoolLayout {
    SchoolConfig school;
    ContactStructure contacts;
    std::vector<std::int32_t> bubble_of; // by pupil
    std::vector<std::int32_t> class_of;  // by pupil
    std::vector<std::vector<PupilId>> bubble_members;
    std::vector<std::vector<PupilId>> class_members;

    int n_pupils() const { return static_cast<int>(bubble_of.size()); }
};

enum class ContactLevel : int { Bubble = 0, Class = 1, School = 2 };

struct ContactEvent {
    PupilId a = 0; // a < b always
    PupilId b = 0;
    ContactLevel level = ContactLevel::Bubble;
    Day day = 0;
};

// Deterministic enumeration: pupil ids are contiguous within bubbles,
// bubbles contiguous within classes, classes ordered by (year, class).
SchoolLayout build_school(const SchoolConfig& config);
SchoolLayout build_school(const SchoolConfig& config, const ContactStructure& contacts);

// One Bernoulli draw per coresident pair per applicable level, keyed by
// (seed, pair, day, level); pairs of non-attending pupils produce nothing.
std::vector<ContactEvent> sample_daily_contacts(const SchoolLayout& layout,
                                                const std::vector<char>& attending,
                                                std::uint64_t seed, Day day);

// Expected daily contact count matrix under full attendance; row sums give
// the expected number of daily contacts per pupil.
std::vector<std::vector<double>> expected_adjacency(const SchoolLayout& layout);

} // namespace schoolsim
