#include "schoolsim/population.hpp"

#include <string>

#include "schoolsim/rng.hpp"

namespace schoolsim {

ContactStructure ContactStructure::defaults_for(const SchoolConfig& school)
{
    ContactStructure c;
    c.p_bubble = 1.0;
    c.p_class = 3.0 / static_cast<double>(school.pupils_per_class() - 1);
    c.p_school = 1.0 / static_cast<double>(school.n_pupils() - 1);
    return c;
}

static void validate_school(const SchoolConfig& s)
{
    if (s.years < 1 || s.classes_per_year < 1 || s.bubbles_per_class < 1 ||
        s.pupils_per_bubble < 1)
        throw ConfigError("school: all level counts must be >= 1");
    if (s.pupils_per_class() < 2)
        throw ConfigError("school: a class needs at least 2 pupils");
    if (s.n_pupils() < 2)
        throw ConfigError("school: need at least 2 pupils");
}

static void validate_contacts(const ContactStructure& c)
{
    for (double p : {c.p_bubble, c.p_class, c.p_school})
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("contacts: probabilities must lie in [0, 1]");
}

SchoolLayout build_school(const SchoolConfig& config)
{
    return build_school(config, ContactStructure::defaults_for(config));
}

SchoolLayout build_school(const SchoolConfig& config, const ContactStructure& contacts)
{
    validate_school(config);
    validate_contacts(contacts);

    SchoolLayout layout;
    layout.school = config;
    layout.contacts = contacts;

    const int n = config.n_pupils();
    layout.bubble_of.resize(n);
    layout.class_of.resize(n);
    layout.bubble_members.assign(config.n_bubbles(), {});
    layout.class_members.assign(config.n_classes(), {});

    for (PupilId p = 0; p < n; ++p) {
        const int bubble = p / config.pupils_per_bubble;
        const int cls = bubble / config.bubbles_per_class;
        layout.bubble_of[p] = bubble;
        layout.class_of[p] = cls;
        layout.bubble_members[bubble].push_back(p);
        layout.class_members[cls].push_back(p);
    }
    return layout;
}

std::vector<ContactEvent> sample_daily_contacts(const SchoolLayout& layout,
                                                const std::vector<char>& attending,
                                                std::uint64_t seed, Day day)
{
    const int n = layout.n_pupils();
    if (static_cast<int>(attending.size()) != n)
        throw ConfigError("sample_daily_contacts: attending size mismatch");

    std::vector<ContactEvent> events;
    const ContactStructure& cs = layout.contacts;

    auto draw = [&](PupilId a, PupilId b, ContactLevel level, double p) {
        if (p <= 0.0)
            return;
        const std::uint64_t lvl_key =
            static_cast<std::uint64_t>(day) * 4 + static_cast<std::uint64_t>(level);
        if (keyed_uniform(seed, Stream::Contact, static_cast<std::uint64_t>(a),
                          static_cast<std::uint64_t>(b), lvl_key) < p)
            events.push_back(ContactEvent{a, b, level, day});
    };

    for (PupilId a = 0; a < n; ++a) {
        if (!attending[a])
            continue;
        for (PupilId b = a + 1; b < n; ++b) {
            if (!attending[b])
                continue;
            if (layout.bubble_of[a] == layout.bubble_of[b])
                draw(a, b, ContactLevel::Bubble, cs.p_bubble);
            if (layout.class_of[a] == layout.class_of[b])
                draw(a, b, ContactLevel::Class, cs.p_class);
            draw(a, b, ContactLevel::School, cs.p_school);
        }
    }
    return events;
}

std::vector<std::vector<double>> expected_adjacency(const SchoolLayout& layout)
{
    const int n = layout.n_pupils();
    const ContactStructure& cs = layout.contacts;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b)
                continue;
            double e = cs.p_school;
            if (layout.class_of[a] == layout.class_of[b])
                e += cs.p_class;
            if (layout.bubble_of[a] == layout.bubble_of[b])
                e += cs.p_bubble;
            m[a][b] = e;
        }
    }
    return m;
}

} // namespace schoolsim
