#include "schoolsim/transmission.hpp"

#include <algorithm>
#include <cmath>

#include "schoolsim/rng.hpp"

namespace schoolsim {

double infection_probability(const InfectivityParams& params, double vl)
{
    if (!(params.gamma >= 0.0))
        throw ConfigError("infectivity: gamma must be >= 0");
    if (!(params.lli > 0.0))
        throw ConfigError("infectivity: lli must be positive");
    if (vl <= 0.0)
        return 0.0;
    const double f = params.gamma * (std::log10(vl) - std::log10(params.lli));
    return std::clamp(f, 0.0, 1.0);
}

std::optional<PupilId> attempt_transmission(const ContactEvent& contact,
                                            const std::vector<char>& ever_infected,
                                            const std::vector<double>& vl_today,
                                            const InfectivityParams& params,
                                            std::uint64_t seed)
{
    const PupilId a = contact.a, b = contact.b;
    const bool a_carrier = vl_today[static_cast<std::size_t>(a)] > 0.0;
    const bool b_carrier = vl_today[static_cast<std::size_t>(b)] > 0.0;

    PupilId source, target;
    if (a_carrier && !ever_infected[static_cast<std::size_t>(b)]) {
        source = a;
        target = b;
    } else if (b_carrier && !ever_infected[static_cast<std::size_t>(a)]) {
        source = b;
        target = a;
    } else {
        return std::nullopt; // no carrier-susceptible side, or both already infected
    }

    const double f = infection_probability(params, vl_today[static_cast<std::size_t>(source)]);
    if (f <= 0.0)
        return std::nullopt;
    const std::uint64_t lvl_key = static_cast<std::uint64_t>(contact.day) * 4 +
                                  static_cast<std::uint64_t>(contact.level);
    const double u = keyed_uniform(seed, Stream::Transmission,
                                   static_cast<std::uint64_t>(a),
                                   static_cast<std::uint64_t>(b), lvl_key);
    if (u < f)
        return target;
    return std::nullopt;
}

} // namespace schoolsim
