#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schoolsim/population.hpp"
#include "schoolsim/types.hpp"

namespace schoolsim {

struct InfectivityParams {
    double gamma = 0.0;
    double lli = 1e6;
};

// Probability that one risk contact with a carrier at viral load vl transmits:
// gamma * (log10 vl - log10 lli), clipped to [0, 1].
double infection_probability(const InfectivityParams& params, double vl);

// Resolves one contact event; returns the newly infected pupil, if any.
// Infectious means positive current VL; susceptible means never infected.
std::optional<PupilId> attempt_transmission(const ContactEvent& contact,
                                            const std::vector<char>& ever_infected,
                                            const std::vector<double>& vl_today,
                                            const InfectivityParams& params,
                                            std::uint64_t seed);

} // namespace schoolsim
