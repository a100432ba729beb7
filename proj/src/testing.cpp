#include "schoolsim/testing.hpp"

#include <cmath>
#include <random>

namespace schoolsim {

static void validate_lfd(const LfdModelParams& p)
{
    if (!(p.beta_test > 0.0))
        throw ConfigError("lfd: beta_test must be positive");
    if (!(p.eta > 0.0))
        throw ConfigError("lfd: eta must be positive");
    if (!(p.specificity >= 0.0 && p.specificity <= 1.0))
        throw ConfigError("lfd: specificity must lie in [0, 1]");
    if (!(p.ar_gain >= 0.0 && p.ar_gain <= 1.0))
        throw ConfigError("lfd: ar_gain must lie in [0, 1]");
    if (p.ar_window < 1)
        throw ConfigError("lfd: ar_window must be >= 1");
}

double lfd_sensitivity(const LfdModelParams& p, double vl, double u_effect)
{
    validate_lfd(p);
    if (!(vl > 0.0))
        throw ConfigError("lfd_sensitivity: vl must be positive");
    const double z = p.beta_test * p.eta * std::log10(vl) + p.beta_u * u_effect + p.c_test;
    return 1.0 / (1.0 + std::exp(-z));
}

std::optional<bool> last_lfd_in_window(const TestHistory& history, Day day,
                                       int ar_window)
{
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->day > day - 1)
            continue;
        if (it->day < day - ar_window)
            break; // history is nondecreasing in day
        if (it->kind == TestKind::Lfd)
            return it->positive;
    }
    return std::nullopt;
}

double lfd_positive_probability(const LfdModelParams& p, double vl,
                                double u_effect, const TestHistory& history,
                                Day day)
{
    validate_lfd(p);
    if (vl <= 0.0)
        return 1.0 - p.specificity;
    const double g = lfd_sensitivity(p, vl, u_effect);
    const auto last = last_lfd_in_window(history, day, p.ar_window);
    if (!last.has_value() || p.ar_gain == 0.0)
        return g;
    const double x_last = *last ? 1.0 : 0.0;
    return (1.0 - p.ar_gain) * g + p.ar_gain * x_last;
}

bool pcr_positive(const PcrModelParams& p, double vl, double u)
{
    if (!(p.sensitivity >= 0.0 && p.sensitivity <= 1.0) ||
        !(p.specificity >= 0.0 && p.specificity <= 1.0))
        throw ConfigError("pcr: sensitivity/specificity must lie in [0, 1]");
    if (!(p.lod > 0.0))
        throw ConfigError("pcr: lod must be positive");
    const double p_pos = vl >= p.lod ? p.sensitivity : 1.0 - p.specificity;
    return u < p_pos;
}

double sample_compliance(const ComplianceParams& p, SplitMix64& rng)
{
    if (!p.enabled)
        return 1.0;
    if (!(p.beta_alpha > 0.0) || !(p.beta_beta > 0.0))
        throw ConfigError("compliance: beta parameters must be positive");
    std::gamma_distribution<double> ga(p.beta_alpha, 1.0);
    std::gamma_distribution<double> gb(p.beta_beta, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    if (x + y <= 0.0)
        return 0.5; // both gamma draws underflowed; alpha, beta < 1 make this conceivable
    return x / (x + y);
}

} // namespace schoolsim
