#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schoolsim/rng.hpp"
#include "schoolsim/types.hpp"

namespace schoolsim {

struct LfdModelParams {
    double beta_test = 1.0;
    // Intercept anchoring point sensitivity 0.82 at VL 1e7 when eta = 1.
    double c_test = -5.4836525106319115; // log(0.82/0.18) - 7
    double eta = 1.0;        // calibration scaling of the slope
    double specificity = 0.998; // applies only at VL = 0
    double ar_gain = 0.0;    // anchoring weight a on the last recent result
    int ar_window = 3;       // look back over [day - window, day - 1]
    double beta_u = 0.0;     // loading of the per-pupil sensitivity effect
};

struct PcrModelParams {
    double sensitivity = 0.975; // at or above the detection limit
    double lod = 300.0;         // cp/ml
    double specificity = 1.0;
    int turnaround_days = 2; // swab Monday -> acted on Wednesday morning
};

struct ComplianceParams {
    bool enabled = false;
    // Beta(2/15, 1/15): mean 2/3, mass piled near 0 and 1.
    double beta_alpha = 2.0 / 15.0;
    double beta_beta = 1.0 / 15.0;
};

enum class TestKind { Lfd, Pcr };

struct TestRecord {
    Day day = 0; // swab day
    TestKind kind = TestKind::Lfd;
    bool positive = false;
};

using TestHistory = std::vector<TestRecord>;

// Point sensitivity logit^-1(beta_test * eta * log10(vl) + beta_u * u + c_test);
// requires vl > 0.
double lfd_sensitivity(const LfdModelParams& params, double vl, double u_effect);

// Most recent LFD result with swab day in [day - ar_window, day - 1].
std::optional<bool> last_lfd_in_window(const TestHistory& history, Day day,
                                       int ar_window);

// Positive probability for a test taken on `day`: false-positive rate at
// VL = 0, otherwise the sensitivity anchored to the last recent LFD result
// with weight ar_gain.
double lfd_positive_probability(const LfdModelParams& params, double vl,
                                double u_effect, const TestHistory& history,
                                Day day);

bool pcr_positive(const PcrModelParams& params, double vl, double u);

// Per-pupil probability of taking a requested LFD test.
double sample_compliance(const ComplianceParams& params, SplitMix64& rng);

} // namespace schoolsim
