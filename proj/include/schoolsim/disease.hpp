#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "schoolsim/rng.hpp"
#include "schoolsim/types.hpp"

namespace schoolsim {

struct DiseaseParams {
    double p_symptomatic = 0.5;
    double lli = 1e6; // lower limit of infectivity, cp/ml; also clearance anchor
    double t0 = 7.5 / 24.0; // first observation time after midnight infection
    double noncovid_symptom_rate = 0.01; // per pupil-day, independent of infection

    // Trajectory shape constants (log10 scale, times in days).
    static constexpr double log10_at_t1 = 3.0;
    static constexpr double t1_min = 2.5;
    static constexpr double t1_max = 3.5;
    static constexpr double peak_delay_base = 0.5;
    static constexpr double peak_delay_gamma_shape = 1.5;
    static constexpr double peak_delay_gamma_scale = 1.0;
    static constexpr double peak_delay_cap = 3.0;
    static constexpr double log10_peak_min = 7.0;
    static constexpr double log10_peak_max = 11.0;
    static constexpr double clearance_min = 4.0;
    static constexpr double clearance_max = 9.0;
    static constexpr double onset_delay_min = 0.0;
    static constexpr double onset_delay_max = 3.0;
    static constexpr double tail_days = 3.0; // log10 VL falls to 0 over this span after t3
};

struct HeavyTailNoiseParams {
    bool enabled = false;
    double dof = 3.0;
    double amplitude = 3.0;     // squared-exponential kernel variance
    double length_scale = 5.0;  // kernel exp(-d^2 / (2 ls^2))
    int window_days = 10;       // noise lives on integer offsets 0..window_days
    double max_log10_vl = 15.0; // accepted total log10 VL must stay in [0, this]
    int max_attempts = 10000;
};

// Piecewise-linear log10 trajectory with pivots
// (t0, 0) -> (t1, 3) -> (t2, log10_peak) -> (t3, log10(lli)) -> (t3 + tail, 0).
struct ViralLoadTrajectory {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double log10_peak = 0.0;
    bool symptomatic = false;
    double symptom_onset = 0.0; // meaningful only when symptomatic

    double t0 = 7.5 / 24.0;
    double log10_at_t1 = 3.0;
    double log10_lli = 6.0;
    double tail_days = 3.0;

    bool has_noise = false;
    std::array<double, 11> noise{}; // additive log10 at offsets 0..10, 0 at both ends
    double noise_cap = 15.0;

    double support_end() const { return t3 + tail_days; }
};

ViralLoadTrajectory sample_trajectory(const DiseaseParams& params, SplitMix64& rng);

// Student-t perturbation of the log10 trajectory: a squared-exponential
// Gaussian process on offsets 0..window conditioned to zero at both ends,
// sharing one chi-squared mixing variable per sample path.
struct NoiseSampler {
    explicit NoiseSampler(const HeavyTailNoiseParams& params);

    HeavyTailNoiseParams params;
    std::vector<double> chol; // lower-triangular factor of the conditional covariance

    std::array<double, 11> sample_path(SplitMix64& rng) const;
};

// Resamples until the perturbed log10 VL lies in [0, max_log10_vl] at every
// integer offset where the base trajectory is positive; throws SamplingError
// when the attempt budget runs out.
void attach_noise(ViralLoadTrajectory& traj, const NoiseSampler& sampler,
                  SplitMix64& rng);

// Base curve only; returns a very large negative value outside the support.
double base_log10_vl(const ViralLoadTrajectory& traj, double t);

// VL on the daily grid (t = day_offset + t0), noise applied and clamped.
double viral_load_on_day(const ViralLoadTrajectory& traj, int day_offset);

bool symptomatic_at(const ViralLoadTrajectory& traj, double t);
bool symptomatic_on_day(const ViralLoadTrajectory& traj, int day_offset);

// Last integer offset with positive VL; offset 0 always has VL = 1.
int last_positive_day(const ViralLoadTrajectory& traj);

} // namespace schoolsim
