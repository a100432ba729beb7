#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "schoolsim/engine.hpp"
#include "schoolsim/types.hpp"

namespace schoolsim {

// Transmissibility is anchored by forward-simulating a single seeded case with
// no policy active and counting the infections it causes directly, then
// fitting a least-squares line of that count against gamma and inverting it
// at the target school-level reproduction number.
struct GammaCalibrationSpec {
    std::vector<double> gamma_grid; // filled from default_gamma_grid when empty
    int populations = 1000;         // trajectory sets
    int resamples = 10;             // contact/transmission replays per set
    int followup_days = 21;
    double target_rs = 3.0;
    bool isolate_index = false;     // diagnostic: index seeds but never attends
};

// 100 equidistant values; the span narrows when infectivity starts at a lower
// viral load, where the same gamma buys a wider infectious window.
std::vector<double> default_gamma_grid(double lli, int n = 100);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

LineFit fit_line(const std::vector<std::array<double, 2>>& xy);

// Least-squares inversion; throws CalibrationError when the slope is not
// positive or the solution falls outside [lo, hi].
double invert_line(const LineFit& fit, double target, double lo, double hi);

// Direct (generation-one) infections caused by pupil 0 seeded on day 0, under
// the base config's disease model with no policy and no community imports.
int direct_infections_run(const ScenarioConfig& base, const SchoolLayout& layout,
                          double gamma, const GammaCalibrationSpec& spec,
                          std::uint64_t trajectory_seed, std::uint64_t contact_seed);

struct GammaFitResult {
    double gamma_star = 0.0;
    LineFit line;
    std::vector<double> grid;
    std::vector<double> mean_r; // by grid point
};

GammaFitResult calibrate_gamma(const ScenarioConfig& base,
                               const GammaCalibrationSpec& spec, std::uint64_t seed);

// The LFD sensitivity scale eta is chosen so that the expected point
// sensitivity over one uniformly drawn pre-symptomatic carriage day per
// trajectory matches a target; solved by bisection (the mean is increasing
// in eta).
struct EtaCalibrationSpec {
    long n_samples = 100000;
    double target_mean = 0.6;
    double eta_lo = 1e-9;
    double eta_hi = 64.0;
    double tol = 1e-6;
};

struct EtaSample {
    double log10_vl = 0.0;
    double u_effect = 0.0;
};

std::vector<EtaSample> draw_eta_samples(const DiseaseParams& disease,
                                        const HeavyTailNoiseParams& noise,
                                        const LfdModelParams& lfd, long n_samples,
                                        std::uint64_t seed);

double mean_sensitivity_at(double eta, const LfdModelParams& lfd,
                           const std::vector<EtaSample>& samples);

struct EtaFitResult {
    double eta = 0.0;
    double achieved_mean = 0.0;
};

EtaFitResult calibrate_eta(const EtaCalibrationSpec& spec, const DiseaseParams& disease,
                           const HeavyTailNoiseParams& noise, const LfdModelParams& lfd,
                           std::uint64_t seed);

} // namespace schoolsim
