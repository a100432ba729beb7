#include "schoolsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "schoolsim/rng.hpp"

namespace schoolsim {

std::vector<double> default_gamma_grid(double lli, int n)
{
    if (n < 2)
        throw ConfigError("gamma grid needs at least 2 points");
    const double hi = lli < 1e6 ? 0.06 : 0.1;
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] = hi * static_cast<double>(i) / (n - 1);
    return grid;
}

LineFit fit_line(const std::vector<std::array<double, 2>>& xy)
{
    if (xy.size() < 2)
        throw CalibrationError("line fit needs at least 2 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xy.size());
    for (const auto& p : xy) {
        sx += p[0];
        sy += p[1];
        sxx += p[0] * p[0];
        sxy += p[0] * p[1];
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0)
        throw CalibrationError("line fit: degenerate x values");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

double invert_line(const LineFit& fit, double target, double lo, double hi)
{
    if (!(fit.slope > 0.0))
        throw CalibrationError("calibration line has non-positive slope");
    const double x = (target - fit.intercept) / fit.slope;
    if (x < lo || x > hi)
        throw CalibrationError("calibration target falls outside the gamma grid");
    return x;
}

int direct_infections_run(const ScenarioConfig& base, const SchoolLayout& layout,
                          double gamma, const GammaCalibrationSpec& spec,
                          std::uint64_t trajectory_seed, std::uint64_t contact_seed)
{
    ScenarioConfig cfg = base;
    cfg.infectivity.gamma = gamma;
    cfg.external_infection_prob = 0.0;
    cfg.policy.kind = PolicyKind::Reference; // no morning step runs below

    RunState st(cfg, layout, contact_seed);
    st.disease_seed = trajectory_seed;
    if (spec.isolate_index) {
        st.forced_absent.assign(static_cast<std::size_t>(layout.n_pupils()), 0);
        st.forced_absent[0] = 1;
    }
    infect_pupil(st, 0, 0, -1);

    for (Day d = 0; d < spec.followup_days; ++d) {
        refresh_vl_today(st, d);
        if (is_standard_school_day(d))
            transmission_step(st, d);
    }

    int direct = 0;
    for (const auto& ps : st.pupils)
        if (ps.infected_by == 0)
            ++direct;
    return direct;
}

GammaFitResult calibrate_gamma(const ScenarioConfig& base,
                               const GammaCalibrationSpec& spec, std::uint64_t seed)
{
    GammaFitResult result;
    result.grid = spec.gamma_grid.empty() ? default_gamma_grid(base.infectivity.lli)
                                          : spec.gamma_grid;
    if (spec.populations < 1 || spec.resamples < 1 || spec.followup_days < 1)
        throw ConfigError("gamma calibration: counts must be >= 1");

    const SchoolLayout layout = base.contacts.has_value()
                                    ? build_school(base.school, *base.contacts)
                                    : build_school(base.school);

    std::vector<std::array<double, 2>> samples;
    samples.reserve(result.grid.size() *
                    static_cast<std::size_t>(spec.populations) *
                    static_cast<std::size_t>(spec.resamples));
    result.mean_r.assign(result.grid.size(), 0.0);

    for (int p = 0; p < spec.populations; ++p) {
        const std::uint64_t traj_seed =
            mix_key(seed, Stream::CalibPopulation, static_cast<std::uint64_t>(p));
        for (int q = 0; q < spec.resamples; ++q) {
            const std::uint64_t contact_seed =
                mix_key(seed, Stream::CalibResample, static_cast<std::uint64_t>(p),
                        static_cast<std::uint64_t>(q));
            for (std::size_t gi = 0; gi < result.grid.size(); ++gi) {
                const int r = direct_infections_run(base, layout, result.grid[gi], spec,
                                                    traj_seed, contact_seed);
                samples.push_back({result.grid[gi], static_cast<double>(r)});
                result.mean_r[gi] += r;
            }
        }
    }
    const double runs_per_cell =
        static_cast<double>(spec.populations) * static_cast<double>(spec.resamples);
    for (double& m : result.mean_r)
        m /= runs_per_cell;

    result.line = fit_line(samples);
    result.gamma_star =
        invert_line(result.line, spec.target_rs, result.grid.front(), result.grid.back());
    return result;
}

std::vector<EtaSample> draw_eta_samples(const DiseaseParams& disease,
                                        const HeavyTailNoiseParams& noise,
                                        const LfdModelParams& lfd, long n_samples,
                                        std::uint64_t seed)
{
    if (n_samples < 1)
        throw ConfigError("eta calibration: n_samples must be >= 1");
    std::vector<EtaSample> samples;
    samples.reserve(static_cast<std::size_t>(n_samples));

    std::optional<NoiseSampler> noise_sampler;
    if (noise.enabled)
        noise_sampler.emplace(noise);

    for (long i = 0; i < n_samples; ++i) {
        auto eng = keyed_engine(seed, Stream::EtaSample, static_cast<std::uint64_t>(i));
        ViralLoadTrajectory tr = sample_trajectory(disease, eng);
        if (noise_sampler.has_value())
            attach_noise(tr, *noise_sampler, eng);

        // Candidate carriage days: before symptom onset for symptomatic
        // trajectories, the whole positive span for asymptomatic ones.
        std::vector<int> days;
        const int last = last_positive_day(tr);
        for (int o = 0; o <= last; ++o) {
            const double t = static_cast<double>(o) + tr.t0;
            if (tr.symptomatic && t >= tr.symptom_onset)
                break;
            if (viral_load_on_day(tr, o) > 0.0)
                days.push_back(o);
        }
        if (days.empty())
            throw SamplingError("eta calibration: empty carriage window");

        std::uniform_int_distribution<std::size_t> pick(0, days.size() - 1);
        const int day = days[pick(eng)];

        EtaSample s;
        s.log10_vl = std::log10(viral_load_on_day(tr, day));
        if (lfd.beta_u != 0.0) {
            std::normal_distribution<double> gauss(0.0, 1.0);
            s.u_effect = gauss(eng);
        }
        samples.push_back(s);
    }
    return samples;
}

double mean_sensitivity_at(double eta, const LfdModelParams& lfd,
                           const std::vector<EtaSample>& samples)
{
    double acc = 0.0;
    for (const auto& s : samples) {
        const double z = lfd.beta_test * eta * s.log10_vl + lfd.beta_u * s.u_effect + lfd.c_test;
        acc += 1.0 / (1.0 + std::exp(-z));
    }
    return acc / static_cast<double>(samples.size());
}

EtaFitResult calibrate_eta(const EtaCalibrationSpec& spec, const DiseaseParams& disease,
                           const HeavyTailNoiseParams& noise, const LfdModelParams& lfd,
                           std::uint64_t seed)
{
    if (!(spec.tol > 0.0) || !(spec.eta_lo > 0.0) || !(spec.eta_hi > spec.eta_lo))
        throw ConfigError("eta calibration: bad bracket or tolerance");

    const auto samples = draw_eta_samples(disease, noise, lfd, spec.n_samples, seed);

    double lo = spec.eta_lo, hi = spec.eta_hi;
    const double f_lo = mean_sensitivity_at(lo, lfd, samples);
    const double f_hi = mean_sensitivity_at(hi, lfd, samples);
    if (spec.target_mean < f_lo || spec.target_mean > f_hi)
        throw CalibrationError("eta calibration: target mean outside achievable range");

    while (hi - lo > spec.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mean_sensitivity_at(mid, lfd, samples) < spec.target_mean)
            lo = mid;
        else
            hi = mid;
    }

    EtaFitResult r;
    r.eta = 0.5 * (lo + hi);
    r.achieved_mean = mean_sensitivity_at(r.eta, lfd, samples);
    return r;
}

} // namespace schoolsim
