#include "schoolsim/disease.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace schoolsim {

ViralLoadTrajectory sample_trajectory(const DiseaseParams& params, SplitMix64& rng)
{
    if (!(params.p_symptomatic >= 0.0 && params.p_symptomatic <= 1.0))
        throw ConfigError("disease: p_symptomatic must lie in [0, 1]");
    if (!(params.lli > 0.0))
        throw ConfigError("disease: lli must be positive");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> u_t1(DiseaseParams::t1_min, DiseaseParams::t1_max);
    std::gamma_distribution<double> peak_delay(DiseaseParams::peak_delay_gamma_shape,
                                               DiseaseParams::peak_delay_gamma_scale);
    std::uniform_real_distribution<double> u_peak(DiseaseParams::log10_peak_min,
                                                  DiseaseParams::log10_peak_max);
    std::uniform_real_distribution<double> u_onset(DiseaseParams::onset_delay_min,
                                                   DiseaseParams::onset_delay_max);
    std::uniform_real_distribution<double> u_clear(DiseaseParams::clearance_min,
                                                   DiseaseParams::clearance_max);

    ViralLoadTrajectory tr;
    tr.t0 = params.t0;
    tr.log10_at_t1 = DiseaseParams::log10_at_t1;
    tr.log10_lli = std::log10(params.lli);
    tr.tail_days = DiseaseParams::tail_days;

    tr.symptomatic = unit(rng) < params.p_symptomatic;
    tr.t1 = u_t1(rng);
    tr.t2 = tr.t1 + DiseaseParams::peak_delay_base +
            std::min(DiseaseParams::peak_delay_cap, peak_delay(rng));
    tr.log10_peak = u_peak(rng);
    if (tr.symptomatic) {
        tr.symptom_onset = tr.t2 + u_onset(rng);
        tr.t3 = tr.symptom_onset + u_clear(rng);
    } else {
        tr.symptom_onset = 0.0;
        tr.t3 = tr.t2 + u_clear(rng);
    }
    return tr;
}

double base_log10_vl(const ViralLoadTrajectory& tr, double t)
{
    if (t < tr.t0 || t > tr.support_end())
        return -1e300;
    auto lerp_seg = [](double x, double x0, double y0, double x1, double y1) {
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    };
    if (t <= tr.t1)
        return lerp_seg(t, tr.t0, 0.0, tr.t1, tr.log10_at_t1);
    if (t <= tr.t2)
        return lerp_seg(t, tr.t1, tr.log10_at_t1, tr.t2, tr.log10_peak);
    if (t <= tr.t3)
        return lerp_seg(t, tr.t2, tr.log10_peak, tr.t3, tr.log10_lli);
    return lerp_seg(t, tr.t3, tr.log10_lli, tr.support_end(), 0.0);
}

double viral_load_on_day(const ViralLoadTrajectory& tr, int day_offset)
{
    if (day_offset < 0)
        return 0.0;
    const double t = static_cast<double>(day_offset) + tr.t0;
    if (t > tr.support_end())
        return 0.0;
    double lv = base_log10_vl(tr, t);
    if (tr.has_noise && day_offset < static_cast<int>(tr.noise.size()))
        lv = std::clamp(lv + tr.noise[static_cast<std::size_t>(day_offset)], 0.0,
                        tr.noise_cap);
    return std::pow(10.0, lv);
}

bool symptomatic_at(const ViralLoadTrajectory& tr, double t)
{
    return tr.symptomatic && t >= tr.symptom_onset && t <= tr.t3;
}

bool symptomatic_on_day(const ViralLoadTrajectory& tr, int day_offset)
{
    if (day_offset < 0)
        return false;
    return symptomatic_at(tr, static_cast<double>(day_offset) + tr.t0);
}

int last_positive_day(const ViralLoadTrajectory& tr)
{
    // support_end - t0 rounded down is within support because t0 < 1.
    return static_cast<int>(std::floor(tr.support_end() - tr.t0));
}

NoiseSampler::NoiseSampler(const HeavyTailNoiseParams& p) : params(p)
{
    if (!(p.dof > 2.0))
        throw ConfigError("noise: dof must exceed 2");
    if (!(p.amplitude > 0.0) || !(p.length_scale > 0.0))
        throw ConfigError("noise: amplitude and length_scale must be positive");
    if (p.window_days != 10)
        throw ConfigError("noise: window_days must be 10");

    const int n = p.window_days + 1; // offsets 0..10
    const int m = n - 2;             // interior points
    auto kernel = [&](int i, int j) {
        const double d = static_cast<double>(i - j);
        return p.amplitude * std::exp(-d * d / (2.0 * p.length_scale * p.length_scale));
    };

    // Condition the interior on zero values at offsets 0 and window_days.
    const double e00 = kernel(0, 0);
    const double e01 = kernel(0, p.window_days);
    const double e11 = kernel(p.window_days, p.window_days);
    const double det = e00 * e11 - e01 * e01;
    const double i00 = e11 / det, i01 = -e01 / det, i11 = e00 / det;

    std::vector<double> cov(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a) {
        const int ia = a + 1;
        const double a0 = kernel(ia, 0), a1 = kernel(ia, p.window_days);
        for (int b = 0; b < m; ++b) {
            const int ib = b + 1;
            const double b0 = kernel(ib, 0), b1 = kernel(ib, p.window_days);
            const double correction = a0 * (i00 * b0 + i01 * b1) + a1 * (i01 * b0 + i11 * b1);
            cov[static_cast<std::size_t>(a) * m + b] = kernel(ia, ib) - correction;
        }
    }

    chol.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = cov[static_cast<std::size_t>(i) * m + j];
            for (int k = 0; k < j; ++k)
                s -= chol[static_cast<std::size_t>(i) * m + k] *
                     chol[static_cast<std::size_t>(j) * m + k];
            if (i == j) {
                if (s <= 0.0)
                    throw SamplingError("noise: conditional covariance not positive definite");
                chol[static_cast<std::size_t>(i) * m + j] = std::sqrt(s);
            } else {
                chol[static_cast<std::size_t>(i) * m + j] =
                    s / chol[static_cast<std::size_t>(j) * m + j];
            }
        }
    }
}

std::array<double, 11> NoiseSampler::sample_path(SplitMix64& rng) const
{
    const int m = params.window_days - 1;
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(params.dof);

    std::array<double, 11> path{};
    std::array<double, 9> g{};
    for (int i = 0; i < m; ++i)
        g[static_cast<std::size_t>(i)] = gauss(rng);
    const double w = chi2(rng);
    const double t_scale = std::sqrt(params.dof / w);
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int k = 0; k <= i; ++k)
            s += chol[static_cast<std::size_t>(i) * m + k] * g[static_cast<std::size_t>(k)];
        path[static_cast<std::size_t>(i + 1)] = t_scale * s;
    }
    return path;
}

void attach_noise(ViralLoadTrajectory& tr, const NoiseSampler& sampler, SplitMix64& rng)
{
    const HeavyTailNoiseParams& p = sampler.params;
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
        const auto path = sampler.sample_path(rng);
        bool ok = true;
        for (int o = 0; o <= p.window_days && ok; ++o) {
            const double t = static_cast<double>(o) + tr.t0;
            if (t > tr.support_end())
                break; // base VL is zero from here on
            const double total = base_log10_vl(tr, t) + path[static_cast<std::size_t>(o)];
            ok = total >= 0.0 && total <= p.max_log10_vl;
        }
        if (ok) {
            tr.has_noise = true;
            tr.noise = path;
            tr.noise_cap = p.max_log10_vl;
            return;
        }
    }
    throw SamplingError("noise: rejection budget exhausted");
}

} // namespace schoolsim
