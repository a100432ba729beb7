#include <array>
#include <cmath>
#include <vector>

#include "schoolsim/calibration.hpp"
#include "schoolsim/config.hpp"

#include <doctest.h>

using namespace schoolsim;

TEST_CASE("least-squares line fit and inversion")
{
    std::vector<std::array<double, 2>> exact;
    for (int i = 0; i < 5; ++i) {
        const double x = 0.01 * i;
        exact.push_back({x, 2.0 + 3.0 * x});
    }
    const LineFit f1 = fit_line(exact);
    CHECK(f1.intercept == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f1.slope == doctest::Approx(3.0).epsilon(1e-10));

    // Hand-solved normal equations for three scattered points.
    const LineFit f2 = fit_line({{0.0, 1.0}, {1.0, 2.0}, {2.0, 4.0}});
    CHECK(f2.slope == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(f2.intercept == doctest::Approx(5.0 / 6.0).epsilon(1e-12));

    LineFit line;
    line.intercept = 0.3;
    line.slope = 60.0;
    CHECK(invert_line(line, 3.0, 0.0, 0.1) == doctest::Approx(0.045).epsilon(1e-12));
    CHECK_THROWS_AS(invert_line(line, 30.0, 0.0, 0.1), CalibrationError);
    line.slope = -1.0;
    CHECK_THROWS_AS(invert_line(line, 3.0, 0.0, 0.1), CalibrationError);

    CHECK_THROWS_AS(fit_line({{1.0, 2.0}}), CalibrationError);
    CHECK_THROWS_AS(fit_line({{1.0, 2.0}, {1.0, 3.0}, {1.0, 4.0}}), CalibrationError);
}

TEST_CASE("default gamma grid spans depend on the infectivity threshold")
{
    const auto grid = default_gamma_grid(1e6);
    REQUIRE(grid.size() == 100);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(0.1).epsilon(1e-12));
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.1 / 99).epsilon(1e-9));

    CHECK(default_gamma_grid(1e5).back() == doctest::Approx(0.06).epsilon(1e-12));

    const auto coarse = default_gamma_grid(1e6, 5);
    REQUIRE(coarse.size() == 5);
    CHECK(coarse[2] == doctest::Approx(0.05).epsilon(1e-12));

    CHECK_THROWS_AS(default_gamma_grid(1e6, 1), ConfigError);
}

TEST_CASE("direct infection counts respond to gamma and index exclusion")
{
    ScenarioConfig base = default_config();
    const SchoolLayout layout = build_school(base.school);
    GammaCalibrationSpec spec;

    // Nothing spreads at zero transmissibility.
    CHECK(direct_infections_run(base, layout, 0.0, spec, 11, 12) == 0);

    // A held-out index seeds nobody no matter how infectious.
    GammaCalibrationSpec held = spec;
    held.isolate_index = true;
    CHECK(direct_infections_run(base, layout, 1.0, held, 11, 12) == 0);

    // At saturating transmissibility the index meets its whole bubble daily
    // and claims essentially every first-generation opportunity.
    int total = 0;
    for (std::uint64_t cs = 0; cs < 5; ++cs)
        total += direct_infections_run(base, layout, 1.0, spec, 11, 100 + cs);
    CHECK(total >= 5 * 8); // at least the eight bubble mates, every time

    // Larger gamma never empties the count and clearly grows the mean.
    double lo_mean = 0.0, hi_mean = 0.0;
    for (std::uint64_t p = 0; p < 40; ++p) {
        lo_mean += direct_infections_run(base, layout, 0.02, spec, p, p);
        hi_mean += direct_infections_run(base, layout, 0.08, spec, p, p);
    }
    CHECK(hi_mean > 2.0 * lo_mean);
    CHECK(lo_mean > 0.0);
}

TEST_CASE("gamma calibration inverts its own fitted line inside the grid")
{
    ScenarioConfig base = default_config();
    GammaCalibrationSpec spec;
    spec.populations = 60;
    spec.resamples = 2;
    spec.gamma_grid = default_gamma_grid(base.infectivity.lli, 12);

    const GammaFitResult r = calibrate_gamma(base, spec, 9001);
    CHECK(r.grid == spec.gamma_grid);
    REQUIRE(r.mean_r.size() == 12);
    CHECK(r.mean_r.front() == 0.0); // gamma 0 never infects
    CHECK(r.mean_r.back() > r.mean_r[4]);
    CHECK(r.line.slope > 0.0);
    CHECK(r.gamma_star ==
          doctest::Approx((spec.target_rs - r.line.intercept) / r.line.slope)
              .epsilon(1e-12));
    // The default target sits in the interior at a plausible transmissibility.
    CHECK(r.gamma_star > 0.02);
    CHECK(r.gamma_star < 0.07);

    const GammaFitResult again = calibrate_gamma(base, spec, 9001);
    CHECK(again.gamma_star == r.gamma_star);
    const GammaFitResult other = calibrate_gamma(base, spec, 9002);
    CHECK(other.gamma_star != r.gamma_star);
}

TEST_CASE("eta samples are deterministic, bounded and sensitivity-monotone")
{
    ScenarioConfig base = default_config();
    const auto s1 = draw_eta_samples(base.disease, base.noise, base.lfd, 5000, 31);
    const auto s2 = draw_eta_samples(base.disease, base.noise, base.lfd, 5000, 31);
    REQUIRE(s1.size() == 5000);
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].log10_vl == s2[i].log10_vl);
        CHECK(s1[i].log10_vl >= 0.0); // the infection day itself sits at VL 1
        CHECK(s1[i].log10_vl <= 15.0);
        CHECK(s1[i].u_effect == 0.0); // beta_u defaults to zero
    }

    const double m_half = mean_sensitivity_at(0.5, base.lfd, s1);
    const double m_one = mean_sensitivity_at(1.0, base.lfd, s1);
    const double m_two = mean_sensitivity_at(2.0, base.lfd, s1);
    CHECK(m_half < m_one);
    CHECK(m_one < m_two);

    // With the heavy-tail extension on, the same keys give different loads
    // that still respect the acceptance band.
    HeavyTailNoiseParams noisy = base.noise;
    noisy.enabled = true;
    const auto sn = draw_eta_samples(base.disease, noisy, base.lfd, 2000, 31);
    bool any_differs = false;
    for (std::size_t i = 0; i < sn.size(); ++i) {
        CHECK(sn[i].log10_vl >= 0.0);
        CHECK(sn[i].log10_vl <= 15.0);
        any_differs = any_differs || sn[i].log10_vl != s1[i].log10_vl;
    }
    CHECK(any_differs);

    LfdModelParams with_u = base.lfd;
    with_u.beta_u = 1.0;
    const auto su = draw_eta_samples(base.disease, base.noise, with_u, 20000, 31);
    double mean = 0.0, sq = 0.0;
    for (const auto& s : su) {
        mean += s.u_effect;
        sq += s.u_effect * s.u_effect;
    }
    mean /= 20000.0;
    const double sd = std::sqrt(sq / 20000.0 - mean * mean);
    CHECK(std::abs(mean) < 0.025);
    CHECK(sd == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("eta calibration reaches the target mean and rejects bad brackets")
{
    ScenarioConfig base = default_config();
    EtaCalibrationSpec spec;
    spec.n_samples = 20000;

    const EtaFitResult r = calibrate_eta(spec, base.disease, base.noise, base.lfd, 77);
    CHECK(std::abs(r.achieved_mean - spec.target_mean) < 1e-4);
    CHECK(r.eta > spec.eta_lo);
    CHECK(r.eta < spec.eta_hi);

    // The solution is a fixed point of the mean over the same sample draw.
    const auto samples =
        draw_eta_samples(base.disease, base.noise, base.lfd, spec.n_samples, 77);
    CHECK(mean_sensitivity_at(r.eta, base.lfd, samples) ==
          doctest::Approx(r.achieved_mean).epsilon(1e-12));

    EtaCalibrationSpec cramped = spec;
    cramped.eta_hi = 0.01;
    CHECK_THROWS_AS(calibrate_eta(cramped, base.disease, base.noise, base.lfd, 77),
                    CalibrationError);
    EtaCalibrationSpec tiny = spec;
    tiny.target_mean = 1e-7;
    CHECK_THROWS_AS(calibrate_eta(tiny, base.disease, base.noise, base.lfd, 77),
                    CalibrationError);
    EtaCalibrationSpec bad = spec;
    bad.eta_lo = -1.0;
    CHECK_THROWS_AS(calibrate_eta(bad, base.disease, base.noise, base.lfd, 77),
                    ConfigError);
}
