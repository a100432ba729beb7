#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schoolsim/calibration.hpp"
#include "schoolsim/config.hpp"
#include "schoolsim/engine.hpp"
#include "schoolsim/metrics.hpp"
#include "schoolsim/rng.hpp"

namespace {

using namespace schoolsim;

std::vector<ScenarioCell> load_cells(const std::string& config_path)
{
    if (config_path.empty())
        return {{"base", default_config()}};
    return load_scenarios(config_path);
}

ScenarioConfig load_single(const std::string& config_path)
{
    if (config_path.empty())
        return default_config();
    return load_config(config_path);
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int replications, std::int64_t seed, bool daily)
{
    auto cells = load_cells(config_path);
    for (auto& cell : cells) {
        if (replications > 0)
            cell.config.replications = replications;
        if (seed >= 0)
            cell.config.base_seed = static_cast<std::uint64_t>(seed);
        if (daily)
            cell.config.emit_daily = true;
    }

    std::filesystem::create_directories(out_dir);

    std::vector<ScenarioRuns> all_runs;
    std::vector<ScenarioSummary> summaries;
    for (const auto& cell : cells) {
        ScenarioRuns sr;
        sr.scenario = cell.id;
        sr.runs = run_scenario(cell.config);
        summaries.push_back(aggregate(cell.id, sr.runs));
        all_runs.push_back(std::move(sr));
    }

    const auto join = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    write_runs_csv(join("runs.csv"), all_runs);
    write_summary_csv(join("summary.csv"), summaries);
    if (std::any_of(cells.begin(), cells.end(),
                    [](const ScenarioCell& c) { return c.config.emit_daily; }))
        write_daily_csv(join("daily.csv"), all_runs);

    nlohmann::json resolved;
    if (cells.size() == 1 && cells.front().id == "base") {
        resolved = config_to_json(cells.front().config);
    } else {
        resolved = nlohmann::json::array();
        for (const auto& cell : cells)
            resolved.push_back({{"id", cell.id}, {"config", config_to_json(cell.config)}});
    }
    std::ofstream res(join("scenario.resolved.json"), std::ios::binary);
    if (!res)
        throw IoError("cannot write scenario.resolved.json");
    res << resolved.dump(2) << "\n";

    for (const auto& s : summaries)
        std::printf("%-48s infected median %.4f  missed median %.4f  lfd mean %.3f  pcr mean %.3f\n",
                    s.scenario.c_str(), s.proportion_infected.median,
                    s.proportion_schooldays_missed.median, s.lfd_tests_per_pupil.mean,
                    s.pcr_tests_per_pupil.mean);
    return 0;
}

int cmd_calibrate_gamma(const std::string& config_path, double target_rs,
                        int populations, int resamples, int grid_n, int followup_days,
                        std::int64_t seed, bool isolate_index, const std::string& json_out)
{
    ScenarioConfig base = load_single(config_path);
    GammaCalibrationSpec spec;
    spec.target_rs = target_rs;
    spec.populations = populations;
    spec.resamples = resamples;
    spec.followup_days = followup_days;
    spec.isolate_index = isolate_index;
    spec.gamma_grid = default_gamma_grid(base.infectivity.lli, grid_n);
    const std::uint64_t cal_seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : base.base_seed;

    const GammaFitResult fit = calibrate_gamma(base, spec, cal_seed);
    std::printf("gamma_star %.10g\n", fit.gamma_star);
    std::printf("line intercept %.10g slope %.10g\n", fit.line.intercept, fit.line.slope);
    std::printf("grid %zu points over [%.10g, %.10g], %d populations x %d resamples\n",
                fit.grid.size(), fit.grid.front(), fit.grid.back(), populations, resamples);

    if (!json_out.empty()) {
        nlohmann::json j;
        j["gamma_star"] = fit.gamma_star;
        j["intercept"] = fit.line.intercept;
        j["slope"] = fit.line.slope;
        j["target_rs"] = target_rs;
        j["grid"] = fit.grid;
        j["mean_r"] = fit.mean_r;
        j["seed"] = cal_seed;
        std::ofstream out(json_out, std::ios::binary);
        if (!out)
            throw IoError("cannot write " + json_out);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_calibrate_eta(const std::string& config_path, double target_x, long samples,
                      std::int64_t seed)
{
    ScenarioConfig base = load_single(config_path);
    EtaCalibrationSpec spec;
    spec.target_mean = target_x;
    spec.n_samples = samples;
    const std::uint64_t cal_seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : base.base_seed;
    const EtaFitResult fit =
        calibrate_eta(spec, base.disease, base.noise, base.lfd, cal_seed);
    std::printf("eta %.10g\n", fit.eta);
    std::printf("achieved_mean %.10g (target %.10g, %ld samples)\n", fit.achieved_mean,
                target_x, samples);
    return 0;
}

int cmd_dump_trajectories(const std::string& config_path, int n, std::int64_t seed,
                          const std::string& out_path)
{
    ScenarioConfig base = load_single(config_path);
    const std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : base.base_seed;

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + out_path);
    out << "trajectory,symptomatic,day,vl,log10_vl,symptomatic_today\n";

    std::optional<NoiseSampler> sampler;
    if (base.noise.enabled)
        sampler.emplace(base.noise);

    for (int i = 0; i < n; ++i) {
        auto eng = keyed_engine(s, Stream::Disease, static_cast<std::uint64_t>(i));
        ViralLoadTrajectory tr = sample_trajectory(base.disease, eng);
        if (sampler.has_value())
            attach_noise(tr, *sampler, eng);
        const int last = last_positive_day(tr);
        for (int d = 0; d <= last; ++d) {
            const double vl = viral_load_on_day(tr, d);
            out << i << ',' << (tr.symptomatic ? 1 : 0) << ',' << d << ','
                << format_number(vl) << ','
                << format_number(vl > 0.0 ? std::log10(vl) : 0.0) << ','
                << (symptomatic_on_day(tr, d) ? 1 : 0) << '\n';
        }
    }
    return 0;
}

int cmd_dump_adjacency(const std::string& config_path, const std::string& out_path)
{
    ScenarioConfig base = load_single(config_path);
    const SchoolLayout layout = base.contacts.has_value()
                                    ? build_school(base.school, *base.contacts)
                                    : build_school(base.school);
    const auto m = expected_adjacency(layout);

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + out_path);
    out << "pupil_a,pupil_b,same_bubble,same_class,expected_daily_contacts\n";
    const int n = layout.n_pupils();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            out << a << ',' << b << ','
                << (layout.bubble_of[a] == layout.bubble_of[b] ? 1 : 0) << ','
                << (layout.class_of[a] == layout.class_of[b] ? 1 : 0) << ','
                << format_number(m[a][b]) << '\n';
    return 0;
}

int cmd_dump_sensitivity(const std::string& config_path, const std::string& out_path,
                         double lo, double hi, double step)
{
    ScenarioConfig base = load_single(config_path);
    if (!(step > 0.0) || !(hi >= lo))
        throw ConfigError("sensitivity curve: need step > 0 and max >= min");

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + out_path);
    out << "log10_vl,sensitivity\n";
    for (double lv = lo; lv <= hi + 1e-12; lv += step) {
        const double vl = std::pow(10.0, lv);
        out << format_number(lv) << ','
            << format_number(lfd_sensitivity(base.lfd, vl, 0.0)) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Agent-based simulator of test-and-isolate policies in a school"};
    app.require_subcommand(1);

    std::string config_path, out_dir, out_file = "-", json_out;
    int replications = 0, n = 100, populations = 1000, resamples = 10, grid_n = 100,
        followup_days = 21;
    long samples = 100000;
    std::int64_t seed = -1;
    bool daily = false, isolate_index = false;
    double target_rs = 3.0, target_x = 0.6;
    double curve_lo = 0.0, curve_hi = 12.0, curve_step = 0.05;

    auto* sim = app.add_subcommand("simulate", "Run scenario replications and write CSV outputs");
    sim->add_option("--config", config_path, "Scenario JSON (defaults used when omitted)");
    sim->add_option("--out", out_dir, "Output directory")->required();
    sim->add_option("--replications", replications, "Override replication count");
    sim->add_option("--seed", seed, "Override base seed");
    sim->add_flag("--daily", daily, "Also write the daily infectious-attending series");

    auto* cg = app.add_subcommand("calibrate-gamma",
                                  "Fit the infectivity slope to a target reproduction number");
    cg->add_option("--config", config_path, "Scenario JSON for the disease model");
    cg->add_option("--target-rs", target_rs, "Target school reproduction number");
    cg->add_option("--populations", populations, "Trajectory sets");
    cg->add_option("--resamples", resamples, "Contact replays per set");
    cg->add_option("--grid-n", grid_n, "Gamma grid size");
    cg->add_option("--followup-days", followup_days, "Days simulated per run");
    cg->add_option("--seed", seed, "Calibration seed");
    cg->add_flag("--isolate-index", isolate_index, "Keep the index case out of school");
    cg->add_option("--json", json_out, "Also write the fit as JSON");

    auto* ce = app.add_subcommand("calibrate-eta",
                                  "Fit the LFD sensitivity scale to a target mean sensitivity");
    ce->add_option("--config", config_path, "Scenario JSON for the disease and LFD models");
    ce->add_option("--target-x", target_x, "Target mean pre-symptomatic sensitivity")->required();
    ce->add_option("--samples", samples, "Trajectory samples");
    ce->add_option("--seed", seed, "Calibration seed");

    auto* dt = app.add_subcommand("dump-trajectories", "Sample viral-load trajectories to CSV");
    dt->add_option("--config", config_path, "Scenario JSON");
    dt->add_option("--n", n, "Number of trajectories");
    dt->add_option("--seed", seed, "Sampling seed");
    dt->add_option("--out", out_file, "Output CSV path")->required();

    auto* da = app.add_subcommand("dump-adjacency", "Write the expected contact matrix to CSV");
    da->add_option("--config", config_path, "Scenario JSON");
    da->add_option("--out", out_file, "Output CSV path")->required();

    auto* ds = app.add_subcommand("dump-sensitivity-curve",
                                  "Write LFD sensitivity over a log10 viral-load grid");
    ds->add_option("--config", config_path, "Scenario JSON");
    ds->add_option("--out", out_file, "Output CSV path")->required();
    ds->add_option("--log10-min", curve_lo, "Grid start");
    ds->add_option("--log10-max", curve_hi, "Grid end");
    ds->add_option("--step", curve_step, "Grid step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, out_dir, replications, seed, daily);
        if (cg->parsed())
            return cmd_calibrate_gamma(config_path, target_rs, populations, resamples,
                                       grid_n, followup_days, seed, isolate_index, json_out);
        if (ce->parsed())
            return cmd_calibrate_eta(config_path, target_x, samples, seed);
        if (dt->parsed())
            return cmd_dump_trajectories(config_path, n, seed, out_file);
        if (da->parsed())
            return cmd_dump_adjacency(config_path, out_file);
        if (ds->parsed())
            return cmd_dump_sensitivity(config_path, out_file, curve_lo, curve_hi, curve_step);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
