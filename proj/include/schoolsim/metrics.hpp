#pragma once

#include <string>
#include <vector>

#include "schoolsim/engine.hpp"
#include "schoolsim/types.hpp"

namespace schoolsim {

// Linear-interpolation quantile on order statistics (the common spreadsheet
// and R default); p in [0, 1].
double quantile(std::vector<double> values, double p);

struct OutcomeStats {
    double mean = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
};

OutcomeStats summarize(const std::vector<double>& values);

struct ScenarioSummary {
    std::string scenario;
    int n_runs = 0;
    OutcomeStats proportion_infected;
    OutcomeStats proportion_schooldays_missed;
    OutcomeStats lfd_tests_per_pupil;
    OutcomeStats pcr_tests_per_pupil;
};

ScenarioSummary aggregate(const std::string& scenario,
                          const std::vector<RunResult>& runs);

struct ScenarioRuns {
    std::string scenario;
    std::vector<RunResult> runs;
};

// CSV output: comma separated, header row, '.' decimal point, LF line ends.
void write_runs_csv(const std::string& path, const std::vector<ScenarioRuns>& scenarios);
void write_summary_csv(const std::string& path,
                       const std::vector<ScenarioSummary>& summaries);
void write_daily_csv(const std::string& path, const std::vector<ScenarioRuns>& scenarios);

std::string format_number(double value);

} // namespace schoolsim
