#include "schoolsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace schoolsim {

double quantile(std::vector<double> values, double p)
{
    if (values.empty())
        throw ConfigError("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError("quantile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = p * (static_cast<double>(values.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

OutcomeStats summarize(const std::vector<double>& values)
{
    OutcomeStats s;
    double acc = 0.0;
    for (double v : values)
        acc += v;
    s.mean = acc / static_cast<double>(values.size());
    s.q25 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q75 = quantile(values, 0.75);
    return s;
}

ScenarioSummary aggregate(const std::string& scenario, const std::vector<RunResult>& runs)
{
    if (runs.empty())
        throw ConfigError("aggregate: no runs");
    auto collect = [&](double RunResult::*field) {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& r : runs)
            v.push_back(r.*field);
        return v;
    };
    ScenarioSummary s;
    s.scenario = scenario;
    s.n_runs = static_cast<int>(runs.size());
    s.proportion_infected = summarize(collect(&RunResult::proportion_infected));
    s.proportion_schooldays_missed =
        summarize(collect(&RunResult::proportion_schooldays_missed));
    s.lfd_tests_per_pupil = summarize(collect(&RunResult::lfd_tests_per_pupil));
    s.pcr_tests_per_pupil = summarize(collect(&RunResult::pcr_tests_per_pupil));
    return s;
}

std::string format_number(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

static std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out)
        throw IoError("cannot open for writing: " + path);
    return out;
}

void write_runs_csv(const std::string& path, const std::vector<ScenarioRuns>& scenarios)
{
    auto out = open_out(path);
    out << "scenario,replication,seed,proportion_infected,"
           "proportion_schooldays_missed,lfd_tests_per_pupil,pcr_tests_per_pupil\n";
    for (const auto& sc : scenarios)
        for (const auto& r : sc.runs)
            out << sc.scenario << ',' << r.replication << ',' << r.seed << ','
                << format_number(r.proportion_infected) << ','
                << format_number(r.proportion_schooldays_missed) << ','
                << format_number(r.lfd_tests_per_pupil) << ','
                << format_number(r.pcr_tests_per_pupil) << '\n';
}

void write_summary_csv(const std::string& path,
                       const std::vector<ScenarioSummary>& summaries)
{
    auto out = open_out(path);
    out << "scenario,outcome,n_runs,mean,q25,median,q75\n";
    auto row = [&](const ScenarioSummary& s, const char* outcome, const OutcomeStats& st) {
        out << s.scenario << ',' << outcome << ',' << s.n_runs << ','
            << format_number(st.mean) << ',' << format_number(st.q25) << ','
            << format_number(st.median) << ',' << format_number(st.q75) << '\n';
    };
    for (const auto& s : summaries) {
        row(s, "proportion_infected", s.proportion_infected);
        row(s, "proportion_schooldays_missed", s.proportion_schooldays_missed);
        row(s, "lfd_tests_per_pupil", s.lfd_tests_per_pupil);
        row(s, "pcr_tests_per_pupil", s.pcr_tests_per_pupil);
    }
}

void write_daily_csv(const std::string& path, const std::vector<ScenarioRuns>& scenarios)
{
    auto out = open_out(path);
    out << "scenario,replication,day,infectious_attending\n";
    for (const auto& sc : scenarios)
        for (const auto& r : sc.runs)
            for (std::size_t d = 0; d < r.daily_infectious_free.size(); ++d)
                out << sc.scenario << ',' << r.replication << ',' << d << ','
                    << r.daily_infectious_free[d] << '\n';
}

} // namespace schoolsim
