#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace schoolsim {

using PupilId = std::int32_t;
using Day = std::int32_t;

// Day 0 of every run is a Monday.
inline int weekday(Day d)
{
    return static_cast<int>(((d % 7) + 7) % 7);
}

// Mon-Fri; policy closures are handled separately.
inline bool is_standard_school_day(Day d)
{
    return weekday(d) < 5;
}

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SamplingError : std::runtime_error {
    explicit SamplingError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace schoolsim
