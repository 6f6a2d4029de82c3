#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gaspower {

struct TimeSeriesOutput {
    std::string id;  // e.g. pressure@S25
    std::vector<double> times;
    std::vector<double> values;
};

struct ProfileOutput {
    std::string id;
    double time = 0.0;
    std::vector<double> x;
    std::vector<double> rho;
};

// File name for a quantity id: characters outside [A-Za-z0-9._-] become '_'.
std::string file_stem(const std::string& id);

// One CSV per quantity with header "t,value" and 17 significant digits, plus an
// SVG line plot when svg is set. Empty input, duplicate ids or non-increasing
// times are config errors; unwritable paths are io errors.
std::vector<std::filesystem::path> write_timeseries(std::span<const TimeSeriesOutput> outputs,
                                                    const std::filesystem::path& directory, bool svg = false);

// CSV with header "x,rho" per profile.
std::vector<std::filesystem::path> write_profiles(std::span<const ProfileOutput> profiles,
                                                  const std::filesystem::path& directory, bool svg = false);

void write_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
               const std::string& ylabel, std::span<const double> x, std::span<const double> y);

}  // namespace gaspower
