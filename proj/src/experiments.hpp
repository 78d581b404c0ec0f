#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace corr1d {

inline constexpr const char* kVersionString = "corr1d 1.0.0";

struct RunOptions {
    std::string config_path;
    std::optional<std::string> output_dir;  // overrides the config's output_dir
    std::optional<std::uint64_t> seed;      // overrides the config's seed
    int threads = 0;                        // 0 = available parallelism
};

// Runs the experiment described by a flat key-value config file (see the
// README for the format and the preset catalogue) and writes results.csv /
// shifts.csv / deviation.csv plus manifest.json into the output directory.
// Throws ConfigError for config problems and Error subclasses at runtime.
void run_experiment(const RunOptions& options);

struct CompareReport {
    std::string file_a;
    std::string file_b;
    std::size_t n_rows = 0;
    bool identical_bytes = false;
    double max_abs_delta = 0.0;  // over all numeric columns
    std::map<std::string, double> column_max_delta;
    std::vector<double> per_point_delta;  // first value column, row by row
    double chi2 = 0.0;                    // mean_T differences vs combined stderr
    long chi2_points = 0;
};

// Per-point comparison of two results files on matching grids.
// Throws GridMismatch when headers, row counts or grid columns differ.
CompareReport compare_csv(const std::string& file_a, const std::string& file_b);

std::string report_to_json(const CompareReport& report);
void write_report_json(const CompareReport& report, const std::string& path);

}  // namespace corr1d
