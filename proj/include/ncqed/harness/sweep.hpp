#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ncqed::harness {

struct SweepAxis
{
    std::string key;                 ///< dotted config key, e.g. resonance.xi_in_delta_units
    std::vector<std::string> values; ///< YAML scalars
};

/**
 * Grid file (YAML):
 *
 *   axes:
 *     resonance.xi_in_delta_units: {from: -4, to: 4, count: 17}
 *     initial_state: ["g,0", "e,0"]
 *   max_runs: 500        # optional, default 10000
 *   fit: P_e             # column to fit A sin^2(nu t) + B to, or "none"
 *   output: sweep.csv    # optional, default stdout
 *
 * Points are the Cartesian product of the axes, first axis slowest.
 */
struct SweepGrid
{
    std::vector<SweepAxis> axes;
    std::size_t max_runs = 10000;
    std::string fit = "P_e";
    std::optional<std::filesystem::path> output;

    std::size_t size() const;
    /// Scalar values of point `index`, one per axis.
    std::vector<std::string> point(std::size_t index) const;
};

SweepGrid parse_grid(const std::string& text, const std::string& source = "<grid>");
SweepGrid load_grid(const std::filesystem::path& path);

struct SweepRow
{
    std::size_t index = 0;
    std::vector<std::string> point;
    std::string status = "ok"; ///< ok, config_error, integration_error, domain_error, error
    std::string message;
    double max_n_mean = 0.0;
    double max_p_e = 0.0;
    double final_n_mean = 0.0;
    double final_p_e = 0.0;
    std::optional<double> fit_frequency;
};

struct SweepResult
{
    std::vector<std::string> keys;
    std::vector<SweepRow> rows; ///< always in grid order

    void write_csv(std::ostream& out) const;
    /// Index of the ok row with the largest value of `column` (max_n_mean or max_p_e).
    std::optional<std::size_t> argmax(const std::string& column) const;
};

/// Runs every grid point as an independent run() on a copy of the base config
/// (outputs.csv is ignored). `jobs` bounds the worker threads; 0 means one per
/// hardware thread. Rows do not depend on `jobs`.
SweepResult sweep(const std::string& base_config_text, const SweepGrid& grid, unsigned jobs = 0);

} // namespace ncqed::harness
