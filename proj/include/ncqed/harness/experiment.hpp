#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncqed/dynamics.hpp"
#include "ncqed/harness/config.hpp"

namespace ncqed::harness {

struct RunResult
{
    Trajectory trajectory;
    ModulationProfile drive; ///< with the eta that was actually used
    std::vector<std::string> advisories;
};

/// Build the configured Hamiltonian and integrate it. Writes the CSV when the
/// config names one. The effective Hamiltonian is propagated exactly on a
/// uniform grid (sample_interval, or t_end / 1000).
RunResult run(const ExperimentConfig& config);

/// The exact generator a config selects (lab or interaction frame, atom or
/// coupling modulation).
TimeDependentOperator exact_generator(const ExperimentConfig& config, const Space& space);

struct ComparisonReport
{
    ResonanceKind kind = ResonanceKind::AJC;
    double threshold = 0.1;
    /// max over time of the L-infinity distance between population tables
    double sup_distance = 0.0;
    /// RMS over time of the difference, per observable (n_mean, P_g, P_e)
    std::map<std::string, double> rms;
    /// First sample time where the distance exceeds `threshold`.
    std::optional<double> validity_horizon;
    /// <n> of the exact run at the horizon and g0 sqrt(<n>)/|Delta_-| there.
    std::optional<double> n_at_horizon;
    std::optional<double> dispersive_parameter_at_horizon;
    double t_end = 0.0;
    Trajectory exact;
    Trajectory effective;
    std::vector<std::string> advisories;
};

/// Exact interaction-picture run against the time-independent effective
/// Hamiltonian of `kind`, from the same initial state, on the same time grid.
/// Needs a resonance block in the config (its order and xi are reused).
ComparisonReport compare(const ExperimentConfig& config, ResonanceKind kind,
                         double threshold = 0.1);

struct ResonanceRow
{
    int order = 1;
    ResonanceKind kind = ResonanceKind::AJC;
    double xi = 0.0;
    double eta = 0.0;
    Complex theta_K; ///< effective modulation coupling at this eta
    double delta = 0.0;
    double delta_K = 0.0;
    double rate = 0.0; ///< g0 |theta_K| (AJC, JC) or |delta_K theta_K| (DCE)
};

/// Drive frequencies and couplings of every resonance kind for K = 1..K_max.
/// `xi` gives the shift used for each kind (zero when absent). JC rows are
/// skipped when Delta_- == 0.
std::vector<ResonanceRow> resonance_table(const SystemParams& params,
                                          const ModulationProfile& profile, int K_max,
                                          const std::map<ResonanceKind, double>& xi = {});

void write_resonance_table(const std::vector<ResonanceRow>& rows, std::ostream& out);

} // namespace ncqed::harness
