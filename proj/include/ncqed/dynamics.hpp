#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ncqed/hamiltonians.hpp"
#include "ncqed/hilbert.hpp"
#include "ncqed/modulation.hpp"

namespace ncqed {

enum class IntegratorMethod {
    RK4,              ///< classic fixed-step 4th order, step = max_step
    DormandPrince54,  ///< embedded 5(4) pair
    Fehlberg78,       ///< embedded 7(8) pair
};

std::string to_string(IntegratorMethod method);
IntegratorMethod parse_integrator_method(const std::string& text);

struct IntegratorConfig
{
    IntegratorMethod method = IntegratorMethod::Fehlberg78;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    /// Upper bound on the step (the fixed step for RK4). 0 means unbounded.
    double max_step = 0.0;
    /// Record a sample every `sample_stride` accepted steps (and at t_end) ...
    int sample_stride = 1;
    /// ... unless this is positive, in which case samples land exactly on
    /// multiples of it. Aligned grids are needed to compare two runs.
    double sample_interval = 0.0;

    void validate() const;

    /// Defaults with max_step = 2 pi / (50 eta).
    static IntegratorConfig for_drive(double eta);
};

struct Sample
{
    double t = 0.0;
    Populations populations;
    double norm_error = 0.0;
};

class Trajectory
{
public:
    explicit Trajectory(Space space) : m_space(space) {}

    const Space& space() const { return m_space; }
    const std::vector<Sample>& samples() const { return m_samples; }
    std::vector<Sample>& samples() { return m_samples; }

    std::vector<double> times() const;

    /// Column by CSV name: t, norm_error, n_mean, P_g, P_e, P_g_<m>, P_e_<m>.
    std::vector<double> series(std::string_view name) const;

    double max_norm_error() const;
    double max_of(std::string_view name) const;

    StateVector final_state;
    long accepted_steps = 0;
    long rejected_steps = 0;

private:
    Space m_space;
    std::vector<Sample> m_samples;
};

/// Names of all CSV columns for a space, in output order.
std::vector<std::string> column_names(const Space& space);

/**
 * Solve i dpsi/dt = H(t) psi from t = 0 to t_end.
 *
 * The state is never renormalized; |<psi|psi> - 1| is recorded in every
 * sample as the accuracy monitor. Initial states with population at
 * m >= n_max - 2 are rejected (ConfigError). A step below ~1e-13 t raises
 * IntegrationError.
 */
Trajectory evolve(const TimeDependentOperator& hamiltonian, const QuantumState& psi0, double t_end,
                  const IntegratorConfig& config);

/// Exact propagation e^{-iHt} psi0 for a time-independent H via its eigendecomposition.
Trajectory evolve_static(const Operator& hamiltonian, const QuantumState& psi0,
                         std::span<const double> times);

/// 0, dt, 2 dt, ... up to and including t_end.
std::vector<double> uniform_times(double t_end, double dt);

struct FrameReport
{
    double sup_distance = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

/// Runs the lab-frame and interaction-picture Hamiltonians side by side and
/// compares the (frame-invariant) joint-basis populations.
FrameReport frame_populations_equivalence(const SystemParams& params,
                                          const ModulationProfile& profile,
                                          const QuantumState& psi0, double t_end,
                                          IntegratorConfig config);

struct TruncationReport
{
    std::vector<int> n_list;
    /// max over time of P(m >= n_max - 2), one entry per run.
    std::vector<double> tail;
    /// max over time of |<n>_i - <n>_{i+1}| for consecutive runs.
    std::vector<double> mean_photon_difference;
    double max_difference = 0.0;
    bool converged = false;
};

TruncationReport truncation_check(const std::function<Trajectory(int n_max)>& run,
                                  const std::vector<int>& n_list);

struct OscillationFit
{
    double frequency = 0.0; ///< nu in A sin^2(nu t) + B
    double amplitude = 0.0; ///< A
    double offset = 0.0;    ///< B
    double residual = 0.0;  ///< RMS residual
};

struct FitOptions
{
    /// Search window for nu. Zero bounds mean: from pi/(2 T) up to the sampling limit.
    double min_frequency = 0.0;
    double max_frequency = 0.0;
    /// Grid points per unit of nu T / pi.
    int oversampling = 16;
};

/// Least-squares fit of A sin^2(nu t) + B to a trajectory column. Throws
/// FitError when the RMS residual exceeds 0.2 |A|.
OscillationFit fit_oscillation(const Trajectory& trajectory, std::string_view observable,
                               const FitOptions& options = {});
OscillationFit fit_oscillation(std::span<const double> t, std::span<const double> y,
                               const FitOptions& options = {});

} // namespace ncqed
