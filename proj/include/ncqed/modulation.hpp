#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncqed/hilbert.hpp"

namespace ncqed {

/// Which system parameter carries the periodic modulation.
enum class ModulationTarget { AtomFrequency, Coupling };

/// Static frequencies in units of the cavity frequency (omega == 1 internally).
struct SystemParams
{
    double omega = 1.0;
    double Omega0 = 1.0;
    double g0 = 0.0;
    std::optional<double> kappa;
    std::optional<double> gamma;
    std::optional<double> gamma_ph;

    /// Throws ConfigError on non-positive omega/Omega0, negative g0 or negative rates.
    void validate() const;
};

constexpr int kMaxHarmonics = 16;

/**
 * Periodic modulation eps * f_t with
 *   f_t = sum_k (s_k sin(k eta t) + c_k cos(k eta t)).
 *
 * `s` holds s_1..s_K and `c` holds c_0..c_K; absent coefficients are zero.
 */
struct ModulationProfile
{
    double epsilon = 0.0;
    double eta = 1.0;
    std::vector<double> s;
    std::vector<double> c;
    ModulationTarget target = ModulationTarget::AtomFrequency;

    double s_k(int k) const;
    double c_k(int k) const;
    /// Highest harmonic with a declared coefficient.
    int harmonics() const;

    void validate() const;
    /// Non-fatal advisories, e.g. a modulation amplitude that is not small.
    std::vector<std::string> advisories(const SystemParams& params) const;

    static ModulationProfile pure_sine(double epsilon, double eta);
};

double evaluate_f(const ModulationProfile& profile, double t);

/// Omega(t) for atom modulation; Omega0 when the coupling is modulated.
double atomic_frequency(const SystemParams& params, const ModulationProfile& profile, double t);

/// g0(t) for coupling modulation; g0 when the atom is modulated.
double coupling_strength(const SystemParams& params, const ModulationProfile& profile, double t);

/// Lambda_k = -(c_k + i s_k) / (2k); requires k >= 1.
Complex lambda_k(const ModulationProfile& profile, int k);

struct Deltas
{
    double plus = 0.0;
    double minus = 0.0;
};

/// Delta_pm = Omega0 + eps c_0 +- omega. The eps c_0 offset only applies when
/// the atomic frequency is the modulated parameter.
Deltas deltas(const SystemParams& params, const ModulationProfile& profile);

struct PhasePair
{
    double plus = 0.0;
    double minus = 0.0;
};

/// Xi_pm(t) = int_0^t [Omega(tau) +- omega] dtau in closed form.
PhasePair phase_xi(const SystemParams& params, const ModulationProfile& profile, double t);

/// g = g0 exp[i (eps/eta) sum_k s_k / k].
Complex complex_g(const SystemParams& params, const ModulationProfile& profile);

enum class Sign { Plus, Minus };

/**
 * Partial sum, up to and including power `order`, of the exponential series
 *   g e^{i Delta t} sum_l X^l / l!,   X = (eps/eta) sum_k (Lambda_k e^{-ik eta t} - c.c.)
 * which converges to g0 exp(i Xi(t)).
 */
Complex coefficient_series(const SystemParams& params, const ModulationProfile& profile, Sign sign,
                           int order, double t);

/**
 * Coefficient of e^{i m eta t} in X^l / l! (the l-th term of the series above,
 * without the g e^{i Delta t} prefactor).
 */
Complex series_harmonic(const ModulationProfile& profile, int l, int m);

} // namespace ncqed
