#pragma once

#include <string>
#include <vector>

#include "ncqed/hilbert.hpp"
#include "ncqed/modulation.hpp"

namespace ncqed {

enum class ResonanceKind { AJC, JC, DCE };

std::string to_string(ResonanceKind kind);
/// Accepts "ajc", "jc", "dce" (case-insensitive); throws ConfigError otherwise.
ResonanceKind parse_resonance_kind(const std::string& text);

/// A modulation resonance of order K shifted by xi from its nominal position.
struct ResonanceSpec
{
    ResonanceKind kind = ResonanceKind::AJC;
    int order = 1;
    double xi = 0.0;
};

/**
 * Drive frequency for a resonance:
 *   AJC: (Delta_+ - xi) / K,  JC: (|Delta_-| - xi) / K,  DCE: (2 omega - 2 xi) / K.
 * Delta_pm depends on eps c_0 but not on eta, so no self-consistency loop is needed.
 * Throws DomainError for a JC resonance with Delta_- == 0.
 */
double resonance_frequency(const ResonanceSpec& spec, const SystemParams& params,
                           const ModulationProfile& profile);

/// Copy of `profile` with eta set to the resonance frequency of `spec`.
ModulationProfile tuned_profile(const ResonanceSpec& spec, const SystemParams& params,
                                const ModulationProfile& profile);

/// Advisories for a resonance (large shift relative to eta).
std::vector<std::string> resonance_advisories(const ResonanceSpec& spec, double eta);

struct DispersiveQuantities
{
    double delta = 0.0;   ///< g0^2 / Delta_-
    Complex theta;        ///< Lambda_1 eps / eta
    Complex theta_K;      ///< coefficient of e^{-iK eta t} in the series truncated at power K
    double delta_K = 0.0; ///< delta + g0^2 / Delta_+ (leading terms only)

    /// delta for K == 1, delta_K otherwise.
    double shift(int order) const { return order == 1 ? delta : delta_K; }
    /// theta for K == 1, theta_K otherwise.
    Complex coupling(int order) const { return order == 1 ? theta : theta_K; }
};

/// Uses profile.eta as the drive frequency. Throws DomainError when Delta_- == 0.
DispersiveQuantities dispersive_quantities(const SystemParams& params,
                                           const ModulationProfile& profile,
                                           const ResonanceSpec& spec);

// Exact Hamiltonians. The *_generator forms are what the integrator consumes;
// the dense forms evaluate the same operator at a single time.

/// Lab frame: H = omega n + Omega(t)/2 sigma_z + g0 (a + a^dag)(sigma_+ + sigma_-).
TimeDependentOperator rabi_generator(const SystemParams& params, const ModulationProfile& profile,
                                     const Space& space);
Operator rabi_hamiltonian(const SystemParams& params, const ModulationProfile& profile, double t,
                          const Space& space);

/// Interaction picture w.r.t. H0(t): g0 (e^{i Xi_-} a s+ + e^{i Xi_+} a^dag s+ + h.c.).
TimeDependentOperator interaction_generator(const SystemParams& params,
                                            const ModulationProfile& profile, const Space& space);
Operator interaction_hamiltonian(const SystemParams& params, const ModulationProfile& profile,
                                 double t, const Space& space);

/// Coupling modulation, interaction picture:
/// g0(t) (e^{i(Omega0-omega)t} a s+ + e^{i(Omega0+omega)t} a^dag s+ + h.c.).
TimeDependentOperator coupling_modulated_generator(const SystemParams& params,
                                                   const ModulationProfile& profile,
                                                   const Space& space);
Operator coupling_modulated_hamiltonian(const SystemParams& params,
                                        const ModulationProfile& profile, double t,
                                        const Space& space);

/// Advisory when g0(t) = g0 + eps f_t dips below zero somewhere in a period.
std::vector<std::string> coupling_advisories(const SystemParams& params,
                                             const ModulationProfile& profile);

/**
 * Time-independent effective Hamiltonian in its own rotating frame.
 *
 * AJC: [xi + delta(1 + 2n)] s_z/2 + (g theta a^dag s+ + h.c.)
 * JC:  [xi + delta(1 + 2n)] s_z/2 + (g theta a s+ + h.c.), with theta -> -theta*,
 *      xi -> -xi when Delta_- < 0
 * DCE: (xi - delta) n - delta (theta* a^2 + h.c.) for an atom in |g>; delta -> -delta
 *      for an atom in |e>.
 * Orders K > 1 substitute delta_K and theta_K. `profile.eta` must already be tuned.
 */
Operator effective_hamiltonian(const ResonanceSpec& spec, const SystemParams& params,
                               const ModulationProfile& profile, const Space& space,
                               Atom initial_atom);

/// xi n + (Delta_- + xi)/2 s_z + (g a s+ + g theta a^dag s+ + h.c.): the DCE-resonance
/// interaction Hamiltonian before the dispersive transformations.
Operator dce_intermediate_hamiltonian(const ResonanceSpec& spec, const SystemParams& params,
                                      const ModulationProfile& profile, const Space& space);

/// (xi + delta s_z) n + delta s_z (theta* a^2 + h.c.), optionally with the leading
/// correction -(2 delta / Delta_-)(g e^{i Delta_- t} a n s+ + h.c.).
Operator dce_transformed_hamiltonian(const ResonanceSpec& spec, const SystemParams& params,
                                     const ModulationProfile& profile, const Space& space,
                                     double t, bool include_correction);

/// g0 sqrt(<n>) / |Delta_-|; the dispersive pictures need this to be small.
double dispersive_parameter(const SystemParams& params, const ModulationProfile& profile,
                            double mean_photons);

} // namespace ncqed
