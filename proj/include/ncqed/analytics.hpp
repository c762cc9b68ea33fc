#pragma once

#include <string>
#include <vector>

#include "ncqed/hamiltonians.hpp"
#include "ncqed/modulation.hpp"

namespace ncqed {

enum class Branch { Plus, Minus };

/**
 * Slowly-varying-amplitude prediction for the resonant atom-cavity regime
 * under the AJC modulation resonance, starting from |g,0>:
 *
 *   P_{g,0} = cos^2(chi t),
 *   P_{e,1} = sin^2(y + q) sin^2(chi t),
 *   P_{g,2} = cos^2(y - q) sin^2(chi t),
 *
 * chi = g0 |theta| sin(y + q), tan y = sqrt[(2 sqrt2 g0 + D)/(2 sqrt2 g0 - D)] with
 * D = Delta_-, xi_pm = D/2 +- sqrt2 g0, q = 0 on the minus branch and pi/2 on the plus one.
 */
struct ResonantAJCPrediction
{
    double xi_plus = 0.0;
    double xi_minus = 0.0;
    double xi = 0.0;  ///< shift of the selected branch
    double eta = 0.0; ///< drive frequency Delta_+ - xi of the selected branch
    double theta_abs = 0.0;
    double chi = 0.0;
    double y = 0.0; ///< in (0, pi/2)
    double q = 0.0;

    double p_g0(double t) const;
    double p_e1(double t) const;
    double p_g2(double t) const;
    /// Peak values of P_{e,1} and P_{g,2}.
    double max_p_e1() const;
    double max_p_g2() const;
};

/// theta is evaluated at the branch's own drive frequency (profile.eta is ignored).
/// Throws DomainError when |Delta_-| >= 2 sqrt2 g0.
ResonantAJCPrediction resonant_ajc_prediction(const SystemParams& params,
                                              const ModulationProfile& profile, Branch branch);

/// Advisory when |Delta_-|/g0 is not small.
std::vector<std::string> resonant_regime_advisories(const SystemParams& params,
                                                    const ModulationProfile& profile);

/// <n>_DCE(t) = sinh^2(2 |delta theta| t), with delta_K, theta_K for K > 1.
double dce_growth(const SystemParams& params, const ModulationProfile& profile,
                  const ResonanceSpec& spec, double t);

struct PulledFrequency
{
    double expanded = 0.0;   ///< (omega + s delta) - s delta (eps / Delta_-) f_t
    double unexpanded = 0.0; ///< omega + s g0^2 / (Delta_- + eps f_t)
    bool singular = false;   ///< Delta_- + eps f_t has vanished or changed sign
};

/// Cavity frequency pulled by the dispersively coupled atom; sigma_z = +-1.
PulledFrequency pulled_frequency(const SystemParams& params, const ModulationProfile& profile,
                                 double t, int sigma_z);

struct DecoherenceBudget
{
    double rate_dce = 0.0; ///< |delta theta|
    double rate_ajc = 0.0; ///< |g theta|
    double kappa = 0.0;
    double gamma = 0.0;
    double gamma_ph = 0.0;
    double worst_loss = 0.0; ///< max(kappa, gamma, gamma_ph)
    double dce_ratio = 0.0;  ///< rate_dce / worst_loss (infinity when lossless)
    double ajc_ratio = 0.0;
    std::string verdict;     ///< "feasible" or "infeasible"
};

/// Compares photon creation rates against the loss rates; needs kappa, gamma,
/// gamma_ph in params (ConfigError otherwise).
DecoherenceBudget decoherence_budget(const SystemParams& params, const ModulationProfile& profile,
                                     const ResonanceSpec& spec);

} // namespace ncqed
