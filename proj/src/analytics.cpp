#include "ncqed/analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ncqed/errors.hpp"

namespace ncqed {

namespace {

double sq(double x)
{
    return x * x;
}

} // namespace

double ResonantAJCPrediction::p_g0(double t) const
{
    return sq(std::cos(chi * t));
}

double ResonantAJCPrediction::p_e1(double t) const
{
    return sq(std::sin(y + q)) * sq(std::sin(chi * t));
}

double ResonantAJCPrediction::p_g2(double t) const
{
    return sq(std::cos(y - q)) * sq(std::sin(chi * t));
}

double ResonantAJCPrediction::max_p_e1() const
{
    return sq(std::sin(y + q));
}

double ResonantAJCPrediction::max_p_g2() const
{
    return sq(std::cos(y - q));
}

ResonantAJCPrediction resonant_ajc_prediction(const SystemParams& params,
                                              const ModulationProfile& profile, Branch branch)
{
    const Deltas d = deltas(params, profile);
    const double edge = 2.0 * std::numbers::sqrt2 * params.g0;
    if (!(std::abs(d.minus) < edge))
        throw DomainError("resonant AJC prediction needs |Delta_-| < 2 sqrt2 g0");

    ResonantAJCPrediction p;
    p.xi_plus = d.minus / 2.0 + std::numbers::sqrt2 * params.g0;
    p.xi_minus = d.minus / 2.0 - std::numbers::sqrt2 * params.g0;
    p.xi = branch == Branch::Plus ? p.xi_plus : p.xi_minus;
    p.q = branch == Branch::Plus ? std::numbers::pi / 2.0 : 0.0;
    p.eta = d.plus - p.xi;
    p.theta_abs = std::abs(lambda_k(profile, 1)) * profile.epsilon / p.eta;
    p.y = std::atan(std::sqrt((edge + d.minus) / (edge - d.minus)));
    p.chi = params.g0 * p.theta_abs * std::sin(p.y + p.q);
    return p;
}

std::vector<std::string> resonant_regime_advisories(const SystemParams& params,
                                                    const ModulationProfile& profile)
{
    std::vector<std::string> out;
    const double ratio = std::abs(deltas(params, profile).minus) / params.g0;
    if (ratio > 0.3) {
        std::ostringstream msg;
        msg << "|Delta_-|/g0 = " << ratio << " is not small; resonant-regime formulas degrade";
        out.push_back(msg.str());
    }
    return out;
}

double dce_growth(const SystemParams& params, const ModulationProfile& profile,
                  const ResonanceSpec& spec, double t)
{
    if (spec.kind != ResonanceKind::DCE)
        throw ConfigError("DCE growth law requires a DCE resonance");
    const DispersiveQuantities q = dispersive_quantities(params, profile, spec);
    const double rate = std::abs(q.shift(spec.order) * q.coupling(spec.order));
    return sq(std::sinh(2.0 * rate * t));
}

PulledFrequency pulled_frequency(const SystemParams& params, const ModulationProfile& profile,
                                 double t, int sigma_z)
{
    if (sigma_z != 1 && sigma_z != -1)
        throw std::invalid_argument("sigma_z must be +1 or -1");
    const double dm = deltas(params, profile).minus;
    if (dm == 0.0)
        throw DomainError("pulled frequency needs Delta_- != 0");
    const double delta = params.g0 * params.g0 / dm;
    const double f = evaluate_f(profile, t);
    const double s = sigma_z;

    PulledFrequency out;
    out.expanded = (params.omega + s * delta) - s * delta * (profile.epsilon / dm) * f;
    const double denom = dm + profile.epsilon * f;
    out.singular = denom == 0.0 || (denom > 0.0) != (dm > 0.0);
    out.unexpanded = out.singular ? std::numeric_limits<double>::quiet_NaN()
                                  : params.omega + s * params.g0 * params.g0 / denom;
    return out;
}

DecoherenceBudget decoherence_budget(const SystemParams& params, const ModulationProfile& profile,
                                     const ResonanceSpec& spec)
{
    if (!params.kappa || !params.gamma || !params.gamma_ph)
        throw ConfigError("decoherence budget needs kappa, gamma and gamma_ph");
    const DispersiveQuantities q = dispersive_quantities(params, profile, spec);
    const double theta = std::abs(q.coupling(spec.order));

    DecoherenceBudget b;
    b.rate_dce = std::abs(q.shift(spec.order)) * theta;
    b.rate_ajc = params.g0 * theta;
    b.kappa = *params.kappa;
    b.gamma = *params.gamma;
    b.gamma_ph = *params.gamma_ph;
    b.worst_loss = std::max({b.kappa, b.gamma, b.gamma_ph});
    const double inf = std::numeric_limits<double>::infinity();
    b.dce_ratio = b.worst_loss > 0.0 ? b.rate_dce / b.worst_loss : (b.rate_dce > 0.0 ? inf : 0.0);
    b.ajc_ratio = b.worst_loss > 0.0 ? b.rate_ajc / b.worst_loss : (b.rate_ajc > 0.0 ? inf : 0.0);
    // A creation rate of the order of the worst loss rate or larger is enough.
    const bool ok = b.rate_dce > 0.0 && b.rate_ajc > 0.0 && b.dce_ratio >= 0.1 &&
                    b.ajc_ratio >= 0.1;
    b.verdict = ok ? "feasible" : "infeasible";
    return b;
}

} // namespace ncqed
