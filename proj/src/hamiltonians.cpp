#include "ncqed/hamiltonians.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ncqed/errors.hpp"

namespace ncqed {

namespace {

void require_atom_target(const ModulationProfile& profile, const char* what)
{
    if (profile.target != ModulationTarget::AtomFrequency)
        throw ConfigError(std::string(what) + " requires target = atom");
}

double delta_minus_checked(const SystemParams& params, const ModulationProfile& profile)
{
    const double dm = deltas(params, profile).minus;
    if (dm == 0.0)
        throw DomainError("Delta_- = 0: the dispersive shift is undefined");
    return dm;
}

} // namespace

std::string to_string(ResonanceKind kind)
{
    switch (kind) {
    case ResonanceKind::AJC: return "ajc";
    case ResonanceKind::JC: return "jc";
    case ResonanceKind::DCE: return "dce";
    }
    return "?";
}

ResonanceKind parse_resonance_kind(const std::string& text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "ajc")
        return ResonanceKind::AJC;
    if (lower == "jc")
        return ResonanceKind::JC;
    if (lower == "dce")
        return ResonanceKind::DCE;
    throw ConfigError("unknown resonance kind '" + text + "' (expected ajc, jc or dce)");
}

double resonance_frequency(const ResonanceSpec& spec, const SystemParams& params,
                           const ModulationProfile& profile)
{
    if (spec.order < 1)
        throw ConfigError("resonance order must be >= 1");
    const Deltas d = deltas(params, profile);
    double nominal = 0.0;
    switch (spec.kind) {
    case ResonanceKind::AJC:
        nominal = d.plus - spec.xi;
        break;
    case ResonanceKind::JC:
        if (d.minus == 0.0)
            throw DomainError("JC resonance is degenerate for Delta_- = 0");
        nominal = std::abs(d.minus) - spec.xi;
        break;
    case ResonanceKind::DCE:
        nominal = 2.0 * params.omega - 2.0 * spec.xi;
        break;
    }
    const double eta = nominal / spec.order;
    if (!(eta > 0.0))
        throw ConfigError("resonance produces non-positive drive frequency");
    return eta;
}

ModulationProfile tuned_profile(const ResonanceSpec& spec, const SystemParams& params,
                                const ModulationProfile& profile)
{
    ModulationProfile out = profile;
    out.eta = resonance_frequency(spec, params, profile);
    return out;
}

std::vector<std::string> resonance_advisories(const ResonanceSpec& spec, double eta)
{
    std::vector<std::string> out;
    if (std::abs(spec.xi) / eta > 0.1) {
        std::ostringstream msg;
        msg << "resonance shift |xi|/eta = " << std::abs(spec.xi) / eta << " is not small";
        out.push_back(msg.str());
    }
    return out;
}

DispersiveQuantities dispersive_quantities(const SystemParams& params,
                                           const ModulationProfile& profile,
                                           const ResonanceSpec& spec)
{
    const Deltas d = deltas(params, profile);
    if (d.minus == 0.0)
        throw DomainError("dispersive regime requires Delta_- != 0");
    if (spec.order < 1)
        throw ConfigError("resonance order must be >= 1");

    DispersiveQuantities q;
    const double g2 = params.g0 * params.g0;
    q.delta = g2 / d.minus;
    q.delta_K = q.delta + g2 / d.plus;
    q.theta = profile.target == ModulationTarget::AtomFrequency
                  ? lambda_k(profile, 1) * (profile.epsilon / profile.eta)
                  : Complex(0.0);

    if (profile.target == ModulationTarget::AtomFrequency) {
        q.theta_K = 0.0;
        for (int l = 1; l <= spec.order; ++l)
            q.theta_K += series_harmonic(profile, l, -spec.order);
    }
    return q;
}

TimeDependentOperator rabi_generator(const SystemParams& params, const ModulationProfile& profile,
                                     const Space& space)
{
    require_atom_target(profile, "lab-frame Rabi Hamiltonian");
    const Operators ops = build_operators(space);
    std::vector<TimeDependentOperator::Term> terms;
    terms.push_back({to_sparse(ops.n), false});
    terms.push_back({to_sparse(0.5 * ops.sigma_z), false});
    terms.push_back({to_sparse((ops.a + ops.a_dag) * (ops.sigma_plus + ops.sigma_minus)), false});

    auto coefficients = [params, profile](double t, std::span<Complex> c) {
        c[0] = params.omega;
        c[1] = atomic_frequency(params, profile, t);
        c[2] = params.g0;
    };
    return TimeDependentOperator(space.dim(), std::move(terms), coefficients);
}

Operator rabi_hamiltonian(const SystemParams& params, const ModulationProfile& profile, double t,
                          const Space& space)
{
    Operator h = rabi_generator(params, profile, space).at(t);
    require_hermitian(h, "Rabi Hamiltonian");
    return h;
}

TimeDependentOperator interaction_generator(const SystemParams& params,
                                            const ModulationProfile& profile, const Space& space)
{
    require_atom_target(profile, "interaction-picture Hamiltonian");
    const Operators ops = build_operators(space);
    std::vector<TimeDependentOperator::Term> terms;
    terms.push_back({to_sparse(ops.a * ops.sigma_plus), true});
    terms.push_back({to_sparse(ops.a_dag * ops.sigma_plus), true});

    auto coefficients = [params, profile](double t, std::span<Complex> c) {
        const PhasePair xi = phase_xi(params, profile, t);
        c[0] = params.g0 * Complex(std::cos(xi.minus), std::sin(xi.minus));
        c[1] = params.g0 * Complex(std::cos(xi.plus), std::sin(xi.plus));
    };
    return TimeDependentOperator(space.dim(), std::move(terms), coefficients);
}

Operator interaction_hamiltonian(const SystemParams& params, const ModulationProfile& profile,
                                 double t, const Space& space)
{
    Operator h = interaction_generator(params, profile, space).at(t);
    require_hermitian(h, "interaction Hamiltonian");
    return h;
}

TimeDependentOperator coupling_modulated_generator(const SystemParams& params,
                                                   const ModulationProfile& profile,
                                                   const Space& space)
{
    if (profile.target != ModulationTarget::Coupling)
        throw ConfigError("coupling-modulated Hamiltonian requires target = coupling");
    const Operators ops = build_operators(space);
    std::vector<TimeDependentOperator::Term> terms;
    terms.push_back({to_sparse(ops.a * ops.sigma_plus), true});
    terms.push_back({to_sparse(ops.a_dag * ops.sigma_plus), true});

    auto coefficients = [params, profile](double t, std::span<Complex> c) {
        const double g = coupling_strength(params, profile, t);
        const double rot = (params.Omega0 - params.omega) * t;
        const double anti = (params.Omega0 + params.omega) * t;
        c[0] = g * Complex(std::cos(rot), std::sin(rot));
        c[1] = g * Complex(std::cos(anti), std::sin(anti));
    };
    return TimeDependentOperator(space.dim(), std::move(terms), coefficients);
}

Operator coupling_modulated_hamiltonian(const SystemParams& params,
                                        const ModulationProfile& profile, double t,
                                        const Space& space)
{
    Operator h = coupling_modulated_generator(params, profile, space).at(t);
    require_hermitian(h, "coupling-modulated Hamiltonian");
    return h;
}

std::vector<std::string> coupling_advisories(const SystemParams& params,
                                             const ModulationProfile& profile)
{
    std::vector<std::string> out;
    if (profile.target != ModulationTarget::Coupling)
        return out;
    const double period = 2.0 * std::numbers::pi / profile.eta;
    double lowest = params.g0;
    constexpr int kSamples = 512;
    for (int i = 0; i < kSamples; ++i)
        lowest = std::min(lowest, coupling_strength(params, profile, period * i / kSamples));
    if (lowest < 0.0) {
        std::ostringstream msg;
        msg << "modulated coupling g0(t) becomes negative (min " << lowest << ")";
        out.push_back(msg.str());
    }
    return out;
}

Operator effective_hamiltonian(const ResonanceSpec& spec, const SystemParams& params,
                               const ModulationProfile& profile, const Space& space,
                               Atom initial_atom)
{
    require_atom_target(profile, "effective Hamiltonian");
    const Operators ops = build_operators(space);
    const DispersiveQuantities q = dispersive_quantities(params, profile, spec);
    const Complex g = complex_g(params, profile);
    const double delta = q.shift(spec.order);
    Complex theta = q.coupling(spec.order);
    double xi = spec.xi;

    Operator h;
    switch (spec.kind) {
    case ResonanceKind::AJC: {
        const Operator detuning = xi * ops.identity + delta * (ops.identity + 2.0 * ops.n);
        const Operator coupling = g * theta * ops.a_dag * ops.sigma_plus;
        h = 0.5 * detuning * ops.sigma_z + coupling + Operator(coupling.adjoint());
        break;
    }
    case ResonanceKind::JC: {
        if (deltas(params, profile).minus < 0.0) {
            theta = -std::conj(theta);
            xi = -xi;
        }
        const Operator detuning = xi * ops.identity + delta * (ops.identity + 2.0 * ops.n);
        const Operator coupling = g * theta * ops.a * ops.sigma_plus;
        h = 0.5 * detuning * ops.sigma_z + coupling + Operator(coupling.adjoint());
        break;
    }
    case ResonanceKind::DCE: {
        const double signed_delta = initial_atom == Atom::Ground ? delta : -delta;
        const Operator squeeze = std::conj(theta) * ops.a * ops.a;
        h = (xi - signed_delta) * ops.n - signed_delta * (squeeze + Operator(squeeze.adjoint()));
        break;
    }
    }
    require_hermitian(h, "effective Hamiltonian");
    return h;
}

Operator dce_intermediate_hamiltonian(const ResonanceSpec& spec, const SystemParams& params,
                                      const ModulationProfile& profile, const Space& space)
{
    if (spec.kind != ResonanceKind::DCE)
        throw ConfigError("intermediate DCE Hamiltonian requires a DCE resonance");
    require_atom_target(profile, "intermediate DCE Hamiltonian");
    const Operators ops = build_operators(space);
    const DispersiveQuantities q = dispersive_quantities(params, profile, spec);
    const Complex g = complex_g(params, profile);
    const double dm = deltas(params, profile).minus;

    const Operator coupling = g * ops.a * ops.sigma_plus +
                              g * q.coupling(spec.order) * ops.a_dag * ops.sigma_plus;
    Operator h = spec.xi * ops.n + 0.5 * (dm + spec.xi) * ops.sigma_z + coupling +
                 Operator(coupling.adjoint());
    require_hermitian(h, "intermediate DCE Hamiltonian");
    return h;
}

Operator dce_transformed_hamiltonian(const ResonanceSpec& spec, const SystemParams& params,
                                     const ModulationProfile& profile, const Space& space,
                                     double t, bool include_correction)
{
    if (spec.kind != ResonanceKind::DCE)
        throw ConfigError("transformed DCE Hamiltonian requires a DCE resonance");
    require_atom_target(profile, "transformed DCE Hamiltonian");
    const Operators ops = build_operators(space);
    const DispersiveQuantities q = dispersive_quantities(params, profile, spec);
    const double delta = q.shift(spec.order);
    const Complex theta = q.coupling(spec.order);

    const Operator squeeze = std::conj(theta) * ops.a * ops.a;
    Operator h = (spec.xi * ops.identity + delta * ops.sigma_z) * ops.n +
                 delta * ops.sigma_z * (squeeze + Operator(squeeze.adjoint()));
    if (include_correction) {
        const double dm = delta_minus_checked(params, profile);
        const Complex phase = std::exp(Complex(0.0, dm * t));
        const Operator corr = complex_g(params, profile) * phase * ops.a * ops.n * ops.sigma_plus;
        h -= (2.0 * delta / dm) * (corr + Operator(corr.adjoint()));
    }
    require_hermitian(h, "transformed DCE Hamiltonian");
    return h;
}

double dispersive_parameter(const SystemParams& params, const ModulationProfile& profile,
                            double mean_photons)
{
    const double dm = delta_minus_checked(params, profile);
    return params.g0 * std::sqrt(std::max(0.0, mean_photons)) / std::abs(dm);
}

} // namespace ncqed
