#include "ncqed/modulation.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ncqed/errors.hpp"

namespace ncqed {

namespace {

bool finite(double x)
{
    return std::isfinite(x);
}

// Fourier coefficients of a trigonometric polynomial, harmonics -span..span.
struct Harmonics
{
    int span = 0;
    std::vector<Complex> coeffs{Complex(1.0)};

    Complex get(int m) const
    {
        return std::abs(m) > span ? Complex(0.0) : coeffs[static_cast<std::size_t>(m + span)];
    }

    Harmonics times(const Harmonics& other) const
    {
        Harmonics out;
        out.span = span + other.span;
        out.coeffs.assign(static_cast<std::size_t>(2 * out.span + 1), Complex(0.0));
        for (int i = -span; i <= span; ++i)
            for (int j = -other.span; j <= other.span; ++j)
                out.coeffs[static_cast<std::size_t>(i + j + out.span)] += get(i) * other.get(j);
        return out;
    }
};

Harmonics exponent_harmonics(const ModulationProfile& profile)
{
    const int kmax = profile.harmonics();
    const double ratio = profile.epsilon / profile.eta;
    Harmonics x;
    x.span = kmax;
    x.coeffs.assign(static_cast<std::size_t>(2 * kmax + 1), Complex(0.0));
    for (int k = 1; k <= kmax; ++k) {
        const Complex lk = lambda_k(profile, k);
        x.coeffs[static_cast<std::size_t>(-k + kmax)] += ratio * lk;
        x.coeffs[static_cast<std::size_t>(k + kmax)] -= ratio * std::conj(lk);
    }
    return x;
}

} // namespace

void SystemParams::validate() const
{
    if (!(omega > 0.0) || !finite(omega))
        throw ConfigError("omega must be positive");
    if (!(Omega0 > 0.0) || !finite(Omega0))
        throw ConfigError("Omega0 must be positive");
    // g0 == 0 is allowed: the decoupled system is a useful null check.
    if (!(g0 >= 0.0) || !finite(g0))
        throw ConfigError("g0 must be >= 0");
    for (const auto& rate : {kappa, gamma, gamma_ph})
        if (rate && (!(*rate >= 0.0) || !finite(*rate)))
            throw ConfigError("decoherence rates must be non-negative");
}

double ModulationProfile::s_k(int k) const
{
    return k >= 1 && k <= static_cast<int>(s.size()) ? s[static_cast<std::size_t>(k - 1)] : 0.0;
}

double ModulationProfile::c_k(int k) const
{
    return k >= 0 && k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)] : 0.0;
}

int ModulationProfile::harmonics() const
{
    const int from_c = c.empty() ? 0 : static_cast<int>(c.size()) - 1;
    return std::max(static_cast<int>(s.size()), from_c);
}

void ModulationProfile::validate() const
{
    if (!(epsilon >= 0.0) || !finite(epsilon))
        throw ConfigError("epsilon must be >= 0");
    if (!(eta > 0.0) || !finite(eta))
        throw ConfigError("eta must be > 0");
    if (harmonics() > kMaxHarmonics)
        throw ConfigError("at most " + std::to_string(kMaxHarmonics) +
                          " modulation harmonics are supported");
    for (double v : s)
        if (!finite(v))
            throw ConfigError("non-finite s coefficient");
    for (double v : c)
        if (!finite(v))
            throw ConfigError("non-finite c coefficient");
}

std::vector<std::string> ModulationProfile::advisories(const SystemParams& params) const
{
    std::vector<std::string> out;
    if (target == ModulationTarget::AtomFrequency && epsilon / params.Omega0 > 0.5) {
        std::ostringstream msg;
        msg << "modulation amplitude epsilon/Omega0 = " << epsilon / params.Omega0
            << " is not small";
        out.push_back(msg.str());
    }
    return out;
}

ModulationProfile ModulationProfile::pure_sine(double epsilon, double eta)
{
    ModulationProfile p;
    p.epsilon = epsilon;
    p.eta = eta;
    p.s = {1.0};
    p.c = {0.0};
    return p;
}

double evaluate_f(const ModulationProfile& profile, double t)
{
    double f = profile.c_k(0);
    for (int k = 1; k <= profile.harmonics(); ++k) {
        const double phase = k * profile.eta * t;
        f += profile.s_k(k) * std::sin(phase) + profile.c_k(k) * std::cos(phase);
    }
    return f;
}

double atomic_frequency(const SystemParams& params, const ModulationProfile& profile, double t)
{
    if (profile.target != ModulationTarget::AtomFrequency)
        return params.Omega0;
    return params.Omega0 + profile.epsilon * evaluate_f(profile, t);
}

double coupling_strength(const SystemParams& params, const ModulationProfile& profile, double t)
{
    if (profile.target != ModulationTarget::Coupling)
        return params.g0;
    return params.g0 + profile.epsilon * evaluate_f(profile, t);
}

Complex lambda_k(const ModulationProfile& profile, int k)
{
    if (k < 1)
        throw std::invalid_argument("lambda_k requires k >= 1");
    return -Complex(profile.c_k(k), profile.s_k(k)) / (2.0 * k);
}

Deltas deltas(const SystemParams& params, const ModulationProfile& profile)
{
    double center = params.Omega0;
    if (profile.target == ModulationTarget::AtomFrequency)
        center += profile.epsilon * profile.c_k(0);
    return {center + params.omega, center - params.omega};
}

PhasePair phase_xi(const SystemParams& params, const ModulationProfile& profile, double t)
{
    const Deltas d = deltas(params, profile);
    double periodic = 0.0;
    if (profile.target == ModulationTarget::AtomFrequency && profile.epsilon != 0.0) {
        for (int k = 1; k <= profile.harmonics(); ++k) {
            const double phase = k * profile.eta * t;
            periodic += (profile.s_k(k) / k) * (1.0 - std::cos(phase)) +
                        (profile.c_k(k) / k) * std::sin(phase);
        }
        periodic *= profile.epsilon / profile.eta;
    }
    return {d.plus * t + periodic, d.minus * t + periodic};
}

Complex complex_g(const SystemParams& params, const ModulationProfile& profile)
{
    if (profile.target != ModulationTarget::AtomFrequency)
        return params.g0;
    double sum = 0.0;
    for (int k = 1; k <= profile.harmonics(); ++k)
        sum += profile.s_k(k) / k;
    return params.g0 * std::exp(Complex(0.0, profile.epsilon / profile.eta * sum));
}

Complex coefficient_series(const SystemParams& params, const ModulationProfile& profile, Sign sign,
                           int order, double t)
{
    if (order < 0)
        throw std::invalid_argument("series order must be >= 0");
    const Deltas d = deltas(params, profile);
    const double delta = sign == Sign::Plus ? d.plus : d.minus;

    Complex x = 0.0;
    if (profile.target == ModulationTarget::AtomFrequency) {
        const double ratio = profile.epsilon / profile.eta;
        for (int k = 1; k <= profile.harmonics(); ++k) {
            const Complex rot = std::exp(Complex(0.0, -k * profile.eta * t));
            const Complex lk = lambda_k(profile, k);
            x += ratio * (lk * rot - std::conj(lk) * std::conj(rot));
        }
    }

    Complex sum = 0.0;
    Complex term = 1.0;
    for (int l = 0; l <= order; ++l) {
        if (l > 0)
            term *= x / static_cast<double>(l);
        sum += term;
    }
    return complex_g(params, profile) * std::exp(Complex(0.0, delta * t)) * sum;
}

Complex series_harmonic(const ModulationProfile& profile, int l, int m)
{
    if (l < 0)
        throw std::invalid_argument("series power must be >= 0");
    const Harmonics x = exponent_harmonics(profile);
    Harmonics power;
    double factorial = 1.0;
    for (int i = 1; i <= l; ++i) {
        power = power.times(x);
        factorial *= i;
    }
    return power.get(m) / factorial;
}

} // namespace ncqed
