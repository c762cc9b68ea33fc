#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ncqed/analytics.hpp"
#include "ncqed/errors.hpp"

using namespace ncqed;

namespace {

constexpr double pi = std::numbers::pi;

SystemParams params(double Omega0, double g0)
{
    SystemParams p;
    p.Omega0 = Omega0;
    p.g0 = g0;
    return p;
}

} // namespace

TEST_CASE("resonant AJC prediction at zero detuning")
{
    const auto p = params(1.0, 0.04);
    const auto m = ModulationProfile::pure_sine(0.1, 1.0);
    const auto minus = resonant_ajc_prediction(p, m, Branch::Minus);
    const auto plus = resonant_ajc_prediction(p, m, Branch::Plus);
    CHECK(minus.y == doctest::Approx(pi / 4.0));
    CHECK(minus.q == 0.0);
    CHECK(plus.q == doctest::Approx(pi / 2.0));
    CHECK(minus.max_p_e1() == doctest::Approx(0.5));
    CHECK(plus.max_p_e1() == doctest::Approx(0.5));
    CHECK(minus.xi_plus == doctest::Approx(-minus.xi_minus));
    // branch symmetry: P_e1 and P_g2 trade sin^2 y and cos^2 y
    CHECK(std::abs(minus.max_p_e1() - plus.max_p_g2()) < 1e-15);
    CHECK(std::abs(minus.max_p_g2() - plus.max_p_e1()) < 1e-15);
}

TEST_CASE("resonant AJC prediction at Delta_- = g0 / 10")
{
    const double g0 = 0.04;
    const auto p = params(1.0 + g0 / 10.0, g0);
    const auto m = ModulationProfile::pure_sine(0.1, 1.0);
    const auto pr = resonant_ajc_prediction(p, m, Branch::Minus);
    CHECK(pr.xi_minus == doctest::Approx(-0.05457).epsilon(1e-4));
    CHECK(pr.xi == pr.xi_minus);
    CHECK(pr.y == doctest::Approx(0.8031).epsilon(1e-4));
    CHECK(pr.eta == doctest::Approx(2.004 + 0.05457).epsilon(1e-4));
    CHECK(pr.theta_abs == doctest::Approx(0.1 / (2.0 * pr.eta)));
    CHECK(pr.chi == doctest::Approx(6.99e-4).epsilon(2e-3));
    CHECK(pr.p_g0(0.0) == 1.0);
    CHECK(pr.p_g0(pi / (2.0 * pr.chi)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(resonant_regime_advisories(p, m).empty());
    CHECK(resonant_regime_advisories(params(1.02, 0.04), m).size() == 1);
}

TEST_CASE("resonant AJC closure")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    std::uniform_real_distribution<double> ut(0.0, 5e4);
    const double g0 = 0.03;
    const auto m = ModulationProfile::pure_sine(0.1, 1.0);
    for (int draw = 0; draw < 40; ++draw) {
        const double dm = u(rng) * 2.0 * std::numbers::sqrt2 * g0;
        const auto p = params(1.0 + dm, g0);
        for (auto branch : {Branch::Minus, Branch::Plus}) {
            const auto pr = resonant_ajc_prediction(p, m, branch);
            CHECK(pr.y > 0.0);
            CHECK(pr.y < pi / 2.0);
            const double t = ut(rng);
            const double sum = pr.p_g0(t) + pr.p_e1(t) + pr.p_g2(t);
            CHECK(std::abs(sum - 1.0) < 1e-12);
            for (double v : {pr.p_g0(t), pr.p_e1(t), pr.p_g2(t)}) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0 + 1e-15);
            }
        }
    }
}

TEST_CASE("resonant AJC prediction outside the resonant regime")
{
    const double g0 = 0.02;
    const auto m = ModulationProfile::pure_sine(0.1, 1.0);
    CHECK_THROWS_AS(resonant_ajc_prediction(params(1.0 + 2.0 * std::numbers::sqrt2 * g0, g0), m,
                                            Branch::Minus),
                    DomainError);
    CHECK_THROWS_AS(resonant_ajc_prediction(params(1.4, g0), m, Branch::Plus), DomainError);
}

TEST_CASE("DCE growth law")
{
    const auto p = params(1.4, 0.02);
    const ResonanceSpec spec{ResonanceKind::DCE, 1, 1e-3};
    const auto m = tuned_profile(spec, p, ModulationProfile::pure_sine(0.4, 1.0));
    CHECK(dce_growth(p, m, spec, 0.0) == 0.0);
    CHECK(dce_growth(p, m, spec, 5000.0) == doctest::Approx(std::pow(std::sinh(1.001), 2))
                                                 .epsilon(1e-3));
    CHECK(dce_growth(p, m, spec, 5000.0) == doctest::Approx(1.39).epsilon(5e-3));

    double prev = 0.0, prev_slope = 0.0;
    for (int i = 1; i <= 200; ++i) {
        const double t = 100.0 * i;
        const double v = dce_growth(p, m, spec, t);
        const double slope = (v - prev) / 100.0;
        CHECK(v > prev);
        CHECK(slope >= prev_slope);
        prev = v;
        prev_slope = slope;
    }

    auto idle = m;
    idle.epsilon = 0.0;
    CHECK(dce_growth(p, idle, spec, 1e4) == 0.0);
    CHECK_THROWS_AS(dce_growth(p, m, ResonanceSpec{ResonanceKind::AJC, 1, 0.0}, 1.0),
                    ConfigError);
}

TEST_CASE("pulled cavity frequency")
{
    const auto p = params(1.4, 0.02);
    const double delta = 1e-3;

    auto idle = ModulationProfile::pure_sine(0.0, 1.998);
    for (double t : {0.0, 3.0, 100.0}) {
        CHECK(pulled_frequency(p, idle, t, 1).expanded == doctest::Approx(1.0 + delta));
        CHECK(pulled_frequency(p, idle, t, -1).expanded == doctest::Approx(1.0 - delta));
    }

    const auto m = ModulationProfile::pure_sine(0.4, 1.998);
    const double t_peak = pi / (2.0 * m.eta); // f_t = 1
    const auto pf = pulled_frequency(p, m, t_peak, -1);
    CHECK(pf.expanded == doctest::Approx(1.0).epsilon(1e-12));
    // the denominator Delta_- + eps f_t = 0.8 stays away from zero here
    CHECK_FALSE(pf.singular);
    CHECK(pf.unexpanded == doctest::Approx(1.0 - 0.0004 / 0.8));

    SUBCASE("expanded and unexpanded forms agree to second order")
    {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> uom(0.5, 1.5);
        std::uniform_real_distribution<double> ur(0.0, 0.3);
        std::uniform_real_distribution<double> ut(0.0, 100.0);
        for (int draw = 0; draw < 100; ++draw) {
            double Omega0 = uom(rng);
            if (std::abs(Omega0 - 1.0) < 0.05)
                Omega0 += 0.1;
            const auto q = params(Omega0, 0.02);
            const double dm = Omega0 - 1.0;
            const double ratio = ur(rng);
            const auto prof = ModulationProfile::pure_sine(ratio * std::abs(dm), 1.3);
            const double t = ut(rng);
            for (int s : {1, -1}) {
                const auto r = pulled_frequency(q, prof, t, s);
                CHECK_FALSE(r.singular);
                CHECK(std::abs(r.expanded - r.unexpanded) / r.unexpanded < ratio * ratio + 1e-16);
                // same bound on the shift itself, up to the 1/(1 - ratio) resummation
                const double shift = r.unexpanded - 1.0;
                CHECK(std::abs(r.expanded - r.unexpanded) <=
                      std::abs(shift) * ratio * ratio / (1.0 - ratio) * (1.0 + 1e-9) + 1e-18);
            }
        }
    }

    SUBCASE("singularity flag")
    {
        const auto near = params(1.1, 0.02);
        const auto strong = ModulationProfile::pure_sine(0.2, 1.0);
        // Delta_- + eps f_t = 0.1 - 0.2 < 0 at f_t = -1
        const auto r = pulled_frequency(near, strong, 3.0 * pi / 2.0, 1);
        CHECK(r.singular);
        CHECK(std::isnan(r.unexpanded));
        CHECK(std::isfinite(r.expanded));
    }

    CHECK_THROWS_AS(pulled_frequency(p, m, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(pulled_frequency(params(1.0, 0.02), m, 0.0, 1), DomainError);
}

TEST_CASE("decoherence budget")
{
    SUBCASE("reference point")
    {
        auto p = params(1.1, 0.02);
        p.kappa = 1e-5;
        p.gamma = 1e-4;
        p.gamma_ph = 1e-4;
        const ResonanceSpec dce{ResonanceKind::DCE, 1, 0.0};
        const auto m = tuned_profile(dce, p, ModulationProfile::pure_sine(0.1, 1.0));
        const auto b = decoherence_budget(p, m, dce);
        // |delta theta| ~ 1e-4 and |g theta| ~ 1e-3 (order of magnitude)
        CHECK(b.rate_dce > 1e-4 / 3.0);
        CHECK(b.rate_dce < 1e-4 * 3.0);
        CHECK(b.rate_dce == doctest::Approx(0.004 * 0.1 / (2.0 * m.eta)));
        const ResonanceSpec ajc{ResonanceKind::AJC, 1, 0.0};
        const auto ma = tuned_profile(ajc, p, ModulationProfile::pure_sine(0.1, 1.0));
        const auto ba = decoherence_budget(p, ma, ajc);
        CHECK(ba.rate_ajc > 1e-3 / 3.0);
        CHECK(ba.rate_ajc < 1e-3 * 3.0);
        CHECK(b.worst_loss == 1e-4);
        CHECK(b.dce_ratio == doctest::Approx(b.rate_dce / 1e-4));
        CHECK(b.verdict == "feasible");
        p.gamma = 1e-2;
        CHECK(decoherence_budget(p, m, dce).verdict == "infeasible");
    }
    SUBCASE("no drive")
    {
        auto p = params(1.1, 0.02);
        p.kappa = p.gamma = p.gamma_ph = 1e-6;
        const ResonanceSpec dce{ResonanceKind::DCE, 1, 0.0};
        auto m = tuned_profile(dce, p, ModulationProfile::pure_sine(0.0, 1.0));
        const auto b = decoherence_budget(p, m, dce);
        CHECK(b.rate_dce == 0.0);
        CHECK(b.rate_ajc == 0.0);
        CHECK(b.verdict == "infeasible");
    }
    SUBCASE("lossless")
    {
        auto p = params(1.1, 0.02);
        p.kappa = p.gamma = p.gamma_ph = 0.0;
        const ResonanceSpec dce{ResonanceKind::DCE, 1, 0.0};
        auto m = tuned_profile(dce, p, ModulationProfile::pure_sine(0.05, 1.0));
        const auto b = decoherence_budget(p, m, dce);
        CHECK(std::isinf(b.dce_ratio));
        CHECK(b.verdict == "feasible");
    }
    SUBCASE("missing rates")
    {
        auto p = params(1.1, 0.02);
        p.kappa = 1e-5;
        const ResonanceSpec dce{ResonanceKind::DCE, 1, 0.0};
        const auto m = ModulationProfile::pure_sine(0.1, 2.0);
        CHECK_THROWS_AS(decoherence_budget(p, m, dce), ConfigError);
    }
}
