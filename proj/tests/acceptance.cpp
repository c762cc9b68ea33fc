// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [AC1 AC5 ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ncqed/analytics.hpp"
#include "ncqed/dynamics.hpp"
#include "ncqed/errors.hpp"
#include "ncqed/harness/config.hpp"
#include "ncqed/harness/experiment.hpp"
#include "ncqed/harness/sweep.hpp"
#include "oracles.hpp"

using namespace ncqed;
using namespace ncqed::harness;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict
{
    bool pass = false;
    std::string detail;
};

// Largest norm drift seen in any exact run of this program (checked by AC7).
double g_norm_drift = 0.0;

Trajectory note(Trajectory tr)
{
    g_norm_drift = std::max(g_norm_drift, tr.max_norm_error());
    return tr;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ExperimentConfig preset(const std::string& name)
{
    auto cfg = load_config(std::string(NCQED_PRESETS) + "/" + name + ".yaml");
    cfg.csv_path.reset();
    return cfg;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Two-level block of the AJC/JC effective models: coupling g0 |theta|,
// level splitting xi + 2 delta (Delta_- > 0).
double two_level_frequency(const ExperimentConfig& cfg)
{
    const auto q = dispersive_quantities(cfg.system, cfg.drive(), *cfg.resonance);
    const double c = cfg.system.g0 * std::abs(q.theta);
    const double d = cfg.resonance->xi + 2.0 * q.delta;
    return std::sqrt(c * c + 0.25 * d * d);
}

Verdict ac1()
{
    SystemParams p;
    p.Omega0 = 1.0;
    p.g0 = 1e-3;
    const auto m = ModulationProfile::pure_sine(0.0, 1.0);
    const Space s(3);
    IntegratorConfig cfg;
    cfg.max_step = 0.1;
    cfg.sample_interval = 5.0;
    const auto tr = note(evolve(interaction_generator(p, m, s),
                                 QuantumState::basis(s, Atom::Excited, 0), pi / p.g0, cfg));
    double worst = 0.0;
    for (const auto& x : tr.samples())
        worst = std::max(worst, std::abs(x.populations.at(Atom::Ground, 1) -
                                         std::pow(std::sin(p.g0 * x.t), 2)));
    return {worst < 1e-2, fmt("vacuum Rabi flop: max |P_g1 - sin^2(g0 t)| = %.2e (< 1e-2)", worst)};
}

Verdict ac2()
{
    const auto cfg = preset("fig1a");
    const auto pred = resonant_ajc_prediction(cfg.system, cfg.modulation, Branch::Minus);
    const auto start = std::chrono::steady_clock::now();
    const auto tr = note(run(cfg).trajectory);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    // leakage outside {|g,0>, |e,1>, |g,2>}
    double leak = 0.0;
    const Space& s = tr.space();
    for (const auto& x : tr.samples())
        for (int m = 0; m <= s.n_max(); ++m)
            for (Atom a : {Atom::Ground, Atom::Excited}) {
                const bool kept = (a == Atom::Ground && (m == 0 || m == 2)) ||
                                  (a == Atom::Excited && m == 1);
                if (!kept)
                    leak = std::max(leak, x.populations.at(a, m));
            }

    double chi_fit = 0.0;
    try {
        chi_fit = fit_oscillation(tr, "P_g_0").frequency;
    } catch (const FitError& e) {
        return {false, std::string("fit failed: ") + e.what()};
    }
    const double chi_err = std::abs(chi_fit / pred.chi - 1.0);
    const double de1 = std::abs(tr.max_of("P_e_1") - pred.max_p_e1());
    const double dg2 = std::abs(tr.max_of("P_g_2") - pred.max_p_g2());
    const bool pass = leak < 1e-2 && chi_err < 0.15 && de1 < 0.08 && dg2 < 0.08 &&
                      seconds < 300.0 && std::abs(cfg.resonance->xi - pred.xi_minus) < 1e-12;
    return {pass, fmt("resonant AJC: leakage %.1e, chi fit %.4e vs %.4e (%.1f%%), "
                      "max P_e1 %.3f vs %.3f, max P_g2 %.3f vs %.3f, %.1f s",
                      leak, chi_fit, pred.chi, 100 * chi_err, tr.max_of("P_e_1"),
                      pred.max_p_e1(), tr.max_of("P_g_2"), pred.max_p_g2(), seconds)};
}

Verdict ac3()
{
    auto cfg = preset("fig1b");
    const double nu = two_level_frequency(cfg);
    cfg.t_end = pi / nu; // one full effective Rabi period
    const auto r = compare(cfg, ResonanceKind::AJC);
    note(r.exact);
    const auto pe = r.exact.series("P_e");
    const auto n = r.exact.series("n_mean");
    const double corr = correlation(pe, n);
    const bool pass = r.sup_distance < 0.1 && corr > 0.95 && r.exact.max_of("P_e") > 0.5;
    return {pass, fmt("AJC dispersive: sup distance %.4f over T = %.0f (< 0.1), "
                      "corr(P_e, <n>) = %.4f, max P_e %.3f",
                      r.sup_distance, cfg.t_end, corr, r.exact.max_of("P_e"))};
}

Verdict ac4()
{
    const auto cfg = preset("fig1c");
    const double nu = two_level_frequency(cfg);
    const auto tr = note(run(cfg).trajectory);
    double fit = 0.0;
    try {
        fit = fit_oscillation(tr, "P_e").frequency;
    } catch (const FitError& e) {
        return {false, std::string("fit failed: ") + e.what()};
    }
    const auto pe = tr.series("P_e");
    const auto n = tr.series("n_mean");
    double closure = 0.0;
    for (std::size_t i = 0; i < pe.size(); ++i)
        closure = std::max(closure, std::abs(pe[i] + n[i] - 1.0));
    const double err = std::abs(fit / nu - 1.0);
    const double n_min = *std::min_element(n.begin(), n.end());
    const bool pass = err < 0.1 && closure < 0.05 && n_min < 0.2;
    return {pass, fmt("JC dispersive: nu fit %.4e vs %.4e (%.1f%%), min <n> %.3f, "
                      "max |P_e + <n> - 1| %.3f",
                      fit, nu, 100 * err, n_min, closure)};
}

Verdict ac5()
{
    const auto cfg = preset("fig2");
    const auto r = compare(cfg, ResonanceKind::DCE);
    const Trajectory tr = note(r.exact);
    const auto drive = cfg.drive();
    const auto t = tr.series("t");
    const auto n = tr.series("n_mean");
    const auto pe = tr.series("P_e");

    // (a) early agreement with sinh^2(2 |delta theta| t) while <n> <= 1
    double worst = 0.0;
    std::size_t first_above_one = n.size();
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] > 1.0) {
            first_above_one = i;
            break;
        }
        const double ref = dce_growth(cfg.system, drive, *cfg.resonance, t[i]);
        if (ref >= 0.01)
            worst = std::max(worst, std::abs(n[i] - ref) / ref);
    }
    const bool early = worst < 0.2;

    // (b) finite validity horizon
    const bool horizon = r.validity_horizon.has_value();

    // (c) growth stalls
    const auto peak = std::max_element(n.begin(), n.end());
    const std::size_t i_peak = std::size_t(peak - n.begin());
    const bool stalls = i_peak + 1 < n.size() && n.back() < 0.95 * *peak;

    // (d) P_e follows <n>
    const double corr = correlation(pe, n);
    const double pe_early = first_above_one < n.size() ? pe[first_above_one] : 1.0;
    const bool follows = corr > 0.9 && *std::max_element(pe.begin(), pe.end()) > 5.0 * pe_early;

    // diagnostic: growth rate implied by <n> = 1 against |delta theta|
    const auto q = dispersive_quantities(cfg.system, drive, *cfg.resonance);
    const double rate = std::abs(q.delta * q.theta);
    double implied = 0.0;
    if (first_above_one < n.size())
        implied = std::asinh(1.0) / (2.0 * t[first_above_one]);
    const double dm = deltas(cfg.system, drive).minus;

    std::fprintf(stderr, "    AC5 detail: early match %s (max rel. error %.3f), horizon %s", early ? "ok" : "no",
                worst, horizon ? fmt("%.0f", *r.validity_horizon).c_str() : "none");
    std::fprintf(stderr, ", stall at t = %.0f with <n> = %.2f, corr(P_e, <n>) = %.3f\n", t[i_peak], *peak,
                corr);
    std::fprintf(stderr, "    AC5 detail: rate implied at <n> = 1: %.3e, |delta theta| = %.3e, ratio %.3f; "
                "eta/(Delta_- + eta) = %.3f\n",
                implied, rate, implied / rate, drive.eta / (dm + drive.eta));
    return {early && horizon && stalls && follows,
            fmt("DCE: sinh^2 law within 20%% while <n> <= 1: %s (%.1f%%); horizon finite: %s; "
                "stall: %s; P_e follows <n>: %s",
                early ? "yes" : "no", 100 * worst, horizon ? "yes" : "no", stalls ? "yes" : "no",
                follows ? "yes" : "no")};
}

std::string dce_base(const std::string& state, int n_max, double t_end)
{
    return fmt(R"(system: {Omega0_over_omega: 1.4, g0_over_omega: 0.02}
modulation: {epsilon_over_omega: 0.4}
resonance: {kind: dce, K: 1, xi_in_delta_units: 1}
space: {n_max: %d}
initial_state: "%s"
t_end: %g
integrator: {sample_interval: 20}
)",
               n_max, state.c_str(), t_end);
}

// Coarse then fine xi scan; returns the xi (delta units) of the largest `column`.
double locate_peak(const std::string& coarse_base, const std::string& fine_base, double from,
                   double to, int coarse_count, double fine_half_width, int fine_count,
                   const std::string& column, const std::string& fit = "none")
{
    auto grid_text = [&](double a, double b, int count) {
        return fmt("axes:\n  resonance.xi_in_delta_units: {from: %.17g, to: %.17g, count: %d}\n"
                   "fit: %s\n",
                   a, b, count, fit.c_str());
    };
    const auto coarse = sweep(coarse_base, parse_grid(grid_text(from, to, coarse_count)), 1);
    const auto i = coarse.argmax(column);
    if (!i)
        throw FitError("coarse scan: no successful point");
    const double centre = std::stod(coarse.rows[*i].point[0]);
    const auto fine = sweep(
        fine_base,
        parse_grid(grid_text(centre - fine_half_width, centre + fine_half_width, fine_count)), 1);
    const auto j = fine.argmax(column);
    if (!j)
        throw FitError("fine scan: no successful point");
    return std::stod(fine.rows[*j].point[0]);
}

Verdict ac6()
{
    const double g_peak = locate_peak(dce_base("g,0", 10, 3000), dce_base("g,0", 10, 6000), -4,
                                      4, 17, 0.5, 11, "max_n_mean");
    const double e_peak = locate_peak(dce_base("e,0", 10, 3000), dce_base("e,0", 10, 6000), -4,
                                      4, 17, 0.5, 11, "max_n_mean");
    const bool pass = std::abs(g_peak - 1.0) <= 0.5 && std::abs(e_peak + 1.0) <= 0.5;
    return {pass, fmt("DCE xi scan: peak at %.2f delta from |g,0> (want 1 +- 0.5), "
                      "%.2f delta from |e,0> (want -1 +- 0.5)",
                      g_peak, e_peak)};
}

Verdict ac7()
{
    std::vector<std::string> failed;
    std::ostringstream info;

    // Hermiticity of every builder on random draws
    {
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        auto rel = [&](const Operator& h) {
            const double scale = h.norm();
            if (scale > 0.0)
                worst = std::max(worst, (h - Operator(h.adjoint())).norm() / scale);
        };
        for (int draw = 0; draw < 40; ++draw) {
            SystemParams p;
            p.Omega0 = 0.6 + 1.2 * u(rng);
            if (std::abs(p.Omega0 - 1.0) < 0.05)
                p.Omega0 += 0.1;
            p.g0 = 0.05 * u(rng);
            ModulationProfile m;
            m.epsilon = 0.4 * u(rng);
            m.s = {u(rng) - 0.5, u(rng) - 0.5};
            m.c = {0.2 * (u(rng) - 0.5), u(rng) - 0.5};
            const Space s(3 + draw % 5);
            const double t = 100.0 * u(rng);
            for (auto kind : {ResonanceKind::AJC, ResonanceKind::JC, ResonanceKind::DCE}) {
                const ResonanceSpec spec{kind, 1 + draw % 3, 1e-3 * (u(rng) - 0.5)};
                const auto tuned = tuned_profile(spec, p, m);
                rel(rabi_hamiltonian(p, tuned, t, s));
                rel(interaction_hamiltonian(p, tuned, t, s));
                for (Atom a : {Atom::Ground, Atom::Excited})
                    rel(effective_hamiltonian(spec, p, tuned, s, a));
                if (kind == ResonanceKind::DCE) {
                    rel(dce_intermediate_hamiltonian(spec, p, tuned, s));
                    rel(dce_transformed_hamiltonian(spec, p, tuned, s, t, true));
                }
                auto coupling = tuned;
                coupling.target = ModulationTarget::Coupling;
                coupling.epsilon *= 0.05;
                rel(coupling_modulated_hamiltonian(p, coupling, t, s));
            }
        }
        info << fmt("hermiticity %.1e", worst);
        if (!(worst < 1e-12))
            failed.push_back("hermiticity");
    }

    // lab vs interaction frame on the resonant AJC parameters
    {
        const auto cfg = preset("fig1a");
        const auto drive = cfg.drive();
        const auto r = frame_populations_equivalence(
            cfg.system, drive, cfg.initial_state.build(Space(6)), 5000.0,
            IntegratorConfig::for_drive(drive.eta));
        info << fmt(", frame distance %.1e", r.sup_distance);
        if (!(r.sup_distance < 1e-6))
            failed.push_back("frame");
    }

    // Xi_pm closed form against quadrature
    {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int draw = 0; draw < 40; ++draw) {
            SystemParams p;
            p.Omega0 = 0.5 + 1.5 * u(rng);
            p.g0 = 0.02;
            ModulationProfile m;
            m.epsilon = 0.5 * u(rng);
            m.eta = 0.2 + 2.8 * u(rng);
            m.s = {u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5};
            m.c = {u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5};
            const double t = 50.0 * u(rng);
            const auto x = phase_xi(p, m, t);
            const oracle::Drive d{p.Omega0, m.epsilon, m.eta, m.s, m.c};
            for (auto [value, sign] : {std::pair{x.plus, 1.0}, std::pair{x.minus, -1.0}}) {
                const double ref = oracle::xi_quadrature(d, sign, t);
                worst = std::max(worst, std::abs(value - ref) / std::max(1.0, std::abs(ref)));
            }
        }
        info << fmt(", Xi vs quadrature %.1e", worst);
        if (!(worst < 1e-9))
            failed.push_back("phase");
    }

    // RK4 order on a two-level flop
    {
        const Space s(4);
        const Operators ops = build_operators(s);
        const Operator k = ops.a * ops.sigma_plus;
        const Operator h = k + Operator(k.adjoint());
        const auto psi0 = QuantumState::basis(s, Atom::Ground, 1);
        const double t_end = 3.0;
        StateVector exact = StateVector::Zero(s.dim());
        exact[s.index(Atom::Ground, 1)] = std::cos(t_end);
        exact[s.index(Atom::Excited, 0)] = Complex(0.0, -std::sin(t_end));
        std::vector<double> lx, ly;
        for (double step : {0.3, 0.15, 0.075, 0.0375}) {
            IntegratorConfig cfg;
            cfg.method = IntegratorMethod::RK4;
            cfg.max_step = step;
            const auto tr = evolve(TimeDependentOperator::constant(h), psi0, t_end, cfg);
            lx.push_back(std::log(step));
            ly.push_back(std::log((tr.final_state - exact).norm()));
        }
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        const double slope = sxy / sxx;
        info << fmt(", RK4 slope %.3f", slope);
        if (!(std::abs(slope - 4.0) <= 0.2))
            failed.push_back("rk4");
    }

    // truncation n_max 15 -> 30 on the DCE run
    {
        auto cfg = preset("fig2");
        const auto drive = cfg.drive();
        auto settings = cfg.integrator_settings();
        std::vector<Trajectory> runs;
        const auto report = truncation_check(
            [&](int n_max) {
                const Space s(n_max);
                runs.push_back(note(evolve(interaction_generator(cfg.system, drive, s),
                                           cfg.initial_state.build(s), cfg.t_end, settings)));
                return runs.back();
            },
            {15, 30});
        const auto a = runs[0].series("n_mean");
        const auto b = runs[1].series("n_mean");
        const auto t = runs[0].series("t");
        std::size_t agree = 0;
        while (agree + 1 < a.size() && std::abs(a[agree + 1] - b[agree + 1]) < 1e-6)
            ++agree;
        info << fmt(", truncation 15->30 max |d<n>| %.2e (agree to 1e-6 until t = %.0f, "
                    "<n> there %.2f)",
                    report.max_difference, t[agree], b[agree]);
        if (!(report.max_difference < 1e-6))
            failed.push_back("truncation");
    }

    // norm drift over every exact run above and in the other criteria
    info << fmt(", max norm drift %.1e", g_norm_drift);
    if (!(g_norm_drift < 1e-8))
        failed.push_back("norm");

    std::string which;
    for (const auto& f : failed)
        which += (which.empty() ? "" : ",") + f;
    return {failed.empty(),
            "properties: " + info.str() + (failed.empty() ? "" : "; failing: " + which)};
}

Verdict ac8()
{
    auto base = [](double t_end) {
        return fmt(R"(system: {Omega0_over_omega: 1.4, g0_over_omega: 0.02}
modulation: {epsilon_over_omega: 0.2, s: [1]}
resonance: {kind: ajc, K: 2, xi_in_delta_units: -2}
space: {n_max: 4}
t_end: %g
integrator: {sample_interval: 20}
)",
                   t_end);
    };
    const double xi = locate_peak(base(6000), base(20000), -4, 0, 17, 0.25, 11, "max_p_e");

    auto cfg = parse_config(override_scalar(base(60000), "resonance.xi_in_delta_units",
                                            fmt("%.17g", xi)));
    const auto tr = note(run(cfg).trajectory);
    OscillationFit fit;
    try {
        fit = fit_oscillation(tr, "P_e");
    } catch (const FitError& e) {
        return {false, std::string("fit failed: ") + e.what()};
    }
    // two-level block: nu^2 = c^2 + (D/2)^2 and A = c^2 / nu^2
    const double coupling = fit.frequency * std::sqrt(std::abs(fit.amplitude));
    const auto drive = cfg.drive();
    const auto q = dispersive_quantities(cfg.system, drive, *cfg.resonance);
    const double predicted = cfg.system.g0 * std::abs(q.theta_K);
    const double closed = cfg.system.g0 * std::pow(drive.epsilon / drive.eta, 2) / 8.0;
    const double ratio = coupling / predicted;
    const bool pass = tr.max_of("P_e") > 0.5 && ratio >= 0.5 && ratio <= 2.0;
    return {pass, fmt("K = 2 AJC: peak at xi = %.2f delta (max P_e %.3f), fitted coupling %.3e "
                      "vs g0|theta_2| = %.3e (closed form %.3e), ratio %.2f",
                      xi, tr.max_of("P_e"), coupling, predicted, closed, ratio)};
}

Verdict ac9()
{
    SystemParams p;
    p.Omega0 = 1.1;
    p.g0 = 0.02;
    p.kappa = 0.0;
    p.gamma = 0.0;
    p.gamma_ph = 0.0;
    const auto m = ModulationProfile::pure_sine(0.1, 1.0);
    const ResonanceSpec dce{ResonanceKind::DCE, 1, 0.0};
    const ResonanceSpec ajc{ResonanceKind::AJC, 1, 0.0};
    const auto b_dce = decoherence_budget(p, tuned_profile(dce, p, m), dce);
    const auto b_ajc = decoherence_budget(p, tuned_profile(ajc, p, m), ajc);
    const double r_dce = b_dce.rate_dce;
    const double r_ajc = b_ajc.rate_ajc;
    const bool pass = r_dce >= 0.5e-4 && r_dce <= 5e-4 && r_ajc >= 0.5e-3 && r_ajc <= 5e-3;
    return {pass, fmt("rate budget: |delta theta| = %.3e (want [0.5, 5]e-4), |g theta| = %.3e "
                      "(want [0.5, 5]e-3; at the DCE drive it is %.3e)",
                      r_dce, r_ajc, b_dce.rate_ajc)};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC8", ac8}, {"AC9", ac9}, {"AC7", ac7}};
    std::set<std::string> selected(argv + 1, argv + argc);

    std::vector<std::pair<std::string, Verdict>> results;
    for (const auto& [name, fn] : criteria) {
        if (!selected.empty() && !selected.contains(name))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::fprintf(stderr, "%s done in %.1f s\n", name.c_str(), s);
        results.emplace_back(name, v);
    }
    // AC7 runs last so that its norm-drift check sees every other run
    std::sort(results.begin(), results.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [name, v] : results)
        std::printf("%s %s  %s\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    const auto failures =
        std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.second.pass; });
    std::printf("%zu of %zu criteria passed\n", results.size() - std::size_t(failures),
                results.size());
    return failures ? 1 : 0;
}
