#include "ncqed/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "ncqed/errors.hpp"
#include "ncqed/harness/csv.hpp"

namespace ncqed::harness {

namespace {

std::vector<std::string> collect_advisories(const ExperimentConfig& config,
                                            const ModulationProfile& drive)
{
    std::vector<std::string> out = drive.advisories(config.system);
    if (config.resonance)
        for (auto& a : resonance_advisories(*config.resonance, drive.eta))
            out.push_back(std::move(a));
    if (drive.target == ModulationTarget::Coupling)
        for (auto& a : coupling_advisories(config.system, drive))
            out.push_back(std::move(a));
    return out;
}

double sample_spacing(const ExperimentConfig& config)
{
    return config.integrator.sample_interval > 0.0 ? config.integrator.sample_interval
                                                   : config.t_end / 1000.0;
}

Atom atom_for(const ExperimentConfig& config, const Space& space, ResonanceKind kind)
{
    const auto atom = config.initial_state.definite_atom(space);
    if (!atom && kind == ResonanceKind::DCE)
        throw ConfigError("the effective DCE Hamiltonian needs the atom in |g> or |e>, not a "
                          "superposition");
    return atom.value_or(Atom::Ground);
}

} // namespace

TimeDependentOperator exact_generator(const ExperimentConfig& config, const Space& space)
{
    const ModulationProfile drive = config.drive();
    if (config.hamiltonian == HamiltonianChoice::ExactLab)
        return rabi_generator(config.system, drive, space);
    if (drive.target == ModulationTarget::Coupling)
        return coupling_modulated_generator(config.system, drive, space);
    return interaction_generator(config.system, drive, space);
}

RunResult run(const ExperimentConfig& config)
{
    config.validate();
    const Space space = config.space();
    const QuantumState psi0 = config.initial_state.build(space);
    const ModulationProfile drive = config.drive();

    RunResult result{Trajectory(space), drive, collect_advisories(config, drive)};
    if (config.hamiltonian == HamiltonianChoice::Effective) {
        const ResonanceSpec& spec = *config.resonance;
        const Operator h = effective_hamiltonian(spec, config.system, drive, space,
                                                 atom_for(config, space, spec.kind));
        const auto times = uniform_times(config.t_end, sample_spacing(config));
        result.trajectory = evolve_static(h, psi0, times);
    } else {
        result.trajectory = evolve(exact_generator(config, space), psi0, config.t_end,
                                   config.integrator_settings());
    }
    if (config.csv_path)
        write_csv(result.trajectory, *config.csv_path);
    return result;
}

ComparisonReport compare(const ExperimentConfig& config, ResonanceKind kind, double threshold)
{
    config.validate();
    if (!config.resonance)
        throw ConfigError("compare needs a resonance block in the config");
    const ResonanceSpec spec{kind, config.resonance->order, config.resonance->xi};
    const Space space = config.space();
    const QuantumState psi0 = config.initial_state.build(space);
    const ModulationProfile drive = config.drive();
    const Operator h_eff =
        effective_hamiltonian(spec, config.system, drive, space, atom_for(config, space, kind));

    ComparisonReport report{.kind = kind,
                            .threshold = threshold,
                            .sup_distance = 0.0,
                            .rms = {},
                            .validity_horizon = {},
                            .n_at_horizon = {},
                            .dispersive_parameter_at_horizon = {},
                            .t_end = config.t_end,
                            .exact = Trajectory(space),
                            .effective = Trajectory(space),
                            .advisories = collect_advisories(config, drive)};
    if (config.resonance->kind != kind)
        report.advisories.push_back("config is tuned to the " +
                                    to_string(config.resonance->kind) +
                                    " resonance but compared against " + to_string(kind));

    ExperimentConfig exact_cfg = config;
    if (exact_cfg.hamiltonian != HamiltonianChoice::ExactLab)
        exact_cfg.hamiltonian = HamiltonianChoice::ExactInteraction;
    IntegratorConfig integ = exact_cfg.integrator_settings();
    integ.sample_interval = sample_spacing(config);
    report.exact = evolve(exact_generator(exact_cfg, space), psi0, config.t_end, integ);
    const auto times = report.exact.times();
    report.effective = evolve_static(h_eff, psi0, times);

    const auto& ex = report.exact.samples();
    const auto& ef = report.effective.samples();
    double sq_n = 0.0, sq_g = 0.0, sq_e = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        const Populations& a = ex[i].populations;
        const Populations& b = ef[i].populations;
        const double d = population_distance(a, b);
        report.sup_distance = std::max(report.sup_distance, d);
        if (!report.validity_horizon && d > threshold) {
            report.validity_horizon = ex[i].t;
            report.n_at_horizon = a.mean_photons;
            if (deltas(config.system, drive).minus != 0.0)
                report.dispersive_parameter_at_horizon =
                    dispersive_parameter(config.system, drive, a.mean_photons);
        }
        sq_n += (a.mean_photons - b.mean_photons) * (a.mean_photons - b.mean_photons);
        sq_g += (a.p_g - b.p_g) * (a.p_g - b.p_g);
        sq_e += (a.p_e - b.p_e) * (a.p_e - b.p_e);
    }
    const double count = static_cast<double>(ex.size());
    report.rms["n_mean"] = std::sqrt(sq_n / count);
    report.rms["P_g"] = std::sqrt(sq_g / count);
    report.rms["P_e"] = std::sqrt(sq_e / count);
    return report;
}

std::vector<ResonanceRow> resonance_table(const SystemParams& params,
                                          const ModulationProfile& profile, int K_max,
                                          const std::map<ResonanceKind, double>& xi)
{
    if (K_max < 1)
        throw ConfigError("K_max must be >= 1");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Deltas d = deltas(params, profile);
    std::vector<ResonanceRow> rows;
    for (int K = 1; K <= K_max; ++K) {
        for (ResonanceKind kind : {ResonanceKind::AJC, ResonanceKind::JC, ResonanceKind::DCE}) {
            if (kind == ResonanceKind::JC && d.minus == 0.0)
                continue;
            ResonanceRow row;
            row.order = K;
            row.kind = kind;
            const auto it = xi.find(kind);
            row.xi = it == xi.end() ? 0.0 : it->second;
            const ResonanceSpec spec{kind, K, row.xi};
            const ModulationProfile tuned = tuned_profile(spec, params, profile);
            row.eta = tuned.eta;
            if (d.minus != 0.0) {
                const DispersiveQuantities q = dispersive_quantities(params, tuned, spec);
                row.theta_K = q.coupling(K);
                row.delta = q.delta;
                row.delta_K = q.shift(K);
            } else {
                // Resonant atom: no dispersive shift, but the modulation coupling exists.
                row.theta_K = 0.0;
                if (tuned.target == ModulationTarget::AtomFrequency)
                    for (int l = 1; l <= K; ++l)
                        row.theta_K += series_harmonic(tuned, l, -K);
                row.delta = nan;
                row.delta_K = nan;
            }
            row.rate = kind == ResonanceKind::DCE ? std::abs(row.delta_K * row.theta_K)
                                                  : params.g0 * std::abs(row.theta_K);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_resonance_table(const std::vector<ResonanceRow>& rows, std::ostream& out)
{
    out << "K,kind,xi,eta,theta_re,theta_im,theta_abs,delta,delta_K,rate\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      r.order, to_string(r.kind).c_str(), r.xi, r.eta, r.theta_K.real(),
                      r.theta_K.imag(), std::abs(r.theta_K), r.delta, r.delta_K, r.rate);
        out << buf;
    }
}

} // namespace ncqed::harness
