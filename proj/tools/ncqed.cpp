// ncqed: command-line front end for the modulated cavity QED simulator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "ncqed/errors.hpp"
#include "ncqed/harness/config.hpp"
#include "ncqed/harness/csv.hpp"
#include "ncqed/harness/experiment.hpp"
#include "ncqed/harness/sweep.hpp"

using namespace ncqed;
using namespace ncqed::harness;

namespace {

enum ExitCode { Ok = 0, Failure = 1, BadConfig = 2, BadIntegration = 3, BadFit = 4 };

void print_advisories(const std::vector<std::string>& advisories)
{
    for (const auto& a : advisories)
        std::cerr << "advisory: " << a << '\n';
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& fit_column)
{
    ExperimentConfig cfg = load_config(config_path);
    if (!out_path.empty())
        cfg.csv_path = out_path;
    const bool to_stdout = !cfg.csv_path;
    const RunResult result = run(cfg);
    print_advisories(result.advisories);
    if (to_stdout)
        write_csv(result.trajectory, std::cout);
    const Trajectory& tr = result.trajectory;
    std::fprintf(stderr,
                 "eta = %.10g, samples = %zu, steps = %ld accepted / %ld rejected, "
                 "max norm error = %.3g, max <n> = %.6g, max P_e = %.6g\n",
                 result.drive.eta, tr.samples().size(), tr.accepted_steps, tr.rejected_steps,
                 tr.max_norm_error(), tr.max_of("n_mean"), tr.max_of("P_e"));
    if (cfg.csv_path)
        std::fprintf(stderr, "wrote %s\n", cfg.csv_path->string().c_str());
    if (!fit_column.empty()) {
        const OscillationFit fit = fit_oscillation(tr, fit_column);
        std::fprintf(stderr,
                     "fit %s ~ A sin^2(nu t) + B: nu = %.8g, A = %.6g, B = %.6g, rms = %.3g\n",
                     fit_column.c_str(), fit.frequency, fit.amplitude, fit.offset, fit.residual);
    }
    return Ok;
}

int cmd_resonance(const std::string& config_path, int kmax)
{
    const ExperimentConfig cfg = load_config(config_path);
    std::map<ResonanceKind, double> xi;
    if (cfg.resonance)
        xi[cfg.resonance->kind] = cfg.resonance->xi;
    write_resonance_table(resonance_table(cfg.system, cfg.modulation, kmax, xi), std::cout);
    return Ok;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_path, unsigned jobs)
{
    const std::string base = read_text(config_path);
    (void)parse_config(base, config_path); // fail early on a broken base config
    const SweepGrid grid = load_grid(grid_path);
    std::fprintf(stderr, "sweeping %zu points\n", grid.size());
    const SweepResult result = sweep(base, grid, jobs);
    if (grid.output) {
        std::ofstream out(*grid.output);
        if (!out)
            throw ConfigError("cannot write " + grid.output->string());
        result.write_csv(out);
        std::fprintf(stderr, "wrote %s\n", grid.output->string().c_str());
    } else {
        result.write_csv(std::cout);
    }
    std::size_t failed = 0;
    for (const auto& r : result.rows)
        failed += r.status != "ok";
    if (failed)
        std::fprintf(stderr, "%zu of %zu points failed (see status column)\n", failed,
                     result.rows.size());
    return Ok;
}

int cmd_compare(const std::string& config_path, const std::string& kind_text)
{
    const ExperimentConfig cfg = load_config(config_path);
    const ComparisonReport r = compare(cfg, parse_resonance_kind(kind_text));
    print_advisories(r.advisories);
    std::printf("effective: %s\n", to_string(r.kind).c_str());
    std::printf("t_end: %.10g\n", r.t_end);
    std::printf("sup_distance: %.6g\n", r.sup_distance);
    for (const auto& [name, value] : r.rms)
        std::printf("rms_%s: %.6g\n", name.c_str(), value);
    if (r.validity_horizon) {
        std::printf("validity_horizon: %.10g (threshold %.3g)\n", *r.validity_horizon,
                    r.threshold);
        std::printf("n_mean_at_horizon: %.6g\n", *r.n_at_horizon);
        if (r.dispersive_parameter_at_horizon)
            std::printf("dispersive_parameter_at_horizon: %.6g\n",
                        *r.dispersive_parameter_at_horizon);
    } else {
        std::printf("validity_horizon: none (distance stays below %.3g)\n", r.threshold);
    }
    return Ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulate a two-level atom in a cavity under periodic modulation"};
    app.require_subcommand(1);

    std::string config_path, out_path, grid_path, kind, fit_column;
    int kmax = 3;
    unsigned jobs = 0;

    auto* sim = app.add_subcommand("simulate", "integrate one configuration, write a CSV");
    sim->add_option("--config", config_path, "YAML config")->required();
    sim->add_option("--out", out_path, "CSV path (overrides outputs.csv; default stdout)");
    sim->add_option("--fit", fit_column, "also fit A sin^2(nu t) + B to this column");

    auto* res = app.add_subcommand("resonance", "tabulate resonance frequencies and couplings");
    res->add_option("--config", config_path, "YAML config")->required();
    res->add_option("--kmax", kmax, "highest resonance order")->check(CLI::PositiveNumber);

    auto* swp = app.add_subcommand("sweep", "run a parameter grid");
    swp->add_option("--config", config_path, "base YAML config")->required();
    swp->add_option("--grid", grid_path, "YAML grid")->required();
    swp->add_option("--jobs", jobs, "worker threads (default: hardware threads)");

    auto* cmp = app.add_subcommand("compare", "exact vs effective dynamics");
    cmp->add_option("--config", config_path, "YAML config")->required();
    cmp->add_option("--effective", kind, "effective model")
        ->required()
        ->check(CLI::IsMember({"ajc", "jc", "dce"}, CLI::ignore_case));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : BadConfig;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, out_path, fit_column);
        if (res->parsed())
            return cmd_resonance(config_path, kmax);
        if (swp->parsed())
            return cmd_sweep(config_path, grid_path, jobs);
        if (cmp->parsed())
            return cmd_compare(config_path, kind);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return BadConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return BadConfig;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << '\n';
        return BadIntegration;
    } catch (const FitError& e) {
        std::cerr << "fit failure: " << e.what() << '\n';
        return BadFit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Failure;
    }
    return Failure;
}
