#include "ncqed/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "ncqed/errors.hpp"

namespace ncqed {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<Complex>;

struct Schrodinger
{
    const TimeDependentOperator& h;

    void operator()(const State& x, State& dxdt, double t) const
    {
        h.apply(t, x, dxdt);
        for (auto& v : dxdt)
            v = Complex(v.imag(), -v.real()); // -i * v
    }
};

class Recorder
{
public:
    Recorder(Trajectory& out, const Space& space) : m_out(out), m_space(space) {}

    void record(double t, const State& x)
    {
        Eigen::Map<const StateVector> v(x.data(), static_cast<Eigen::Index>(x.size()));
        Sample s;
        s.t = t;
        s.populations = populations(m_space, v);
        s.norm_error = std::abs(v.squaredNorm() - 1.0);
        m_out.samples().push_back(std::move(s));
    }

private:
    Trajectory& m_out;
    const Space& m_space;
};

// Sampling schedule: either every `stride` accepted steps or fixed target times.
class Schedule
{
public:
    Schedule(const IntegratorConfig& cfg, double t_end) : m_cfg(cfg), m_t_end(t_end) {}

    double next_target() const
    {
        if (m_cfg.sample_interval <= 0.0)
            return m_t_end;
        return std::min(m_t_end, m_cfg.sample_interval * static_cast<double>(m_next_index));
    }

    // Called after each accepted step; returns true when a sample is due.
    bool due(double t)
    {
        if (t >= m_t_end)
            return true;
        if (m_cfg.sample_interval > 0.0) {
            if (t >= m_cfg.sample_interval * static_cast<double>(m_next_index)) {
                ++m_next_index;
                return true;
            }
            return false;
        }
        return ++m_count % m_cfg.sample_stride == 0;
    }

private:
    const IntegratorConfig& m_cfg;
    double m_t_end;
    long m_next_index = 1;
    long m_count = 0;
};

void check_initial_state(const QuantumState& psi0)
{
    const Space& space = psi0.space();
    const double tail = populations(psi0).tail(space.n_max() - 2);
    if (tail > 1e-12)
        throw ConfigError("initial state populates photon numbers >= n_max - 2; increase n_max");
}

bool finite(const State& x)
{
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

// Snap t onto `target` when roundoff leaves it a hair short.
double snap(double t, double target)
{
    return std::abs(t - target) <= 1e-12 * std::max(1.0, std::abs(target)) ? target : t;
}

template <class Controlled>
void run_adaptive(Controlled stepper, const Schrodinger& system, State& x, double t_end,
                  const IntegratorConfig& cfg, Trajectory& out, Recorder& recorder)
{
    Schedule schedule(cfg, t_end);
    double t = 0.0;
    double dt = cfg.max_step > 0.0 ? cfg.max_step : std::min(0.1, t_end);
    dt = std::min(dt, 1e-2 * std::max(t_end, 1e-300));
    const double dt_floor = 1e-13 * std::max(1.0, t_end);
    State backup;

    while (t < t_end) {
        const double target = schedule.next_target();
        const bool clipped = dt >= target - t;
        double h = clipped ? target - t : dt;
        const double t_before = t;
        backup = x;
        auto result = stepper.try_step(system, x, t, h);
        if (result == odeint::success && !finite(x)) {
            // NaN/inf slips past the error estimate; treat it as a rejection
            x = backup;
            h = 0.5 * (t - t_before);
            result = odeint::fail;
        }
        if (result == odeint::success) {
            ++out.accepted_steps;
            if (clipped) {
                t = target;
            } else {
                t = snap(t, target);
                dt = h;
            }
            if (schedule.due(t))
                recorder.record(t, x);
        } else {
            ++out.rejected_steps;
            t = t_before;
            dt = h;
            if (dt < dt_floor)
                throw IntegrationError("step size underflow", t);
        }
    }
}

void run_rk4(const Schrodinger& system, State& x, double t_end, const IntegratorConfig& cfg,
             Trajectory& out, Recorder& recorder)
{
    odeint::runge_kutta4<State, double, State, double> stepper;
    Schedule schedule(cfg, t_end);
    double t = 0.0;
    while (t < t_end) {
        const double target = schedule.next_target();
        double step = cfg.max_step;
        if (t + step >= target - 1e-12 * std::max(1.0, target))
            step = target - t;
        stepper.do_step(system, x, t, step);
        if (!finite(x))
            throw IntegrationError("state became non-finite", t);
        t = step == target - t ? target : t + step;
        ++out.accepted_steps;
        if (schedule.due(t))
            recorder.record(t, x);
    }
}

} // namespace

std::string to_string(IntegratorMethod method)
{
    switch (method) {
    case IntegratorMethod::RK4: return "rk4";
    case IntegratorMethod::DormandPrince54: return "dopri5";
    case IntegratorMethod::Fehlberg78: return "rkf78";
    }
    return "?";
}

IntegratorMethod parse_integrator_method(const std::string& text)
{
    if (text == "rk4")
        return IntegratorMethod::RK4;
    if (text == "dopri5")
        return IntegratorMethod::DormandPrince54;
    if (text == "rkf78")
        return IntegratorMethod::Fehlberg78;
    throw ConfigError("unknown integrator method '" + text + "' (expected rk4, dopri5, rkf78)");
}

void IntegratorConfig::validate() const
{
    if (method == IntegratorMethod::RK4) {
        if (!(max_step > 0.0))
            throw ConfigError("rk4 needs a positive max_step (the fixed step)");
    } else {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-4))
            throw ConfigError("rel_tol must lie in (0, 1e-4]");
        if (!(abs_tol > 0.0 && abs_tol <= 1e-4))
            throw ConfigError("abs_tol must lie in (0, 1e-4]");
        if (max_step < 0.0)
            throw ConfigError("max_step must be >= 0");
    }
    if (sample_stride < 1)
        throw ConfigError("sample_stride must be >= 1");
    if (sample_interval < 0.0)
        throw ConfigError("sample_interval must be >= 0");
}

IntegratorConfig IntegratorConfig::for_drive(double eta)
{
    IntegratorConfig cfg;
    cfg.max_step = 2.0 * std::numbers::pi / (50.0 * eta);
    return cfg;
}

std::vector<double> Trajectory::times() const
{
    std::vector<double> out;
    out.reserve(m_samples.size());
    for (const auto& s : m_samples)
        out.push_back(s.t);
    return out;
}

std::vector<double> Trajectory::series(std::string_view name) const
{
    std::vector<double> out;
    out.reserve(m_samples.size());
    auto column = [&](auto getter) {
        for (const auto& s : m_samples)
            out.push_back(getter(s));
        return out;
    };
    if (name == "t")
        return column([](const Sample& s) { return s.t; });
    if (name == "norm_error")
        return column([](const Sample& s) { return s.norm_error; });
    if (name == "n_mean")
        return column([](const Sample& s) { return s.populations.mean_photons; });
    if (name == "P_g")
        return column([](const Sample& s) { return s.populations.p_g; });
    if (name == "P_e")
        return column([](const Sample& s) { return s.populations.p_e; });
    if (name.size() > 4 && name[0] == 'P' && name[1] == '_' && name[3] == '_' &&
        (name[2] == 'g' || name[2] == 'e')) {
        int m = -1;
        const auto digits = name.substr(4);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && m >= 0 &&
            m <= m_space.n_max()) {
            const Atom atom = name[2] == 'g' ? Atom::Ground : Atom::Excited;
            return column([&](const Sample& s) { return s.populations.at(atom, m); });
        }
    }
    throw std::invalid_argument("unknown trajectory column '" + std::string(name) + "'");
}

double Trajectory::max_norm_error() const
{
    double worst = 0.0;
    for (const auto& s : m_samples)
        worst = std::max(worst, s.norm_error);
    return worst;
}

double Trajectory::max_of(std::string_view name) const
{
    const auto values = series(name);
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::vector<std::string> column_names(const Space& space)
{
    std::vector<std::string> names{"t", "norm_error", "n_mean", "P_g", "P_e"};
    for (char atom : {'g', 'e'})
        for (int m = 0; m <= space.n_max(); ++m)
            names.push_back(std::string("P_") + atom + "_" + std::to_string(m));
    return names;
}

Trajectory evolve(const TimeDependentOperator& hamiltonian, const QuantumState& psi0, double t_end,
                  const IntegratorConfig& config)
{
    config.validate();
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw ConfigError("t_end must be finite and >= 0");
    if (hamiltonian.dim() != psi0.space().dim())
        throw std::invalid_argument("Hamiltonian/state dimension mismatch");
    check_initial_state(psi0);

    Trajectory out(psi0.space());
    Recorder recorder(out, psi0.space());
    State x(psi0.amplitudes().data(), psi0.amplitudes().data() + psi0.amplitudes().size());
    recorder.record(0.0, x);

    const Schrodinger system{hamiltonian};
    if (t_end > 0.0) {
        switch (config.method) {
        case IntegratorMethod::RK4:
            run_rk4(system, x, t_end, config, out, recorder);
            break;
        case IntegratorMethod::DormandPrince54: {
            using Stepper = odeint::runge_kutta_dopri5<State, double, State, double>;
            using Checker = odeint::default_error_checker<double, odeint::range_algebra,
                                                          odeint::default_operations>;
            using Adjuster = odeint::default_step_adjuster<double, double>;
            odeint::controlled_runge_kutta<Stepper, Checker, Adjuster> stepper(
                Checker(config.abs_tol, config.rel_tol), Adjuster(config.max_step));
            run_adaptive(stepper, system, x, t_end, config, out, recorder);
            break;
        }
        case IntegratorMethod::Fehlberg78: {
            using Stepper = odeint::runge_kutta_fehlberg78<State, double, State, double>;
            using Checker = odeint::default_error_checker<double, odeint::range_algebra,
                                                          odeint::default_operations>;
            using Adjuster = odeint::default_step_adjuster<double, double>;
            odeint::controlled_runge_kutta<Stepper, Checker, Adjuster> stepper(
                Checker(config.abs_tol, config.rel_tol), Adjuster(config.max_step));
            run_adaptive(stepper, system, x, t_end, config, out, recorder);
            break;
        }
        }
    }
    out.final_state = Eigen::Map<const StateVector>(x.data(), static_cast<Eigen::Index>(x.size()));
    return out;
}

Trajectory evolve_static(const Operator& hamiltonian, const QuantumState& psi0,
                         std::span<const double> times)
{
    if (hamiltonian.rows() != psi0.space().dim())
        throw std::invalid_argument("Hamiltonian/state dimension mismatch");
    require_hermitian(hamiltonian, "static Hamiltonian");
    const Eigen::SelfAdjointEigenSolver<Operator> solver(hamiltonian);
    const Operator& vectors = solver.eigenvectors();
    const StateVector coeffs = vectors.adjoint() * psi0.amplitudes();
    const Eigen::VectorXd& energies = solver.eigenvalues();

    Trajectory out(psi0.space());
    StateVector psi = psi0.amplitudes();
    for (double t : times) {
        StateVector rotated(coeffs.size());
        for (Eigen::Index i = 0; i < coeffs.size(); ++i)
            rotated(i) = coeffs(i) * std::exp(Complex(0.0, -energies(i) * t));
        psi = vectors * rotated;
        Sample s;
        s.t = t;
        s.populations = populations(psi0.space(), psi);
        s.norm_error = std::abs(psi.squaredNorm() - 1.0);
        out.samples().push_back(std::move(s));
    }
    out.final_state = psi;
    return out;
}

std::vector<double> uniform_times(double t_end, double dt)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("sample spacing must be positive");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor(t_end / dt + 1e-9));
    for (long k = 0; k <= count; ++k)
        out.push_back(dt * static_cast<double>(k));
    if (out.back() < t_end)
        out.push_back(t_end);
    return out;
}

FrameReport frame_populations_equivalence(const SystemParams& params,
                                          const ModulationProfile& profile,
                                          const QuantumState& psi0, double t_end,
                                          IntegratorConfig config)
{
    if (config.sample_interval <= 0.0)
        config.sample_interval = t_end / 1000.0;
    const Space& space = psi0.space();
    const Trajectory lab = evolve(rabi_generator(params, profile, space), psi0, t_end, config);
    const Trajectory rot =
        evolve(interaction_generator(params, profile, space), psi0, t_end, config);

    FrameReport report;
    const auto n = std::min(lab.samples().size(), rot.samples().size());
    for (std::size_t i = 0; i < n; ++i)
        report.sup_distance = std::max(report.sup_distance,
                                       population_distance(lab.samples()[i].populations,
                                                           rot.samples()[i].populations));
    report.threshold = std::max(10.0 * config.rel_tol, 1e-6);
    report.passed = lab.samples().size() == rot.samples().size() &&
                    report.sup_distance < report.threshold;
    return report;
}

TruncationReport truncation_check(const std::function<Trajectory(int n_max)>& run,
                                  const std::vector<int>& n_list)
{
    if (n_list.size() < 2)
        throw ConfigError("truncation check needs at least two n_max values");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw ConfigError("truncation n_list must be increasing");

    TruncationReport report;
    report.n_list = n_list;
    std::vector<Trajectory> runs;
    for (int n_max : n_list) {
        runs.push_back(run(n_max));
        double tail = 0.0;
        for (const auto& s : runs.back().samples())
            tail = std::max(tail, s.populations.tail(n_max - 2));
        report.tail.push_back(tail);
    }
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        const auto& lo = runs[i].samples();
        const auto& hi = runs[i + 1].samples();
        if (lo.size() != hi.size())
            throw std::logic_error("truncation runs are not sampled on the same grid");
        double diff = 0.0;
        for (std::size_t k = 0; k < lo.size(); ++k) {
            if (std::abs(lo[k].t - hi[k].t) > 1e-9 * std::max(1.0, hi[k].t))
                throw std::logic_error("truncation runs are not sampled on the same grid");
            diff = std::max(diff, std::abs(lo[k].populations.mean_photons -
                                           hi[k].populations.mean_photons));
        }
        report.mean_photon_difference.push_back(diff);
        report.max_difference = std::max(report.max_difference, diff);
    }
    report.converged = std::all_of(report.tail.begin(), report.tail.end(),
                                   [](double tail) { return tail <= 1e-6; });
    return report;
}

} // namespace ncqed
