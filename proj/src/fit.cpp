#include <algorithm>
#include <cmath>
#include <numbers>

#include "ncqed/dynamics.hpp"
#include "ncqed/errors.hpp"

namespace ncqed {

namespace {

struct LinearFit
{
    double amplitude = 0.0;
    double offset = 0.0;
    double ssr = std::numeric_limits<double>::infinity();
};

// Best A, B for y ~ A sin^2(nu t) + B at fixed nu.
LinearFit solve_linear(std::span<const double> t, std::span<const double> y, double nu)
{
    double su = 0.0, suu = 0.0, suy = 0.0, sy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double s = std::sin(nu * t[i]);
        const double u = s * s;
        su += u;
        suu += u * u;
        suy += u * y[i];
        sy += y[i];
        syy += y[i] * y[i];
    }
    const double n = static_cast<double>(t.size());
    const double det = suu * n - su * su;
    LinearFit fit;
    if (std::abs(det) < 1e-12 * std::max(1.0, suu * n))
        return fit;
    fit.amplitude = (n * suy - su * sy) / det;
    fit.offset = (suu * sy - su * suy) / det;
    fit.ssr = std::max(0.0, syy - fit.amplitude * suy - fit.offset * sy);
    return fit;
}

} // namespace

OscillationFit fit_oscillation(std::span<const double> t, std::span<const double> y,
                               const FitOptions& options)
{
    if (t.size() != y.size() || t.size() < 8)
        throw FitError("fit needs at least 8 matching samples");
    const double span = t.back() - t.front();
    if (!(span > 0.0))
        throw FitError("fit needs a positive time span");

    std::vector<double> gaps;
    gaps.reserve(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i)
        gaps.push_back(t[i] - t[i - 1]);
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<long>(gaps.size() / 2), gaps.end());
    const double typical_gap = gaps[gaps.size() / 2];

    const double pi = std::numbers::pi;
    const double lo = options.min_frequency > 0.0 ? options.min_frequency : pi / (2.0 * span);
    const double hi =
        options.max_frequency > 0.0 ? options.max_frequency : 0.45 * pi / typical_gap;
    if (!(hi > lo))
        throw FitError("empty frequency search window");

    const double grid = pi / (span * std::max(1, options.oversampling));
    double best_nu = lo;
    LinearFit best;
    for (double nu = lo; nu <= hi; nu += grid) {
        const LinearFit fit = solve_linear(t, y, nu);
        if (fit.ssr < best.ssr) {
            best = fit;
            best_nu = nu;
        }
    }

    // Golden-section refinement inside the winning grid cell.
    double a = std::max(lo, best_nu - grid);
    double b = std::min(hi, best_nu + grid);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    LinearFit fc = solve_linear(t, y, c);
    LinearFit fd = solve_linear(t, y, d);
    for (int iter = 0; iter < 80 && (b - a) > 1e-12 * b; ++iter) {
        if (fc.ssr < fd.ssr) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = solve_linear(t, y, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = solve_linear(t, y, d);
        }
    }
    const double nu = 0.5 * (a + b);
    const LinearFit fit = solve_linear(t, y, nu);
    if (fit.ssr < best.ssr) {
        best = fit;
        best_nu = nu;
    }

    OscillationFit out;
    out.frequency = best_nu;
    out.amplitude = best.amplitude;
    out.offset = best.offset;
    out.residual = std::sqrt(best.ssr / static_cast<double>(t.size()));
    if (!(out.residual <= 0.2 * std::abs(out.amplitude)))
        throw FitError("no dominant oscillation: residual " + std::to_string(out.residual) +
                       " vs amplitude " + std::to_string(out.amplitude));
    return out;
}

OscillationFit fit_oscillation(const Trajectory& trajectory, std::string_view observable,
                               const FitOptions& options)
{
    const auto t = trajectory.series("t");
    const auto y = trajectory.series(observable);
    return fit_oscillation(t, y, options);
}

} // namespace ncqed
