#include "ncqed/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "ncqed/errors.hpp"
#include "ncqed/harness/config.hpp"
#include "ncqed/harness/experiment.hpp"

namespace ncqed::harness {

namespace {

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

[[noreturn]] void grid_fail(const std::string& source, const YAML::Node& node,
                            const std::string& what)
{
    std::ostringstream msg;
    msg << source;
    if (node.IsDefined() && node.Mark().line >= 0)
        msg << ':' << node.Mark().line + 1;
    msg << ": " << what;
    throw ConfigError(msg.str());
}

std::vector<std::string> axis_values(const std::string& source, const YAML::Node& node)
{
    std::vector<std::string> out;
    if (node.IsSequence()) {
        for (const auto& item : node) {
            if (!item.IsScalar())
                grid_fail(source, item, "axis values must be scalars");
            out.push_back(item.Scalar());
        }
    } else if (node.IsMap()) {
        for (const auto& kv : node) {
            const auto k = kv.first.as<std::string>();
            if (k != "from" && k != "to" && k != "count")
                grid_fail(source, kv.first, "unknown range key '" + k + "'");
        }
        if (!node["from"] || !node["to"] || !node["count"])
            grid_fail(source, node, "a range needs from, to and count");
        double from = 0.0, to = 0.0;
        int count = 0;
        try {
            from = node["from"].as<double>();
            to = node["to"].as<double>();
            count = node["count"].as<int>();
        } catch (const YAML::Exception&) {
            grid_fail(source, node, "range bounds must be numbers and count an integer");
        }
        if (count < 1)
            grid_fail(source, node["count"], "count must be >= 1");
        for (int i = 0; i < count; ++i) {
            const double v = count == 1 ? from : from + (to - from) * i / (count - 1);
            out.push_back(format_number(v));
        }
    } else if (node.IsScalar()) {
        out.push_back(node.Scalar());
    } else {
        grid_fail(source, node, "axis must be a list, a range or a scalar");
    }
    if (out.empty())
        grid_fail(source, node, "axis has no values");
    return out;
}

SweepRow run_point(const std::string& base, const SweepGrid& grid, std::size_t index)
{
    SweepRow row;
    row.index = index;
    row.point = grid.point(index);
    try {
        std::string text = base;
        for (std::size_t a = 0; a < grid.axes.size(); ++a)
            text = override_scalar(text, grid.axes[a].key, row.point[a]);
        ExperimentConfig cfg = parse_config(text, "grid point " + std::to_string(index));
        cfg.csv_path.reset();
        const RunResult result = run(cfg);
        const Trajectory& tr = result.trajectory;
        row.max_n_mean = tr.max_of("n_mean");
        row.max_p_e = tr.max_of("P_e");
        row.final_n_mean = tr.samples().back().populations.mean_photons;
        row.final_p_e = tr.samples().back().populations.p_e;
        if (grid.fit != "none") {
            try {
                row.fit_frequency = fit_oscillation(tr, grid.fit).frequency;
            } catch (const FitError&) {
                // No dominant oscillation at this point; leave the column empty.
            }
        }
    } catch (const ConfigError& e) {
        row.status = "config_error";
        row.message = e.what();
    } catch (const IntegrationError& e) {
        row.status = "integration_error";
        row.message = e.what();
    } catch (const DomainError& e) {
        row.status = "domain_error";
        row.message = e.what();
    } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
    }
    return row;
}

} // namespace

std::size_t SweepGrid::size() const
{
    if (axes.empty())
        return 0;
    std::size_t n = 1;
    for (const auto& a : axes)
        n *= a.values.size();
    return n;
}

std::vector<std::string> SweepGrid::point(std::size_t index) const
{
    std::vector<std::string> out(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        const std::size_t n = axes[a].values.size();
        out[a] = axes[a].values[index % n];
        index /= n;
    }
    return out;
}

SweepGrid parse_grid(const std::string& text, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap())
        throw ConfigError(source + ": grid must be a mapping");
    for (const auto& kv : root) {
        const auto k = kv.first.as<std::string>();
        if (k != "axes" && k != "max_runs" && k != "fit" && k != "output")
            grid_fail(source, kv.first,
                      "unknown key '" + k + "' (expected axes, max_runs, fit, output)");
    }
    if (!root["axes"] || !root["axes"].IsMap() || root["axes"].size() == 0)
        grid_fail(source, root, "grid needs a non-empty 'axes' mapping");

    SweepGrid grid;
    for (const auto& kv : root["axes"])
        grid.axes.push_back({kv.first.as<std::string>(), axis_values(source, kv.second)});
    try {
        if (root["max_runs"])
            grid.max_runs = root["max_runs"].as<std::size_t>();
        if (root["fit"])
            grid.fit = root["fit"].as<std::string>();
        if (root["output"])
            grid.output = root["output"].as<std::string>();
    } catch (const YAML::Exception& e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (grid.size() > grid.max_runs)
        grid_fail(source, root["axes"],
                  "grid has " + std::to_string(grid.size()) + " points, above max_runs = " +
                      std::to_string(grid.max_runs));
    return grid;
}

SweepGrid load_grid(const std::filesystem::path& path)
{
    return parse_grid(read_text(path), path.string());
}

void SweepResult::write_csv(std::ostream& out) const
{
    out << "index";
    for (const auto& k : keys)
        out << ',' << csv_field(k);
    out << ",status,max_n_mean,max_P_e,final_n_mean,final_P_e,fit_frequency,message\n";
    for (const auto& r : rows) {
        out << r.index;
        for (const auto& v : r.point)
            out << ',' << csv_field(v);
        out << ',' << r.status;
        if (r.status == "ok") {
            out << ',' << format_number(r.max_n_mean) << ',' << format_number(r.max_p_e) << ','
                << format_number(r.final_n_mean) << ',' << format_number(r.final_p_e) << ','
                << (r.fit_frequency ? format_number(*r.fit_frequency) : "");
        } else {
            out << ",,,,,";
        }
        out << ',' << csv_field(r.message) << '\n';
    }
}

std::optional<std::size_t> SweepResult::argmax(const std::string& column) const
{
    if (column != "max_n_mean" && column != "max_p_e")
        throw std::invalid_argument("argmax supports max_n_mean and max_p_e");
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status != "ok")
            continue;
        const double v = column == "max_n_mean" ? rows[i].max_n_mean : rows[i].max_p_e;
        const double b = !best ? 0.0
                         : column == "max_n_mean" ? rows[*best].max_n_mean
                                                  : rows[*best].max_p_e;
        if (!best || v > b)
            best = i;
    }
    return best;
}

SweepResult sweep(const std::string& base_config_text, const SweepGrid& grid, unsigned jobs)
{
    const std::size_t total = grid.size();
    if (total == 0)
        throw ConfigError("empty sweep grid");
    if (total > grid.max_runs)
        throw ConfigError("sweep grid exceeds max_runs");

    SweepResult result;
    for (const auto& a : grid.axes)
        result.keys.push_back(a.key);
    result.rows.resize(total);

    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(jobs, total));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++)
            result.rows[i] = run_point(base_config_text, grid, i);
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    return result;
}

} // namespace ncqed::harness
