#include "ncqed/harness/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ncqed/errors.hpp"

namespace ncqed::harness {

namespace {

void put(std::ostream& out, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(cell);
    return out;
}

double parse_cell(const std::string& cell, std::size_t row)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ConfigError("csv row " + std::to_string(row) + ": bad number '" + cell + "'");
    return v;
}

} // namespace

void write_csv(const Trajectory& trajectory, std::ostream& out)
{
    const auto names = column_names(trajectory.space());
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? "," : "") << names[i];
    out << '\n';
    for (const Sample& s : trajectory.samples()) {
        const Populations& p = s.populations;
        put(out, s.t);
        for (double v : {s.norm_error, p.mean_photons, p.p_g, p.p_e}) {
            out << ',';
            put(out, v);
        }
        for (double v : p.ground) {
            out << ',';
            put(out, v);
        }
        for (double v : p.excited) {
            out << ',';
            put(out, v);
        }
        out << '\n';
    }
}

void write_csv(const Trajectory& trajectory, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write " + path.string());
    write_csv(trajectory, out);
    if (!out)
        throw ConfigError("error while writing " + path.string());
}

Trajectory read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("csv: missing header");
    const auto header = split_row(line);
    int levels = 0;
    while (true) {
        const std::string name = "P_g_" + std::to_string(levels);
        bool found = false;
        for (const auto& h : header)
            found = found || h == name;
        if (!found)
            break;
        ++levels;
    }
    const Space space(levels - 1);
    if (header != column_names(space))
        throw ConfigError("csv: unexpected header");

    Trajectory traj(space);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty())
            continue;
        const auto cells = split_row(line);
        if (cells.size() != header.size())
            throw ConfigError("csv row " + std::to_string(row) + ": wrong number of cells");
        std::size_t c = 0;
        Sample s;
        s.t = parse_cell(cells[c++], row);
        s.norm_error = parse_cell(cells[c++], row);
        s.populations.mean_photons = parse_cell(cells[c++], row);
        s.populations.p_g = parse_cell(cells[c++], row);
        s.populations.p_e = parse_cell(cells[c++], row);
        s.populations.ground.resize(static_cast<std::size_t>(levels));
        s.populations.excited.resize(static_cast<std::size_t>(levels));
        for (auto& v : s.populations.ground)
            v = parse_cell(cells[c++], row);
        for (auto& v : s.populations.excited)
            v = parse_cell(cells[c++], row);
        traj.samples().push_back(std::move(s));
    }
    return traj;
}

Trajectory read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path.string());
    return read_csv(in);
}

} // namespace ncqed::harness
