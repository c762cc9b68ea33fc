#include "ncqed/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ncqed/errors.hpp"

namespace ncqed::harness {

namespace {

class Reader
{
public:
    explicit Reader(std::string source) : m_source(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const
    {
        std::ostringstream msg;
        msg << m_source;
        if (node.IsDefined() && node.Mark().line >= 0)
            msg << ':' << node.Mark().line + 1;
        msg << ": " << what;
        throw ConfigError(msg.str());
    }

    void require_map(const YAML::Node& node, const std::string& where) const
    {
        if (!node.IsMap())
            fail(node, "'" + where + "' must be a mapping");
    }

    void allow_keys(const YAML::Node& node, const std::string& where,
                    std::initializer_list<const char*> keys) const
    {
        const std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!known.contains(key)) {
                std::string list;
                for (const auto& k : known)
                    list += (list.empty() ? "" : ", ") + k;
                fail(kv.first, "unknown key '" + key + "' in " + where + " (expected one of: " +
                                   list + ")");
            }
        }
    }

    double number(const YAML::Node& node, const std::string& key) const
    {
        if (!node.IsScalar())
            fail(node, "'" + key + "' must be a number");
        try {
            const double v = node.as<double>();
            if (!std::isfinite(v))
                fail(node, "'" + key + "' must be finite");
            return v;
        } catch (const YAML::Exception&) {
            fail(node, "'" + key + "' must be a number, got '" + node.Scalar() + "'");
        }
    }

    int integer(const YAML::Node& node, const std::string& key) const
    {
        if (!node.IsScalar())
            fail(node, "'" + key + "' must be an integer");
        try {
            return node.as<int>();
        } catch (const YAML::Exception&) {
            fail(node, "'" + key + "' must be an integer, got '" + node.Scalar() + "'");
        }
    }

    std::string text(const YAML::Node& node, const std::string& key) const
    {
        if (!node.IsScalar())
            fail(node, "'" + key + "' must be a string");
        return node.Scalar();
    }

    std::vector<double> numbers(const YAML::Node& node, const std::string& key) const
    {
        if (!node.IsSequence())
            fail(node, "'" + key + "' must be a list of numbers");
        std::vector<double> out;
        for (const auto& item : node)
            out.push_back(number(item, key));
        return out;
    }

    Complex amplitude(const YAML::Node& node) const
    {
        if (node.IsScalar())
            return {number(node, "amplitude"), 0.0};
        if (node.IsSequence() && node.size() == 2)
            return {number(node[0], "amplitude"), number(node[1], "amplitude")};
        fail(node, "amplitude must be a number or a [re, im] pair");
    }

private:
    std::string m_source;
};

void parse_system(const Reader& r, const YAML::Node& node, SystemParams& out)
{
    r.require_map(node, "system");
    r.allow_keys(node, "system",
                 {"omega", "Omega0_over_omega", "g0_over_omega", "kappa_over_omega",
                  "gamma_over_omega", "gamma_ph_over_omega"});
    if (node["omega"]) {
        // All frequencies are in units of the cavity frequency.
        if (r.number(node["omega"], "omega") != 1.0)
            r.fail(node["omega"], "omega is the unit of frequency and must be 1");
    }
    if (!node["Omega0_over_omega"])
        r.fail(node, "system needs Omega0_over_omega");
    if (!node["g0_over_omega"])
        r.fail(node, "system needs g0_over_omega");
    out.Omega0 = r.number(node["Omega0_over_omega"], "Omega0_over_omega");
    out.g0 = r.number(node["g0_over_omega"], "g0_over_omega");
    if (node["kappa_over_omega"])
        out.kappa = r.number(node["kappa_over_omega"], "kappa_over_omega");
    if (node["gamma_over_omega"])
        out.gamma = r.number(node["gamma_over_omega"], "gamma_over_omega");
    if (node["gamma_ph_over_omega"])
        out.gamma_ph = r.number(node["gamma_ph_over_omega"], "gamma_ph_over_omega");
    try {
        out.validate();
    } catch (const ConfigError& e) {
        r.fail(node, e.what());
    }
}

bool parse_modulation(const Reader& r, const YAML::Node& node, ModulationProfile& out)
{
    r.require_map(node, "modulation");
    r.allow_keys(node, "modulation", {"epsilon_over_omega", "eta_over_omega", "s", "c", "target"});
    if (!node["epsilon_over_omega"])
        r.fail(node, "modulation needs epsilon_over_omega");
    out.epsilon = r.number(node["epsilon_over_omega"], "epsilon_over_omega");
    out.s = node["s"] ? r.numbers(node["s"], "s") : std::vector<double>{1.0};
    out.c = node["c"] ? r.numbers(node["c"], "c") : std::vector<double>{};
    if (node["target"]) {
        const auto target = r.text(node["target"], "target");
        if (target == "atom")
            out.target = ModulationTarget::AtomFrequency;
        else if (target == "coupling")
            out.target = ModulationTarget::Coupling;
        else
            r.fail(node["target"], "target must be 'atom' or 'coupling', got '" + target + "'");
    }
    const bool explicit_eta = static_cast<bool>(node["eta_over_omega"]);
    if (explicit_eta)
        out.eta = r.number(node["eta_over_omega"], "eta_over_omega");
    try {
        out.validate();
    } catch (const ConfigError& e) {
        r.fail(node, e.what());
    }
    return explicit_eta;
}

ResonanceSpec parse_resonance(const Reader& r, const YAML::Node& node, const SystemParams& params,
                              const ModulationProfile& profile)
{
    r.require_map(node, "resonance");
    r.allow_keys(node, "resonance", {"kind", "K", "xi_over_omega", "xi_in_delta_units"});
    if (!node["kind"])
        r.fail(node, "resonance needs kind (ajc, jc or dce)");
    ResonanceSpec spec;
    try {
        spec.kind = parse_resonance_kind(r.text(node["kind"], "kind"));
    } catch (const ConfigError& e) {
        r.fail(node["kind"], e.what());
    }
    if (node["K"]) {
        spec.order = r.integer(node["K"], "K");
        if (spec.order < 1)
            r.fail(node["K"], "K must be >= 1");
    }
    if (node["xi_over_omega"] && node["xi_in_delta_units"])
        r.fail(node, "give either xi_over_omega or xi_in_delta_units, not both");
    if (node["xi_over_omega"]) {
        spec.xi = r.number(node["xi_over_omega"], "xi_over_omega");
    } else if (node["xi_in_delta_units"]) {
        const double dm = deltas(params, profile).minus;
        if (dm == 0.0)
            r.fail(node["xi_in_delta_units"], "xi_in_delta_units needs Delta_- != 0");
        spec.xi = r.number(node["xi_in_delta_units"], "xi_in_delta_units") * params.g0 *
                  params.g0 / dm;
    }
    return spec;
}

InitialState parse_initial(const Reader& r, const YAML::Node& node)
{
    if (node.IsScalar()) {
        try {
            return InitialState::parse_label(node.Scalar());
        } catch (const ConfigError& e) {
            r.fail(node, e.what());
        }
    }
    if (node.IsSequence()) {
        InitialState out;
        for (const auto& item : node)
            out.amplitudes.push_back(r.amplitude(item));
        return out;
    }
    r.fail(node, "initial_state must be a label like \"g,0\" or a list of amplitudes");
}

void parse_integrator(const Reader& r, const YAML::Node& node, ExperimentConfig& cfg)
{
    r.require_map(node, "integrator");
    r.allow_keys(node, "integrator",
                 {"method", "rel_tol", "abs_tol", "max_step", "sample_stride", "sample_interval"});
    IntegratorConfig& out = cfg.integrator;
    if (node["method"]) {
        try {
            out.method = parse_integrator_method(r.text(node["method"], "method"));
        } catch (const ConfigError& e) {
            r.fail(node["method"], e.what());
        }
    }
    if (node["rel_tol"])
        out.rel_tol = r.number(node["rel_tol"], "rel_tol");
    if (node["abs_tol"])
        out.abs_tol = r.number(node["abs_tol"], "abs_tol");
    if (node["max_step"]) {
        out.max_step = r.number(node["max_step"], "max_step");
        cfg.max_step_given = true;
    }
    if (node["sample_stride"])
        out.sample_stride = r.integer(node["sample_stride"], "sample_stride");
    if (node["sample_interval"])
        out.sample_interval = r.number(node["sample_interval"], "sample_interval");
}

YAML::Node load_yaml(const std::string& text, const std::string& source)
{
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream msg;
        msg << source << ':' << e.mark.line + 1 << ": " << e.msg;
        throw ConfigError(msg.str());
    }
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep))
        out.push_back(part);
    return out;
}

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string to_string(HamiltonianChoice choice)
{
    switch (choice) {
    case HamiltonianChoice::ExactLab:
        return "exact_lab";
    case HamiltonianChoice::ExactInteraction:
        return "exact_interaction";
    case HamiltonianChoice::Effective:
        return "effective";
    }
    return "?";
}

InitialState InitialState::label(Atom atom, int photons)
{
    InitialState s;
    s.atom = atom;
    s.photons = photons;
    return s;
}

InitialState InitialState::parse_label(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 2)
        throw ConfigError("initial state label must look like \"g,0\" or \"e,1\", got '" + text +
                          "'");
    const std::string atom = trim(parts[0]);
    const std::string photons = trim(parts[1]);
    Atom a;
    if (atom == "g")
        a = Atom::Ground;
    else if (atom == "e")
        a = Atom::Excited;
    else
        throw ConfigError("atom label must be 'g' or 'e', got '" + atom + "'");
    std::size_t used = 0;
    int m = -1;
    try {
        m = std::stoi(photons, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != photons.size() || m < 0)
        throw ConfigError("photon number must be a non-negative integer, got '" + photons + "'");
    return label(a, m);
}

QuantumState InitialState::build(const Space& space) const
{
    if (atom) {
        if (photons > space.n_max())
            throw ConfigError("initial photon number " + std::to_string(photons) +
                              " exceeds n_max " + std::to_string(space.n_max()));
        return QuantumState::basis(space, *atom, photons);
    }
    if (static_cast<int>(amplitudes.size()) != space.dim())
        throw ConfigError("initial amplitude list has " + std::to_string(amplitudes.size()) +
                          " entries, the space has dimension " + std::to_string(space.dim()));
    StateVector v(space.dim());
    for (int i = 0; i < space.dim(); ++i)
        v[i] = amplitudes[static_cast<std::size_t>(i)];
    return QuantumState(space, v);
}

std::optional<Atom> InitialState::definite_atom(const Space& space) const
{
    if (atom)
        return atom;
    bool has_g = false, has_e = false;
    for (int m = 0; m <= space.n_max(); ++m) {
        const auto ig = static_cast<std::size_t>(space.index(Atom::Ground, m));
        const auto ie = static_cast<std::size_t>(space.index(Atom::Excited, m));
        has_g = has_g || (ig < amplitudes.size() && std::abs(amplitudes[ig]) > 0.0);
        has_e = has_e || (ie < amplitudes.size() && std::abs(amplitudes[ie]) > 0.0);
    }
    if (has_g && has_e)
        return std::nullopt;
    return has_e ? Atom::Excited : Atom::Ground;
}

std::string InitialState::describe() const
{
    if (atom)
        return std::string("|") + atom_label(*atom) + "," + std::to_string(photons) + ">";
    return "amplitude list (" + std::to_string(amplitudes.size()) + " entries)";
}

ModulationProfile ExperimentConfig::drive() const
{
    return resonance ? tuned_profile(*resonance, system, modulation) : modulation;
}

IntegratorConfig ExperimentConfig::integrator_settings() const
{
    IntegratorConfig cfg = integrator;
    if (!max_step_given && modulation.epsilon > 0.0)
        cfg.max_step = IntegratorConfig::for_drive(drive().eta).max_step;
    return cfg;
}

void ExperimentConfig::validate() const
{
    system.validate();
    modulation.validate();
    if (n_max < 2)
        throw ConfigError("n_max must be >= 2");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw ConfigError("t_end must be positive");
    integrator_settings().validate();
    if (hamiltonian == HamiltonianChoice::Effective && !resonance)
        throw ConfigError("the effective Hamiltonian needs a resonance block");
    (void)initial_state.build(space());
    (void)drive();
}

ExperimentConfig parse_config(const std::string& text, const std::string& source)
{
    const Reader r(source);
    const YAML::Node root = load_yaml(text, source);
    if (!root.IsMap())
        throw ConfigError(source + ": top level must be a mapping");
    r.allow_keys(root, "the top level",
                 {"system", "modulation", "resonance", "hamiltonian", "space", "initial_state",
                  "t_end", "integrator", "outputs"});

    ExperimentConfig cfg;
    if (!root["system"])
        r.fail(root, "missing 'system' block");
    parse_system(r, root["system"], cfg.system);

    if (!root["modulation"])
        r.fail(root, "missing 'modulation' block");
    const bool explicit_eta = parse_modulation(r, root["modulation"], cfg.modulation);

    if (root["resonance"] && explicit_eta)
        r.fail(root["resonance"], "give either a resonance block or modulation.eta_over_omega, "
                                  "not both");
    if (!root["resonance"] && !explicit_eta)
        r.fail(root["modulation"], "the drive frequency is unset: add a resonance block or "
                                   "modulation.eta_over_omega");
    if (root["resonance"]) {
        cfg.resonance =
            parse_resonance(r, root["resonance"], cfg.system, cfg.modulation);
        try {
            cfg.modulation = tuned_profile(*cfg.resonance, cfg.system, cfg.modulation);
        } catch (const DomainError& e) {
            r.fail(root["resonance"], e.what());
        }
        if (!(cfg.modulation.eta > 0.0))
            r.fail(root["resonance"], "resonance gives a non-positive drive frequency");
    }

    if (root["hamiltonian"]) {
        const auto h = r.text(root["hamiltonian"], "hamiltonian");
        if (h == "exact_lab")
            cfg.hamiltonian = HamiltonianChoice::ExactLab;
        else if (h == "exact_interaction")
            cfg.hamiltonian = HamiltonianChoice::ExactInteraction;
        else if (h == "effective")
            cfg.hamiltonian = HamiltonianChoice::Effective;
        else
            r.fail(root["hamiltonian"],
                   "hamiltonian must be exact_lab, exact_interaction or effective");
    }

    if (root["space"]) {
        r.require_map(root["space"], "space");
        r.allow_keys(root["space"], "space", {"n_max"});
        if (root["space"]["n_max"])
            cfg.n_max = r.integer(root["space"]["n_max"], "n_max");
    }
    if (cfg.n_max < 2)
        r.fail(root["space"], "n_max must be >= 2");

    if (root["initial_state"])
        cfg.initial_state = parse_initial(r, root["initial_state"]);

    if (!root["t_end"])
        r.fail(root, "missing t_end (in units of 1/omega)");
    cfg.t_end = r.number(root["t_end"], "t_end");
    if (!(cfg.t_end > 0.0))
        r.fail(root["t_end"], "t_end must be positive");

    if (root["integrator"])
        parse_integrator(r, root["integrator"], cfg);

    if (root["outputs"]) {
        r.require_map(root["outputs"], "outputs");
        r.allow_keys(root["outputs"], "outputs", {"csv"});
        if (root["outputs"]["csv"])
            cfg.csv_path = r.text(root["outputs"]["csv"], "csv");
    }

    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return cfg;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    return parse_config(read_text(path), path.string());
}

std::string override_scalar(const std::string& text, const std::string& dotted_key,
                            const std::string& value)
{
    YAML::Node root = load_yaml(text, "<base config>");
    const auto parts = split(dotted_key, '.');
    if (parts.empty() || !root.IsMap())
        throw ConfigError("cannot override '" + dotted_key + "'");
    for (const auto& p : parts)
        if (p.empty())
            throw ConfigError("malformed key '" + dotted_key + "'");

    if (dotted_key == "resonance.xi_over_omega" && root["resonance"])
        root["resonance"].remove("xi_in_delta_units");
    if (dotted_key == "resonance.xi_in_delta_units" && root["resonance"])
        root["resonance"].remove("xi_over_omega");
    if (dotted_key == "modulation.eta_over_omega")
        root.remove("resonance");

    // yaml-cpp's operator[] on a non-const node creates intermediate maps.
    std::vector<YAML::Node> chain{root};
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        YAML::Node next = chain.back()[parts[i]];
        if (next.IsDefined() && !next.IsMap() && !next.IsNull())
            throw ConfigError("'" + dotted_key + "': '" + parts[i] + "' is not a mapping");
        chain.push_back(next);
    }
    chain.back()[parts.back()] = value;

    YAML::Emitter out;
    out << root;
    return out.c_str();
}

} // namespace ncqed::harness
