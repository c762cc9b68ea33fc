#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ncqed/dynamics.hpp"
#include "ncqed/hamiltonians.hpp"
#include "ncqed/hilbert.hpp"
#include "ncqed/modulation.hpp"

namespace ncqed::harness {

enum class HamiltonianChoice { ExactLab, ExactInteraction, Effective };

std::string to_string(HamiltonianChoice choice);

/// Either a single basis label ("g,0", "e,3") or a full amplitude list in
/// atom-major basis order.
struct InitialState
{
    std::optional<Atom> atom;
    int photons = 0;
    std::vector<Complex> amplitudes;

    static InitialState label(Atom atom, int photons);
    static InitialState parse_label(const std::string& text);

    bool is_basis() const { return atom.has_value(); }
    QuantumState build(const Space& space) const;
    /// Atomic state of a basis label, or the atom shared by every nonzero
    /// amplitude; empty for a genuine atomic superposition.
    std::optional<Atom> definite_atom(const Space& space) const;
    std::string describe() const;
};

struct ExperimentConfig
{
    SystemParams system;
    ModulationProfile modulation;
    std::optional<ResonanceSpec> resonance;
    HamiltonianChoice hamiltonian = HamiltonianChoice::ExactInteraction;
    int n_max = 10;
    InitialState initial_state = InitialState::label(Atom::Ground, 0);
    double t_end = 0.0;
    IntegratorConfig integrator;
    /// False when the config left max_step out; the run then derives it from eta.
    bool max_step_given = false;
    std::optional<std::filesystem::path> csv_path;

    /// Modulation with eta fixed by the resonance (or the explicit eta).
    ModulationProfile drive() const;
    /// Integrator settings with the drive-derived default step bound filled in.
    IntegratorConfig integrator_settings() const;
    Space space() const { return Space(n_max); }

    void validate() const;
};

/// Parse YAML text. `source` names the origin in error messages.
/// Throws ConfigError with "source:line: ..." diagnostics.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

/**
 * Set a dotted key ("resonance.xi_in_delta_units") in YAML text to a scalar,
 * dropping keys that would conflict with it (the other xi form, or the
 * resonance block when eta is set explicitly). Returns the new text.
 */
std::string override_scalar(const std::string& text, const std::string& dotted_key,
                            const std::string& value);

} // namespace ncqed::harness
