#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqnls/cnfd.hpp"
#include "cqnls/groundstate.hpp"

namespace cqnls {

enum class ExperimentKind { Evolve, GroundState, Converge, Conserve, StabMap, SsfmRef, Timing };
enum class InitialKind { Soliton, GaussianVortex, File, Random };

ExperimentKind parse_experiment_kind(const std::string& s);
std::string to_string(ExperimentKind kind);

/// One (h, τ) refinement level.
struct Level {
    double h = 0.25;
    double tau = 1.0 / 32;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Evolve;

    double x_min = -10, x_max = 10, y_min = -10, y_max = 10;
    std::vector<Level> levels{Level{}};

    SolverParams params;

    InitialKind ic = InitialKind::GaussianVortex;
    std::string ic_file;
    SolitonICParams soliton;
    double power = 60;
    AitemOptions aitem;
    double random_amplitude = 0.1;

    std::vector<double> sample_times;  // empty: final time only
    int ref_factor = 64;               // τ_ref = τ_finest / ref_factor
    std::optional<double> reference_mass;
    std::optional<double> reference_energy;

    std::vector<double> stab_h;
    std::vector<double> stab_tau;
    double cell_budget_seconds = 600;

    std::string out_dir = "out";
    int workers = 1;
    std::uint64_t seed = 0;

    /// Grid of the given level on the configured domain. Throws ConfigError if the
    /// domain length is not an integer multiple of h.
    Grid2D grid_for(double h) const;

    /// Checks cross-field invariants (ladder halving, ε = 0 for conserve, ...).
    void validate() const;
};

/// Parses `key = value` lines, `#` comments. Unknown keys, repeated keys, and
/// malformed values throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Documented keys, in the order they appear in the reference config.
const std::vector<std::string>& config_keys();

}  // namespace cqnls
