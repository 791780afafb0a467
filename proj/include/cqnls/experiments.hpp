#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqnls/config.hpp"
#include "cqnls/diagnostics.hpp"
#include "cqnls/groundstate.hpp"
#include "cqnls/snapshot.hpp"

namespace cqnls {

// CSV column lists. These are part of the output contract.
inline const std::vector<std::string> timeseries_columns = {"step", "t", "mass", "energy", "amplitude",
                                                            "amplitude_theory", "fp_iters"};
inline const std::vector<std::string> groundstate_columns = {"mu", "power", "residual", "iterations", "peak"};
inline const std::vector<std::string> converge_columns = {"t", "level", "h", "tau", "E2", "rate_E2", "E1", "rate_E1"};
inline const std::vector<std::string> conserve_columns = {"t", "level", "h", "tau", "E_M", "E_E", "rate_E_E"};
inline const std::vector<std::string> stabmap_columns = {"h", "tau", "E2", "band"};
inline const std::vector<std::string> timing_columns = {"scheme", "h", "tau", "steps", "seconds"};

struct InitialData {
    Field u0;
    std::optional<GroundStateResult> ground_state;  // set for soliton data
    bool truncated = false;
};

/// Builds the configured initial condition on `grid`.
InitialData initial_condition(const ExperimentConfig& cfg, const Grid2D& grid);

struct EvolveResult {
    TimeSeriesRecord series;              // includes t = 0
    std::vector<double> amplitude_theory; // A_th(t)·A(0)/A0, empty unless soliton data
    Field final_field;
};

/// CNFD run at levels[0]; writes timeseries.csv and final.snap.
EvolveResult run_evolve(const ExperimentConfig& cfg);

/// AITEM at levels[0]; writes groundstate.csv and groundstate.snap.
GroundStateResult run_groundstate(const ExperimentConfig& cfg);

struct ConvergenceStudy {
    std::vector<double> times;
    std::vector<ConvergenceReport> reports;  // one per sample time
};

/// CNFD at every ladder level against an SSFM reference on the same grid with
/// τ_ref = τ_finest / ref_factor. Writes converge.csv.
ConvergenceStudy run_convergence_study(const ExperimentConfig& cfg);

struct ConservationRow {
    double t = 0;
    int level = 0;
    double h = 0, tau = 0;
    double mass_error = 0;
    double energy_error = 0;
    std::optional<double> energy_rate;  // against the next finer level
};

struct ConservationStudy {
    ContinuousInvariants reference;
    std::vector<ConservationRow> rows;  // ordered by t, then level
};

/// ε = 0 mass and energy errors against the continuous invariants. Writes conserve.csv.
ConservationStudy run_conservation_study(const ExperimentConfig& cfg);

/// Error bands of the stability map.
std::string classify_band(double e2);

struct StabilityCell {
    double h = 0, tau = 0;
    double e2 = 0;  // NaN for diverged / timeout
    std::string band;
};

/// One CNFD run per (h, τ) cell against a per-h SSFM reference. Writes stabmap.csv.
std::vector<StabilityCell> run_stability_map(const ExperimentConfig& cfg);

struct TimingRow {
    std::string scheme;
    double h = 0, tau = 0;
    long steps = 0;
    double seconds = 0;
};

/// Wall-clock time of CNFD and SSFM at each level. Writes timing.csv.
std::vector<TimingRow> run_timing(const ExperimentConfig& cfg);

/// SSFM trajectory at levels[0] with τ / ref_factor. Writes ssfm_ref.snap.
Snapshot run_ssfm_reference(const ExperimentConfig& cfg);

}  // namespace cqnls
