// cqnls: command-line driver for the CNFD / SSFM experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure, 3 I/O error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "cqnls/error.hpp"
#include "cqnls/experiments.hpp"

namespace {

enum ExitCode { Ok = 0, BadConfig = 1, SolverFailed = 2, IoFailed = 3 };

void summarize(const cqnls::ExperimentConfig& cfg) {
    using namespace cqnls;
    switch (cfg.kind) {
        case ExperimentKind::Evolve: {
            const EvolveResult r = run_evolve(cfg);
            std::printf("steps=%zu final_mass=%.12e final_energy=%.12e\n", r.series.size() - 1, r.series.mass.back(),
                        r.series.energy.back());
            break;
        }
        case ExperimentKind::GroundState: {
            const GroundStateResult gs = run_groundstate(cfg);
            std::printf("mu=%.8f power=%.8f residual=%.3e iterations=%d\n", gs.mu, gs.power, gs.residual,
                        gs.iterations);
            break;
        }
        case ExperimentKind::Converge: {
            const ConvergenceStudy s = run_convergence_study(cfg);
            for (std::size_t i = 0; i < s.times.size(); ++i) {
                const ConvergenceReport& rep = s.reports[i];
                for (std::size_t l = 0; l < rep.levels.size(); ++l) {
                    std::printf("t=%g h=%g tau=%g E2=%.4e E1=%.4e", s.times[i], rep.levels[l].first,
                                rep.levels[l].second, rep.e2[l], rep.e1[l]);
                    if (l < rep.rate2.size()) std::printf(" rate2=%.3f rate1=%.3f", rep.rate2[l], rep.rate1[l]);
                    std::printf("\n");
                }
            }
            break;
        }
        case ExperimentKind::Conserve: {
            const ConservationStudy s = run_conservation_study(cfg);
            for (const auto& r : s.rows) {
                std::printf("t=%g h=%g E_M=%.3e E_E=%.4e", r.t, r.h, r.mass_error, r.energy_error);
                if (r.energy_rate) std::printf(" rate=%.3f", *r.energy_rate);
                std::printf("\n");
            }
            break;
        }
        case ExperimentKind::StabMap: {
            for (const auto& c : run_stability_map(cfg))
                std::printf("h=%g tau=%g E2=%.4e band=%s\n", c.h, c.tau, c.e2, c.band.c_str());
            break;
        }
        case ExperimentKind::SsfmRef: {
            const Snapshot s = run_ssfm_reference(cfg);
            std::printf("t=%g mass=%.12e\n", s.t, cqnls::discrete_mass(s.field));
            break;
        }
        case ExperimentKind::Timing: {
            for (const auto& r : run_timing(cfg))
                std::printf("%s h=%g tau=%g steps=%ld seconds=%.3f\n", r.scheme.c_str(), r.h, r.tau, r.steps, r.seconds);
            break;
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cubic-quintic NLS solvers: Crank-Nicolson finite differences, split-step reference, ground states"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int workers = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"evolve", "CNFD time evolution with per-step diagnostics"},
        {"groundstate", "AITEM soliton profile"},
        {"converge", "convergence study over an (h, tau) ladder"},
        {"conserve", "mass/energy errors for epsilon = 0"},
        {"stabmap", "E_2,h over an (h, tau) raster"},
        {"ssfm-ref", "split-step reference trajectory"},
        {"timing", "wall-clock comparison of CNFD and SSFM"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
        sub->add_option("--workers", workers, "worker threads (overrides workers)")->check(CLI::PositiveNumber);
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& s) { seed = s, seed_set = true; }, "random seed (overrides seed)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Ok : BadConfig;
    }

    try {
        cqnls::ExperimentConfig cfg = cqnls::load_config(config_path);
        cfg.kind = cqnls::parse_experiment_kind(app.get_subcommands().front()->get_name());
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (workers > 0) cfg.workers = workers;
        if (seed_set) cfg.seed = seed;
        summarize(cfg);
    } catch (const cqnls::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return IoFailed;
    } catch (const cqnls::FormatError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return IoFailed;
    } catch (const cqnls::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return BadConfig;
    } catch (const cqnls::DomainError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return BadConfig;
    } catch (const cqnls::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return SolverFailed;
    }
    return Ok;
}
