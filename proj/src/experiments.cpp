#include "cqnls/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "cqnls/csv.hpp"
#include "cqnls/error.hpp"
#include "cqnls/ssfm.hpp"

namespace cqnls {

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn(0..n-1) on up to `workers` threads. Each index writes its own slot, so
// results do not depend on scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const std::size_t threads = std::min<std::size_t>(std::size_t(std::max(workers, 1)), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

bool writes_output(const ExperimentConfig& cfg) { return !cfg.out_dir.empty(); }

// Step index of time t for step size tau; throws if t is not on the time grid.
long step_of(double t, double tau) {
    const double m = t / tau;
    const double r = std::round(m);
    if (std::abs(m - r) > 1e-9 * std::max(1.0, m)) {
        std::ostringstream os;
        os << "sample time " << t << " is not a multiple of tau = " << tau;
        throw ConfigError(os.str());
    }
    return long(r);
}

std::vector<double> sample_times_or_final(const ExperimentConfig& cfg) {
    return cfg.sample_times.empty() ? std::vector<double>{cfg.params.t_final} : cfg.sample_times;
}

// Runs `stepper` (evolve or evolve_ssfm) and captures the field at the requested times.
template <typename Stepper>
std::vector<Field> capture(const std::vector<double>& times, double tau, Stepper&& stepper) {
    std::vector<long> wanted;
    for (double t : times) wanted.push_back(step_of(t, tau));
    std::vector<Field> out(times.size());
    stepper([&](long n, const Field& u, const StepReport&) {
        for (std::size_t i = 0; i < wanted.size(); ++i)
            if (wanted[i] == n) out[i] = u;
    });
    return out;
}

SolverParams params_at(const ExperimentConfig& cfg, double tau) {
    SolverParams p = cfg.params;
    p.tau = tau;
    return p;
}

Field random_field(const Grid2D& grid, std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field f(grid);
    for (int j = 1; j < grid.J; ++j)
        for (int k = 1; k < grid.K; ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            f(j, k) = amplitude * cplx(re, im);
        }
    return f;
}

}  // namespace

InitialData initial_condition(const ExperimentConfig& cfg, const Grid2D& grid) {
    switch (cfg.ic) {
        case InitialKind::GaussianVortex:
            return {gaussian_vortex_ic(grid), std::nullopt, false};
        case InitialKind::Random:
            return {random_field(grid, cfg.seed, cfg.random_amplitude), std::nullopt, false};
        case InitialKind::File: {
            Snapshot s = read_snapshot(cfg.ic_file);
            if (!(s.field.grid() == grid)) throw ConfigError("ic_file grid does not match the configured grid");
            s.field.zero_boundary();
            return {std::move(s.field), std::nullopt, false};
        }
        case InitialKind::Soliton: {
            GroundStateResult gs = aitem_solve(grid, cfg.params.coeffs, cfg.power, sech_seed(grid), cfg.aitem);
            SolitonIC ic = build_soliton_ic(gs.profile, cfg.soliton);
            return {std::move(ic.u0), std::move(gs), ic.truncated};
        }
    }
    throw ConfigError("unknown initial condition");
}

EvolveResult run_evolve(const ExperimentConfig& cfg) {
    cfg.validate();
    const Level lv = cfg.levels.front();
    const Grid2D grid = cfg.grid_for(lv.h);
    const SolverParams p = params_at(cfg, lv.tau);
    InitialData init = initial_condition(cfg, grid);

    EvolveResult res;
    const double peak0 = amplitude(init.u0);
    auto theory = [&](double t) {
        return amplitude_theory(t, cfg.soliton.A0, p.coeffs.epsilon, init.ground_state->profile) * peak0 /
               cfg.soliton.A0;
    };
    res.series.append(0.0, init.u0, p.coeffs, 0);
    if (init.ground_state) res.amplitude_theory.push_back(theory(0.0));
    res.final_field = evolve(init.u0, p, [&](long n, const Field& u, const StepReport& r) {
        const double t = double(n) * p.tau;
        res.series.append(t, u, p.coeffs, r.fixed_point_iters);
        if (init.ground_state) res.amplitude_theory.push_back(theory(t));
    });

    if (writes_output(cfg)) {
        CsvTable table(timeseries_columns);
        for (std::size_t i = 0; i < res.series.size(); ++i) {
            table.add_row({fmt(long(i)), fmt(res.series.times[i]), fmt(res.series.mass[i]), fmt(res.series.energy[i]),
                           fmt(res.series.amplitude[i]),
                           res.amplitude_theory.empty() ? std::string() : fmt(res.amplitude_theory[i]),
                           fmt(res.series.fp_iters[i])});
        }
        table.write(out_path(cfg, "timeseries.csv"));
        write_snapshot(out_path(cfg, "final.snap"), res.final_field, p.t_final);
    }
    return res;
}

GroundStateResult run_groundstate(const ExperimentConfig& cfg) {
    cfg.validate();
    const Grid2D grid = cfg.grid_for(cfg.levels.front().h);
    GroundStateResult gs = aitem_solve(grid, cfg.params.coeffs, cfg.power, sech_seed(grid), cfg.aitem);
    if (writes_output(cfg)) {
        CsvTable table(groundstate_columns);
        table.add_row({fmt(gs.mu), fmt(gs.power), fmt(gs.residual), fmt(gs.iterations), fmt(amplitude(gs.profile))});
        table.write(out_path(cfg, "groundstate.csv"));
        write_snapshot(out_path(cfg, "groundstate.snap"), gs.profile, 0.0);
    }
    return gs;
}

ConvergenceStudy run_convergence_study(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.levels.size() < 2)
        throw ConfigError("a refinement ladder needs at least two levels");
    const std::vector<double> times = sample_times_or_final(cfg);
    const double tau_ref = cfg.levels.back().tau / cfg.ref_factor;

    // errors[level][sample]
    std::vector<std::vector<RelativeErrors>> errors(cfg.levels.size());
    parallel_for(cfg.levels.size(), cfg.workers, [&](std::size_t l) {
        const Level lv = cfg.levels[l];
        const Grid2D grid = cfg.grid_for(lv.h);
        const InitialData init = initial_condition(cfg, grid);
        const SolverParams p = params_at(cfg, lv.tau);
        const SolverParams pref = params_at(cfg, tau_ref);
        const SpectralPlan plan(grid);
        std::vector<Field> num, ref;
        try {
            num = capture(times, p.tau, [&](const StepObserver& obs) { evolve(init.u0, p, obs); });
            ref = capture(times, pref.tau, [&](const StepObserver& obs) { evolve_ssfm(init.u0, pref, plan, obs); });
        } catch (const StepFailure& e) {
            std::ostringstream os;
            os << "level " << l << " (h=" << lv.h << ", tau=" << lv.tau << "): " << e.what();
            throw StepFailure(os.str(), e.history(), e.step_index());
        }
        for (std::size_t s = 0; s < times.size(); ++s) errors[l].push_back(relative_errors(num[s], ref[s]));
    });

    ConvergenceStudy study;
    study.times = times;
    for (std::size_t s = 0; s < times.size(); ++s) {
        ConvergenceReport rep;
        for (std::size_t l = 0; l < cfg.levels.size(); ++l) rep.add_level(cfg.levels[l].h, cfg.levels[l].tau, errors[l][s]);
        study.reports.push_back(std::move(rep));
    }

    if (writes_output(cfg)) {
        CsvTable table(converge_columns);
        for (std::size_t s = 0; s < times.size(); ++s) {
            const ConvergenceReport& rep = study.reports[s];
            for (std::size_t l = 0; l < rep.levels.size(); ++l) {
                const bool has_rate = l < rep.rate2.size();
                table.add_row({fmt(times[s]), fmt(long(l)), fmt(rep.levels[l].first), fmt(rep.levels[l].second),
                               fmt(rep.e2[l]), has_rate ? fmt(rep.rate2[l]) : std::string(), fmt(rep.e1[l]),
                               has_rate ? fmt(rep.rate1[l]) : std::string()});
            }
        }
        table.write(out_path(cfg, "converge.csv"));
    }
    return study;
}

ConservationStudy run_conservation_study(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.params.coeffs.epsilon != 0.0) throw ConfigError("conserve requires epsilon = 0");
    if (cfg.levels.size() < 2) throw ConfigError("a refinement ladder needs at least two levels");

    ConservationStudy study;
    if (cfg.reference_mass && cfg.reference_energy) {
        study.reference = {*cfg.reference_mass, *cfg.reference_energy};
    } else if (cfg.ic == InitialKind::GaussianVortex) {
        study.reference = gaussian_vortex_invariants(cfg.params.coeffs);
    } else {
        throw ConfigError("conserve needs reference_mass and reference_energy unless ic = gaussian-vortex");
    }

    const std::vector<double> times =
        cfg.sample_times.empty() ? std::vector<double>{0.25, 0.5, 0.75, 1.0} : cfg.sample_times;
    for (double t : times)
        if (t > cfg.params.t_final * (1 + 1e-12)) throw ConfigError("sample time beyond t_final");

    std::vector<std::vector<ConservationErrors>> errs(cfg.levels.size());
    parallel_for(cfg.levels.size(), cfg.workers, [&](std::size_t l) {
        const Level lv = cfg.levels[l];
        const Grid2D grid = cfg.grid_for(lv.h);
        const InitialData init = initial_condition(cfg, grid);
        const SolverParams p = params_at(cfg, lv.tau);
        const auto fields = capture(times, p.tau, [&](const StepObserver& obs) { evolve(init.u0, p, obs); });
        for (const Field& u : fields)
            errs[l].push_back(conservation_errors(u, study.reference.mass, study.reference.energy, p.coeffs));
    });

    for (std::size_t s = 0; s < times.size(); ++s) {
        for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
            ConservationRow row{times[s], int(l), cfg.levels[l].h, cfg.levels[l].tau, errs[l][s].mass,
                                errs[l][s].energy, std::nullopt};
            if (l + 1 < cfg.levels.size() && errs[l][s].energy > 0.0 && errs[l + 1][s].energy > 0.0)
                row.energy_rate = std::log2(errs[l][s].energy / errs[l + 1][s].energy);
            study.rows.push_back(row);
        }
    }

    if (writes_output(cfg)) {
        CsvTable table(conserve_columns);
        for (const auto& r : study.rows)
            table.add_row({fmt(r.t), fmt(long(r.level)), fmt(r.h), fmt(r.tau), fmt(r.mass_error), fmt(r.energy_error),
                           r.energy_rate ? fmt(*r.energy_rate) : std::string()});
        table.write(out_path(cfg, "conserve.csv"));
    }
    return study;
}

std::string classify_band(double e2) {
    if (!std::isfinite(e2)) return "diverged";
    if (e2 <= 0.05) return "<=0.05";
    if (e2 <= 0.1) return "<=0.1";
    if (e2 <= 0.5) return "<=0.5";
    return ">0.5";
}

namespace {

struct CellTimeout {};

}  // namespace

std::vector<StabilityCell> run_stability_map(const ExperimentConfig& cfg) {
    cfg.validate();
    double tau_min = cfg.stab_tau.front();
    for (double t : cfg.stab_tau) tau_min = std::min(tau_min, t);
    const double tau_ref = tau_min / cfg.ref_factor;

    // Per-h initial data and reference solution.
    struct Column {
        Field u0;
        Field ref;
    };
    std::vector<Column> columns(cfg.stab_h.size());
    parallel_for(cfg.stab_h.size(), cfg.workers, [&](std::size_t i) {
        const Grid2D grid = cfg.grid_for(cfg.stab_h[i]);
        InitialData init = initial_condition(cfg, grid);
        const SpectralPlan plan(grid);
        columns[i].ref = evolve_ssfm(init.u0, params_at(cfg, tau_ref), plan);
        columns[i].u0 = std::move(init.u0);
    });

    const std::size_t nt = cfg.stab_tau.size();
    std::vector<StabilityCell> cells(cfg.stab_h.size() * nt);
    parallel_for(cells.size(), cfg.workers, [&](std::size_t c) {
        const std::size_t i = c / nt;
        StabilityCell& cell = cells[c];
        cell.h = cfg.stab_h[i];
        cell.tau = cfg.stab_tau[c % nt];
        const SolverParams p = params_at(cfg, cell.tau);
        const auto start = Clock::now();
        try {
            const Field u = evolve(columns[i].u0, p, [&](long, const Field&, const StepReport&) {
                if (std::chrono::duration<double>(Clock::now() - start).count() > cfg.cell_budget_seconds)
                    throw CellTimeout{};
            });
            cell.e2 = relative_errors(u, columns[i].ref).e2;
            cell.band = classify_band(cell.e2);
        } catch (const CellTimeout&) {
            cell.e2 = std::numeric_limits<double>::quiet_NaN();
            cell.band = "timeout";
        } catch (const SolverError&) {
            cell.e2 = std::numeric_limits<double>::quiet_NaN();
            cell.band = "diverged";
        }
    });

    if (writes_output(cfg)) {
        CsvTable table(stabmap_columns);
        for (const auto& c : cells) table.add_row({fmt(c.h), fmt(c.tau), fmt(c.e2), c.band});
        table.write(out_path(cfg, "stabmap.csv"));
    }
    return cells;
}

std::vector<TimingRow> run_timing(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<TimingRow> rows;
    // Timed sequentially so the two schemes do not compete for cores.
    for (const Level& lv : cfg.levels) {
        const Grid2D grid = cfg.grid_for(lv.h);
        const InitialData init = initial_condition(cfg, grid);
        const SolverParams p = params_at(cfg, lv.tau);
        const long steps = p.steps();

        auto t0 = Clock::now();
        (void)evolve(init.u0, p);
        auto t1 = Clock::now();
        rows.push_back({"CNFD", lv.h, lv.tau, steps, std::chrono::duration<double>(t1 - t0).count()});

        t0 = Clock::now();
        const SpectralPlan plan(grid);
        (void)evolve_ssfm(init.u0, p, plan);
        t1 = Clock::now();
        rows.push_back({"SSFM", lv.h, lv.tau, steps, std::chrono::duration<double>(t1 - t0).count()});
    }
    if (writes_output(cfg)) {
        CsvTable table(timing_columns);
        for (const auto& r : rows) table.add_row({r.scheme, fmt(r.h), fmt(r.tau), fmt(r.steps), fmt(r.seconds)});
        table.write(out_path(cfg, "timing.csv"));
    }
    return rows;
}

Snapshot run_ssfm_reference(const ExperimentConfig& cfg) {
    cfg.validate();
    const Level lv = cfg.levels.front();
    const Grid2D grid = cfg.grid_for(lv.h);
    const InitialData init = initial_condition(cfg, grid);
    const SolverParams p = params_at(cfg, lv.tau / cfg.ref_factor);
    const SpectralPlan plan(grid);
    Snapshot snap{evolve_ssfm(init.u0, p, plan), p.t_final};
    if (writes_output(cfg)) write_snapshot(out_path(cfg, "ssfm_ref.snap"), snap.field, snap.t);
    return snap;
}

}  // namespace cqnls
