#include "cqnls/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cqnls/error.hpp"

namespace cqnls {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
    if (used != v.size() || !std::isfinite(out)) throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::istringstream is(v);
    std::string tok;
    while (is >> tok) {
        if (tok.back() == ',') tok.pop_back();
        if (!tok.empty()) out.push_back(to_double(key, tok));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': expected at least one number");
    return out;
}

InitialKind parse_ic(const std::string& v) {
    if (v == "soliton") return InitialKind::Soliton;
    if (v == "gaussian-vortex") return InitialKind::GaussianVortex;
    if (v == "file") return InitialKind::File;
    if (v == "random") return InitialKind::Random;
    throw ConfigError("key 'ic': unknown initial condition '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

// Parsed ladders are stored here until both lists are known.
struct LadderLists {
    std::vector<double> h, tau;
};
thread_local LadderLists* pending = nullptr;

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"experiment", [](auto& c, auto&, auto& v) { c.kind = parse_experiment_kind(v); }},
        {"x_min", [](auto& c, auto& k, auto& v) { c.x_min = to_double(k, v); }},
        {"x_max", [](auto& c, auto& k, auto& v) { c.x_max = to_double(k, v); }},
        {"y_min", [](auto& c, auto& k, auto& v) { c.y_min = to_double(k, v); }},
        {"y_max", [](auto& c, auto& k, auto& v) { c.y_max = to_double(k, v); }},
        {"h", [](auto&, auto& k, auto& v) { pending->h = to_list(k, v); }},
        {"tau", [](auto&, auto& k, auto& v) { pending->tau = to_list(k, v); }},
        {"t_final", [](auto& c, auto& k, auto& v) { c.params.t_final = to_double(k, v); }},
        {"lambda", [](auto& c, auto& k, auto& v) { c.params.coeffs.lambda = to_double(k, v); }},
        {"nu", [](auto& c, auto& k, auto& v) { c.params.coeffs.nu = to_double(k, v); }},
        {"epsilon", [](auto& c, auto& k, auto& v) { c.params.coeffs.epsilon = to_double(k, v); }},
        {"fp_tol", [](auto& c, auto& k, auto& v) { c.params.fp_tol = to_double(k, v); }},
        {"fp_maxiter", [](auto& c, auto& k, auto& v) { c.params.fp_maxiter = int(to_int(k, v)); }},
        {"lin_tol", [](auto& c, auto& k, auto& v) { c.params.lin_tol = to_double(k, v); }},
        {"lin_maxiter", [](auto& c, auto& k, auto& v) { c.params.lin_maxiter = int(to_int(k, v)); }},
        {"ic", [](auto& c, auto&, auto& v) { c.ic = parse_ic(v); }},
        {"ic_file", [](auto& c, auto&, auto& v) { c.ic_file = v; }},
        {"A0", [](auto& c, auto& k, auto& v) { c.soliton.A0 = to_double(k, v); }},
        {"x0", [](auto& c, auto& k, auto& v) { c.soliton.x0 = to_double(k, v); }},
        {"y0", [](auto& c, auto& k, auto& v) { c.soliton.y0 = to_double(k, v); }},
        {"d1", [](auto& c, auto& k, auto& v) { c.soliton.d1 = to_double(k, v); }},
        {"d2", [](auto& c, auto& k, auto& v) { c.soliton.d2 = to_double(k, v); }},
        {"alpha0", [](auto& c, auto& k, auto& v) { c.soliton.alpha0 = to_double(k, v); }},
        {"power", [](auto& c, auto& k, auto& v) { c.power = to_double(k, v); }},
        {"aitem_tol", [](auto& c, auto& k, auto& v) { c.aitem.tol = to_double(k, v); }},
        {"aitem_maxiter", [](auto& c, auto& k, auto& v) { c.aitem.maxiter = int(to_int(k, v)); }},
        {"aitem_shift", [](auto& c, auto& k, auto& v) { c.aitem.shift = to_double(k, v); }},
        {"aitem_dt", [](auto& c, auto& k, auto& v) { c.aitem.dt = to_double(k, v); }},
        {"aitem_preconditioner",
         [](auto& c, auto&, auto& v) {
             if (v == "spectral")
                 c.aitem.preconditioner = AitemPreconditioner::Spectral;
             else if (v == "krylov")
                 c.aitem.preconditioner = AitemPreconditioner::Krylov;
             else
                 throw ConfigError("key 'aitem_preconditioner': expected spectral or krylov");
         }},
        {"random_amplitude", [](auto& c, auto& k, auto& v) { c.random_amplitude = to_double(k, v); }},
        {"sample_times", [](auto& c, auto& k, auto& v) { c.sample_times = to_list(k, v); }},
        {"ref_factor", [](auto& c, auto& k, auto& v) { c.ref_factor = int(to_int(k, v)); }},
        {"reference_mass", [](auto& c, auto& k, auto& v) { c.reference_mass = to_double(k, v); }},
        {"reference_energy", [](auto& c, auto& k, auto& v) { c.reference_energy = to_double(k, v); }},
        {"stab_h", [](auto& c, auto& k, auto& v) { c.stab_h = to_list(k, v); }},
        {"stab_tau", [](auto& c, auto& k, auto& v) { c.stab_tau = to_list(k, v); }},
        {"cell_budget_seconds", [](auto& c, auto& k, auto& v) { c.cell_budget_seconds = to_double(k, v); }},
        {"out_dir", [](auto& c, auto&, auto& v) { c.out_dir = v; }},
        {"workers", [](auto& c, auto& k, auto& v) { c.workers = int(to_int(k, v)); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = std::uint64_t(to_int(k, v)); }},
    };
    return table;
}

bool halves(double coarse, double fine) { return std::abs(coarse - 2.0 * fine) <= 1e-12 * coarse; }

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& s) {
    if (s == "evolve") return ExperimentKind::Evolve;
    if (s == "groundstate") return ExperimentKind::GroundState;
    if (s == "converge") return ExperimentKind::Converge;
    if (s == "conserve") return ExperimentKind::Conserve;
    if (s == "stabmap") return ExperimentKind::StabMap;
    if (s == "ssfm-ref") return ExperimentKind::SsfmRef;
    if (s == "timing") return ExperimentKind::Timing;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Evolve: return "evolve";
        case ExperimentKind::GroundState: return "groundstate";
        case ExperimentKind::Converge: return "converge";
        case ExperimentKind::Conserve: return "conserve";
        case ExperimentKind::StabMap: return "stabmap";
        case ExperimentKind::SsfmRef: return "ssfm-ref";
        case ExperimentKind::Timing: return "timing";
    }
    return "?";
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

Grid2D ExperimentConfig::grid_for(double h) const {
    if (!(h > 0.0)) throw ConfigError("mesh size h must be > 0");
    const double mx = (x_max - x_min) / h;
    const double my = (y_max - y_min) / h;
    const double jx = std::round(mx), ky = std::round(my);
    if (std::abs(mx - jx) > 1e-9 * mx || std::abs(my - ky) > 1e-9 * my) {
        std::ostringstream os;
        os << "h = " << h << " does not divide the domain evenly";
        throw ConfigError(os.str());
    }
    return make_grid(x_min, x_max, y_min, y_max, int(jx), int(ky));
}

void ExperimentConfig::validate() const {
    if (!(x_max > x_min) || !(y_max > y_min)) throw ConfigError("domain bounds must satisfy x_max > x_min, y_max > y_min");
    if (levels.empty()) throw ConfigError("at least one (h, tau) level is required");
    for (const Level& lv : levels) {
        (void)grid_for(lv.h);
        SolverParams p = params;
        p.tau = lv.tau;
        p.validate();
    }
    if (kind == ExperimentKind::Converge || kind == ExperimentKind::Conserve || kind == ExperimentKind::Timing) {
        if (kind != ExperimentKind::Timing && levels.size() < 2)
            throw ConfigError("a refinement ladder needs at least two levels");
        for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
            if (!halves(levels[i].h, levels[i + 1].h) || !halves(levels[i].tau, levels[i + 1].tau))
                throw ConfigError("ladder levels must halve h and tau together");
        }
    }
    if (kind == ExperimentKind::Conserve && params.coeffs.epsilon != 0.0)
        throw ConfigError("conserve requires epsilon = 0");
    if (kind == ExperimentKind::StabMap) {
        if (stab_h.empty() || stab_tau.empty()) throw ConfigError("stabmap needs non-empty stab_h and stab_tau");
        for (double h : stab_h) (void)grid_for(h);
        for (double t : stab_tau) {
            SolverParams p = params;
            p.tau = t;
            p.validate();
        }
        if (!(cell_budget_seconds > 0.0)) throw ConfigError("cell_budget_seconds must be > 0");
    }
    if (ic == InitialKind::File && ic_file.empty()) throw ConfigError("ic = file requires ic_file");
    if (ic == InitialKind::Soliton && !(power > 0.0)) throw ConfigError("power must be > 0");
    if (ref_factor < 1) throw ConfigError("ref_factor must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    for (double t : sample_times)
        if (!(t > 0.0) || t > params.t_final * (1 + 1e-12)) throw ConfigError("sample_times must lie in (0, t_final]");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    LadderLists ladder;
    pending = &ladder;
    struct Reset {
        ~Reset() { pending = nullptr; }
    } reset;

    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        const auto& table = setters();
        auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
        if (it == table.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        it->second(cfg, key, value);
    }

    if (!ladder.h.empty() || !ladder.tau.empty()) {
        if (ladder.h.size() != ladder.tau.size()) throw ConfigError("'h' and 'tau' lists must have the same length");
        cfg.levels.clear();
        for (std::size_t i = 0; i < ladder.h.size(); ++i) cfg.levels.push_back({ladder.h[i], ladder.tau[i]});
    }
    cfg.params.tau = cfg.levels.front().tau;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace cqnls
