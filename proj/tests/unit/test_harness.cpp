#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqnls/config.hpp"
#include "cqnls/csv.hpp"
#include "cqnls/error.hpp"
#include "cqnls/experiments.hpp"
#include "cqnls/snapshot.hpp"
#include "support.hpp"

using namespace cqnls;

namespace fs = std::filesystem;

namespace {

std::string snapshot_bytes(const Field& f, double t) {
    std::ostringstream os(std::ios::binary);
    write_snapshot(os, f, t);
    return os.str();
}

Snapshot parse_bytes(const std::string& bytes) {
    std::istringstream is(bytes, std::ios::binary);
    return read_snapshot(is);
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cqnls_unit_" + name);
    fs::remove_all(p);
    return p;
}

std::string first_line(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    return line;
}

std::string joined(const std::vector<std::string>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
    return s;
}

ExperimentConfig small_config(ExperimentKind kind) {
    ExperimentConfig cfg = parse_config(
        "x_min = -4\nx_max = 4\ny_min = -4\ny_max = 4\n"
        "h = 0.5, 0.25\ntau = 0.0625, 0.03125\nt_final = 0.25\n"
        "lambda = 1\nnu = 0.1\nepsilon = 0\nic = gaussian-vortex\n");
    cfg.kind = kind;
    cfg.out_dir.clear();
    return cfg;
}

}  // namespace

TEST_CASE("snapshot round trip is bit-exact") {
    std::mt19937_64 rng(41);
    const Field f = testsupport::random_field(make_grid(-1.5, 2.25, 0.1, 0.7, 7, 5), rng);
    const Snapshot s = parse_bytes(snapshot_bytes(f, 0.3));
    CHECK(s.t == 0.3);
    CHECK(s.field.grid() == f.grid());
    CHECK(std::memcmp(s.field.values().data(), f.values().data(), f.size() * sizeof(cplx)) == 0);

    const fs::path dir = scratch_dir("snap");
    fs::create_directories(dir);
    write_snapshot((dir / "a.snap").string(), f, 1.5);
    CHECK(read_snapshot((dir / "a.snap").string()).t == 1.5);
    CHECK_THROWS_AS(read_snapshot((dir / "missing.snap").string()), IoError);
}

TEST_CASE("snapshot format errors") {
    const Field f(make_grid(0, 1, 0, 1, 4, 4));
    const std::string good = snapshot_bytes(f, 0);
    CHECK(good.rfind("CQNLS1 4 4 ", 0) == 0);

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(parse_bytes(bad_magic), FormatError);

    std::string bad_version = good;
    bad_version[5] = '2';
    CHECK_THROWS_AS(parse_bytes(bad_version), FormatError);

    // 24 of the 25 required values.
    const std::string truncated = good.substr(0, good.size() - 16);
    try {
        parse_bytes(truncated);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("25") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_bytes(good + std::string(16, '\0')), FormatError);
    CHECK_THROWS_AS(parse_bytes("CQNLS1 4 x 0 1 0 1 0\n"), FormatError);
}

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config(
        "# comment\nexperiment = converge\nh = 0.25, 0.125 # trailing\ntau = 0.03125, 0.015625\n"
        "lambda = 1\nnu = 0.01\nepsilon = 0.01\nt_final = 0.5\nseed = 17\n");
    CHECK(cfg.kind == ExperimentKind::Converge);
    REQUIRE(cfg.levels.size() == 2);
    CHECK(cfg.levels[1].h == 0.125);
    CHECK(cfg.params.tau == 0.03125);
    CHECK(cfg.params.coeffs.nu == 0.01);
    CHECK(cfg.seed == 17);
    CHECK_NOTHROW(cfg.validate());

    CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("lambda = 1\nlambda = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("lambda = one\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("lambda\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("h = 0.25, 0.125\ntau = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = nope\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/cqnls.cfg"), IoError);

    for (const std::string& key : config_keys()) {
        if (key == "experiment" || key == "ic" || key == "aitem_preconditioner" || key == "ic_file" || key == "out_dir" ||
            key == "h" || key == "tau")
            continue;
        CHECK_NOTHROW(parse_config(key + " = 1\n"));
    }
}

TEST_CASE("reference config lists every key in order") {
    const std::string path = std::string(CQNLS_CONFIG_DIR) + "/reference.cfg";
    CHECK_NOTHROW(load_config(path).validate());
    std::ifstream f(path);
    std::vector<std::string> keys;
    std::string line;
    while (std::getline(f, line)) {
        line = line.substr(0, line.find('#'));
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(' ') + 1);
        keys.push_back(key);
    }
    CHECK(keys == config_keys());

    for (const auto& entry : fs::directory_iterator(CQNLS_CONFIG_DIR)) {
        INFO(entry.path().string());
        ExperimentConfig cfg = load_config(entry.path().string());
        CHECK_NOTHROW(cfg.validate());
    }
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_config(ExperimentKind::Converge);
    CHECK_NOTHROW(cfg.validate());

    ExperimentConfig single = cfg;
    single.levels.resize(1);
    CHECK_THROWS_AS(single.validate(), ConfigError);
    CHECK_THROWS_AS(run_convergence_study(single), ConfigError);

    ExperimentConfig uneven = cfg;
    uneven.levels[1].tau = 0.05;
    CHECK_THROWS_AS(uneven.validate(), ConfigError);

    ExperimentConfig damped = small_config(ExperimentKind::Conserve);
    damped.params.coeffs.epsilon = 0.01;
    CHECK_THROWS_AS(damped.validate(), ConfigError);

    ExperimentConfig stab = small_config(ExperimentKind::StabMap);
    CHECK_THROWS_AS(stab.validate(), ConfigError);

    ExperimentConfig bad_h = cfg;
    bad_h.levels[0].h = 0.3;
    CHECK_THROWS_AS(bad_h.validate(), ConfigError);
}

TEST_CASE("csv tables") {
    CsvTable t({"a", "b"});
    t.add_row({"1", fmt(0.1)});
    CHECK_THROWS_AS(t.add_row({"1"}), ConfigError);
    CHECK(t.str() == "a,b\n1,0.10000000000000001\n");
    CHECK(fmt(2.0) == "2");
    CHECK(fmt(long(-3)) == "-3");
}

TEST_CASE("evolve experiment writes the documented outputs") {
    const fs::path dir = scratch_dir("evolve");
    ExperimentConfig cfg = small_config(ExperimentKind::Evolve);
    cfg.out_dir = dir.string();
    const EvolveResult r = run_evolve(cfg);
    CHECK(r.series.size() == 5);
    CHECK(first_line(dir / "timeseries.csv") == joined(timeseries_columns));
    const Snapshot s = read_snapshot((dir / "final.snap").string());
    CHECK(s.t == doctest::Approx(0.25));
    CHECK(testsupport::max_abs_diff(s.field, r.final_field) == 0.0);

    // Reproducible bit-for-bit.
    const EvolveResult again = run_evolve(cfg);
    CHECK(testsupport::max_abs_diff(again.final_field, r.final_field) == 0.0);
}

TEST_CASE("random and file initial conditions") {
    ExperimentConfig cfg = small_config(ExperimentKind::Evolve);
    cfg.ic = InitialKind::Random;
    cfg.seed = 5;
    const Grid2D g = cfg.grid_for(0.5);
    const Field a = initial_condition(cfg, g).u0;
    const Field b = initial_condition(cfg, g).u0;
    CHECK(testsupport::max_abs_diff(a, b) == 0.0);
    CHECK(a.in_X());
    cfg.seed = 6;
    CHECK(testsupport::max_abs_diff(initial_condition(cfg, g).u0, a) > 0.0);

    const fs::path dir = scratch_dir("icfile");
    fs::create_directories(dir);
    write_snapshot((dir / "ic.snap").string(), a, 0);
    cfg.ic = InitialKind::File;
    cfg.ic_file = (dir / "ic.snap").string();
    CHECK(testsupport::max_abs_diff(initial_condition(cfg, g).u0, a) == 0.0);
    CHECK_THROWS_AS(initial_condition(cfg, cfg.grid_for(0.25)), ConfigError);
}

TEST_CASE("convergence and conservation studies") {
    const fs::path dir = scratch_dir("studies");
    ExperimentConfig cfg = small_config(ExperimentKind::Converge);
    cfg.out_dir = dir.string();
    cfg.ref_factor = 8;
    cfg.workers = 2;
    const ConvergenceStudy cs = run_convergence_study(cfg);
    REQUIRE(cs.reports.size() == 1);
    CHECK(cs.reports[0].e2.size() == 2);
    CHECK(cs.reports[0].rate2.size() == 1);
    CHECK(first_line(dir / "converge.csv") == joined(converge_columns));

    cfg.kind = ExperimentKind::Conserve;
    cfg.sample_times = {0.125, 0.25};
    const ConservationStudy ks = run_conservation_study(cfg);
    CHECK(ks.rows.size() == 4);
    for (const auto& r : ks.rows) CHECK(r.mass_error < 1e-2);
    CHECK(first_line(dir / "conserve.csv") == joined(conserve_columns));
}

TEST_CASE("stability map, timing and reference runs") {
    const fs::path dir = scratch_dir("stab");
    ExperimentConfig cfg = small_config(ExperimentKind::StabMap);
    cfg.out_dir = dir.string();
    cfg.stab_h = {0.5, 0.25};
    cfg.stab_tau = {0.125, 0.0625};
    cfg.ref_factor = 4;
    const auto cells = run_stability_map(cfg);
    CHECK(cells.size() == 4);
    for (const auto& c : cells) CHECK(c.band == classify_band(c.e2));
    CHECK(first_line(dir / "stabmap.csv") == joined(stabmap_columns));

    CHECK(classify_band(0.01) == "<=0.05");
    CHECK(classify_band(0.07) == "<=0.1");
    CHECK(classify_band(0.3) == "<=0.5");
    CHECK(classify_band(2.0) == ">0.5");

    cfg.kind = ExperimentKind::Timing;
    const auto rows = run_timing(cfg);
    CHECK(rows.size() == 4);
    CHECK(first_line(dir / "timing.csv") == joined(timing_columns));

    cfg.kind = ExperimentKind::SsfmRef;
    const Snapshot ref = run_ssfm_reference(cfg);
    CHECK(ref.t == doctest::Approx(0.25));
    CHECK(fs::exists(dir / "ssfm_ref.snap"));
}

TEST_CASE("ground-state experiment") {
    const fs::path dir = scratch_dir("gs");
    ExperimentConfig cfg = parse_config(
        "experiment = groundstate\nx_min = -16\nx_max = 16\ny_min = -16\ny_max = 16\nh = 1\ntau = 0.5\n"
        "t_final = 0.5\nlambda = 1\nnu = 1\npower = 60\n");
    cfg.out_dir = dir.string();
    const GroundStateResult gs = run_groundstate(cfg);
    CHECK(gs.residual <= 1e-9);
    CHECK(first_line(dir / "groundstate.csv") == joined(groundstate_columns));
    CHECK(fs::exists(dir / "groundstate.snap"));
}
