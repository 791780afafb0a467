#include <doctest.h>

#include "cqnls/cnfd.hpp"
#include "cqnls/diagnostics.hpp"
#include "cqnls/error.hpp"
#include "cqnls/groundstate.hpp"
#include "support.hpp"

using namespace cqnls;
using testsupport::random_field;

namespace {

SolverParams params_for(CubicQuinticCoeffs c, double tau, double t_final) {
    SolverParams p;
    p.coeffs = c;
    p.tau = tau;
    p.t_final = t_final;
    return p;
}

}  // namespace

TEST_CASE("SolverParams validation") {
    SolverParams p;
    CHECK_NOTHROW(p.validate());
    p.tau = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SolverParams{};
    p.t_final = 0.3;
    p.tau = 0.25;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.t_final = 0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SolverParams{};
    p.fp_tol = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK(params_for({}, 1.0 / 32, 0.5).steps() == 16);
}

TEST_CASE("zero data is a fixed point reached in one pass") {
    const Grid2D g = make_grid(-1, 1, -1, 1, 8, 8);
    const StepResult r = step(Field(g), params_for({1, 1, 0.01}, 0.1, 0.1));
    CHECK(sup_norm(r.u) == 0.0);
    CHECK(r.report.fixed_point_iters == 1);
}

TEST_CASE("near-linear limit conserves mass") {
    std::mt19937_64 rng(21);
    const Grid2D g = make_grid(0, 1, 0, 1, 16, 16);
    const Field u0 = random_field(g, rng);
    const Field u1 = evolve(u0, params_for({0, 1e-12, 0}, 1.0 / 64, 4.0 / 64));
    CHECK(std::abs(discrete_mass(u1) - discrete_mass(u0)) <= 1e-12 * discrete_mass(u0));
}

TEST_CASE("converged step satisfies the nonlinear scheme") {
    std::mt19937_64 rng(22);
    const Grid2D g = make_grid(0, 1, 0, 1, 8, 8);
    const CubicQuinticCoeffs c{1, 1, 0.01};
    const double tau = 0.01;
    for (int trial = 0; trial < 5; ++trial) {
        const Field u0 = random_field(g, rng, 0.3);
        const StepResult r = step(u0, params_for(c, tau, tau));
        const Field res = scheme_residual(u0, r.u, tau, c);
        CHECK(norm(res, Norm::L2) <= 1e-7 * norm(u0, Norm::L2) / tau);
        CHECK(r.report.final_fp_residual <= 1e-8);
        CHECK(r.report.total_krylov_iters > 0);
    }
}

TEST_CASE("evolve: one step equals step()") {
    std::mt19937_64 rng(23);
    const Grid2D g = make_grid(0, 1, 0, 1, 10, 10);
    const Field u0 = random_field(g, rng, 0.5);
    const SolverParams p = params_for({1, 1, 0.01}, 0.05, 0.05);
    long calls = 0;
    const Field a = evolve(u0, p, [&](long n, const Field&, const StepReport&) { calls = n; });
    const Field b = step(u0, p).u;
    CHECK(calls == 1);
    CHECK(testsupport::max_abs_diff(a, b) == 0.0);
}

TEST_CASE("mass law, energy bound and conservation on a Gaussian vortex") {
    const Grid2D g = make_grid(-8, 8, -8, 8, 32, 32);
    const Field u0 = gaussian_vortex_ic(g);
    const double m0 = discrete_mass(u0);

    SUBCASE("damped: monotone mass and summed identity") {
        const CubicQuinticCoeffs c{1, 0.1, 0.01};
        const SolverParams p = params_for(c, 1.0 / 32, 0.5);
        const double e0 = discrete_energy(u0, c);
        double prev = m0, dissipated = 0;
        Field last = u0;
        evolve(u0, p, [&](long, const Field& u, const StepReport&) {
            const double m = discrete_mass(u);
            CHECK(m <= prev + 1e-9 * m0);
            prev = m;
            Field mid = 0.5 * (u + last);
            dissipated += 2 * p.tau * c.epsilon * lp_norm_pow(mid, 4);
            CHECK(discrete_energy(u, c) <= e0 + c.lambda * c.lambda / (4 * c.nu) * m0 + 1e-6 * std::abs(e0));
            CHECK(h1_energy_bound_holds(u, c, 1e-9));
            last = u;
        });
        CHECK(std::abs(discrete_mass(last) - m0 + dissipated) <= 1e-6 * m0);
    }

    SUBCASE("undamped: mass and energy conserved") {
        const CubicQuinticCoeffs c{1, 0.1, 0};
        const double e0 = discrete_energy(u0, c);
        const Field u = evolve(u0, params_for(c, 1.0 / 32, 1.0));
        CHECK(std::abs(discrete_mass(u) - m0) <= 1e-10 * m0);
        CHECK(std::abs(discrete_energy(u, c) - e0) <= 1e-10 * std::abs(e0));
    }
}

TEST_CASE("step failure carries the fixed-point history") {
    std::mt19937_64 rng(24);
    const Grid2D g = make_grid(0, 1, 0, 1, 8, 8);
    SolverParams p = params_for({1, 1, 0.01}, 0.1, 0.1);
    p.fp_maxiter = 1;
    p.fp_tol = 1e-14;
    try {
        step(random_field(g, rng, 2.0), p);
        FAIL("expected StepFailure");
    } catch (const StepFailure& e) {
        CHECK(e.history().size() == 1);
    }
}
