#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cqnls/diagnostics.hpp"
#include "cqnls/error.hpp"
#include "cqnls/groundstate.hpp"
#include "support.hpp"

using namespace cqnls;
using testsupport::random_field;

TEST_CASE("discrete energy examples") {
    const Grid2D g = make_grid(0, 1, 0, 1, 4, 4);
    CHECK(discrete_energy(Field(g), CubicQuinticCoeffs{}) == 0.0);
    CHECK(discrete_energy(testsupport::spike(g, 1, 1), CubicQuinticCoeffs{2, 3, 0}) == doctest::Approx(4.0));

    std::mt19937_64 rng(31);
    const Field u = random_field(make_grid(0, 2, 0, 1, 12, 8), rng);
    const double nu = 0.7;
    const double sum = discrete_energy(u, {1.3, nu, 0}) + discrete_energy(u, {-1.3, nu, 0});
    CHECK(sum == doctest::Approx(2 * (grad_norm_sq(u) + nu / 3 * lp_norm_pow(u, 6))).epsilon(1e-13));

    const double e = discrete_energy(u, {1, nu, 0});
    CHECK(discrete_energy(std::polar(1.0, 1.1) * u, {1, nu, 0}) == doctest::Approx(e).epsilon(1e-13));
}

TEST_CASE("amplitude theory") {
    const Grid2D g = make_grid(-4, 4, -4, 4, 16, 16);
    const Field v0 = sech_seed(g);
    CHECK(amplitude_theory(0, 1.3, 0.01, v0) == 1.3);
    CHECK(amplitude_theory(5, 1.3, 0, v0) == 1.3);
    const double k = 2 * 0.01 * lp_norm_pow(v0, 4) / lp_norm_pow(v0, 2);
    CHECK(amplitude_theory(2, 1.0, 0.01, v0) == doctest::Approx(1 / std::sqrt(1 + 2 * k)).epsilon(1e-14));
}

TEST_CASE("relative errors") {
    std::mt19937_64 rng(32);
    const Field u = random_field(make_grid(0, 1, 0, 1, 10, 10), rng);
    const RelativeErrors same = relative_errors(u, u);
    CHECK(same.e2 == 0.0);
    CHECK(same.e1 == 0.0);
    const RelativeErrors scaled = relative_errors(cplx(1.01) * u, u);
    CHECK(scaled.e2 == doctest::Approx(0.01).epsilon(1e-10));
    CHECK(scaled.e1 == doctest::Approx(0.01).epsilon(1e-10));
    CHECK_THROWS_AS(relative_errors(u, Field(u.grid())), DomainError);
}

TEST_CASE("conservation errors") {
    std::mt19937_64 rng(33);
    const Field u = random_field(make_grid(0, 1, 0, 1, 10, 10), rng);
    const CubicQuinticCoeffs c{1, 0.1, 0};
    const ConservationErrors e = conservation_errors(u, discrete_mass(u), discrete_energy(u, c) + 0.5, c);
    CHECK(e.mass == 0.0);
    CHECK(e.energy == doctest::Approx(0.5));
}

TEST_CASE("convergence rates") {
    CHECK(convergence_rates({4e-2, 1e-2})[0] == doctest::Approx(2.0));
    CHECK(convergence_rates({1.227e-3, 3.110e-4})[0] == doctest::Approx(1.980).epsilon(1e-3));
    CHECK(convergence_rates({4.840e-2, 1.236e-2})[0] == doctest::Approx(1.969).epsilon(1e-3));
    for (double r : convergence_rates({3.0, 0.75, 0.1875, 0.046875})) CHECK(r == 2.0);
    CHECK_THROWS_AS(convergence_rates({1.0}), DomainError);
    CHECK_THROWS_AS(convergence_rates({1.0, 0.0}), DomainError);
}

TEST_CASE("convergence report accumulates rates") {
    ConvergenceReport rep;
    rep.add_level(0.25, 1.0 / 32, {4e-2, 8e-2});
    CHECK(rep.rate2.empty());
    rep.add_level(0.125, 1.0 / 64, {1e-2, 2e-2});
    REQUIRE(rep.rate2.size() == 1);
    CHECK(rep.rate2[0] == doctest::Approx(2.0));
    CHECK(rep.rate1[0] == doctest::Approx(2.0));
}

TEST_CASE("time series rejects non-increasing times") {
    const Grid2D g = make_grid(0, 1, 0, 1, 4, 4);
    TimeSeriesRecord ts;
    ts.append(0, Field(g), {}, 0);
    ts.append(0.1, Field(g), {}, 1);
    CHECK(ts.size() == 2);
    CHECK_THROWS_AS(ts.append(0.1, Field(g), {}, 1), ConfigError);
}

TEST_CASE("Gaussian vortex invariants") {
    const CubicQuinticCoeffs c{1, 0.1, 0};
    const ContinuousInvariants inv = gaussian_vortex_invariants(c);
    const double pi = std::numbers::pi;
    CHECK(inv.mass == 4.0);
    CHECK(inv.energy == doctest::Approx(8 - 0.5 * 4 / pi + 0.1 / 3 * 128 / (27 * pi * pi)).epsilon(1e-15));

    // Independent estimate from fine-grid sampling.
    const double amp = 2 / std::sqrt(pi);
    const auto fn = [amp](double x, double y) { return amp * cplx(x, y) * std::exp(-0.5 * (x * x + y * y)); };
    const ContinuousInvariants rich = richardson_invariants(fn, make_grid(-10, 10, -10, 10, 320, 320), c);
    CHECK(rich.mass == doctest::Approx(inv.mass).epsilon(1e-8));
    CHECK(rich.energy == doctest::Approx(inv.energy).epsilon(1e-6));
}

TEST_CASE("energy bound inequality on random fields") {
    std::mt19937_64 rng(34);
    const CubicQuinticCoeffs c{1, 0.1, 0};
    for (int i = 0; i < 20; ++i) CHECK(h1_energy_bound_holds(random_field(make_grid(0, 1, 0, 1, 16, 16), rng, 3.0), c));
}
