#include "cqnls/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "cqnls/error.hpp"

namespace cqnls {

double discrete_energy(const Field& u, const CubicQuinticCoeffs& coeffs) {
    return grad_norm_sq(u) - 0.5 * coeffs.lambda * lp_norm_pow(u, 4) + coeffs.nu / 3.0 * lp_norm_pow(u, 6);
}

double amplitude_theory(double t, double A0, double epsilon, const Field& v0) {
    const double ratio = lp_norm_pow(v0, 4) / lp_norm_pow(v0, 2);
    const double a2 = A0 * A0;
    return A0 / std::sqrt(1.0 + 2.0 * epsilon * ratio * a2 * a2 * t);
}

RelativeErrors relative_errors(const Field& u_num, const Field& u_ref) {
    require_same_grid(u_num.grid(), u_ref.grid(), "relative_errors");
    const double ref2 = lp_norm_pow(u_ref, 2);
    const double ref1 = grad_norm_sq(u_ref);
    if (ref2 == 0.0 || ref1 == 0.0) throw DomainError("relative_errors: reference field has zero norm");
    const Field diff = u_num - u_ref;
    return {std::sqrt(lp_norm_pow(diff, 2) / ref2), std::sqrt(grad_norm_sq(diff) / ref1)};
}

ConservationErrors conservation_errors(const Field& u_n, double continuous_mass, double continuous_energy,
                                       const CubicQuinticCoeffs& coeffs) {
    return {std::abs(discrete_mass(u_n) - continuous_mass), std::abs(discrete_energy(u_n, coeffs) - continuous_energy)};
}

std::vector<double> convergence_rates(const std::vector<double>& errors) {
    if (errors.size() < 2) throw DomainError("convergence_rates: need at least two error values");
    for (double e : errors)
        if (!(e > 0.0)) throw DomainError("convergence_rates: errors must be positive");
    std::vector<double> rates;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) rates.push_back(std::log2(errors[i] / errors[i + 1]));
    return rates;
}

bool h1_energy_bound_holds(const Field& u, const CubicQuinticCoeffs& coeffs, double slack) {
    const double lhs = grad_norm_sq(u) + coeffs.nu / 6.0 * lp_norm_pow(u, 6);
    const double rhs = discrete_energy(u, coeffs) +
                       3.0 * coeffs.lambda * coeffs.lambda / (8.0 * coeffs.nu) * lp_norm_pow(u, 2);
    return lhs <= rhs + slack;
}

void TimeSeriesRecord::append(double t, const Field& u, const CubicQuinticCoeffs& coeffs, int fp_iterations) {
    if (!times.empty() && !(t > times.back())) throw ConfigError("TimeSeriesRecord: times must increase");
    times.push_back(t);
    mass.push_back(discrete_mass(u));
    energy.push_back(discrete_energy(u, coeffs));
    amplitude.push_back(cqnls::amplitude(u));
    fp_iters.push_back(fp_iterations);
}

void ConvergenceReport::add_level(double h, double tau, RelativeErrors errors) {
    levels.emplace_back(h, tau);
    e2.push_back(errors.e2);
    e1.push_back(errors.e1);
    if (e2.size() >= 2) {
        rate2 = convergence_rates(e2);
        rate1 = convergence_rates(e1);
    }
}

ContinuousInvariants gaussian_vortex_invariants(const CubicQuinticCoeffs& coeffs) {
    constexpr double pi = std::numbers::pi;
    const double grad = 8.0;
    const double quartic = 4.0 / pi;
    const double sextic = 128.0 / (27.0 * pi * pi);
    return {4.0, grad - 0.5 * coeffs.lambda * quartic + coeffs.nu / 3.0 * sextic};
}

ContinuousInvariants richardson_invariants(const std::function<cplx(double, double)>& fn, const Grid2D& coarse,
                                           const CubicQuinticCoeffs& coeffs) {
    const Grid2D fine = make_grid(coarse.a, coarse.b, coarse.c, coarse.d, 2 * coarse.J, 2 * coarse.K);
    const Field uc = sample_interior(coarse, fn);
    const Field uf = sample_interior(fine, fn);
    const double mc = discrete_mass(uc), mf = discrete_mass(uf);
    const double ec = discrete_energy(uc, coeffs), ef = discrete_energy(uf, coeffs);
    return {(4.0 * mf - mc) / 3.0, (4.0 * ef - ec) / 3.0};
}

}  // namespace cqnls
