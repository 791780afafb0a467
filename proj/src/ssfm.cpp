#include "cqnls/ssfm.hpp"

#include <cmath>
#include <fftw3.h>
#include <mutex>
#include <numbers>

#include "cqnls/error.hpp"

namespace cqnls {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

SpectralPlan::SpectralPlan(const Grid2D& grid) : grid_(grid) {
    const int n1 = grid.J - 1;
    const int n2 = grid.K - 1;
    const double lx = grid.b - grid.a;
    const double ly = grid.d - grid.c;
    eigenvalues_.resize(std::size_t(n1) * std::size_t(n2));
    for (int p = 1; p <= n1; ++p) {
        const double kx = p * std::numbers::pi / lx;
        for (int q = 1; q <= n2; ++q) {
            const double ky = q * std::numbers::pi / ly;
            eigenvalues_[std::size_t(p - 1) * std::size_t(n2) + std::size_t(q - 1)] = -(kx * kx + ky * ky);
        }
    }

    // Interleaved complex data: two real transforms with stride 2. FFTW_ESTIMATE keeps the
    // algorithm choice (and therefore the bits) independent of timing.
    std::vector<double> scratch(2 * eigenvalues_.size());
    const int n[2] = {n1, n2};
    const fftw_r2r_kind kinds[2] = {FFTW_RODFT00, FFTW_RODFT00};
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_many_r2r(2, n, 2, scratch.data(), nullptr, 2, 1, scratch.data(), nullptr, 2, 1, kinds,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!raw) throw SolverError("failed to create sine-transform plan");
    plan_ = std::shared_ptr<void>(static_cast<void*>(raw), [](void* p) {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(p));
    });
}

std::vector<double> SpectralPlan::fd_eigenvalues() const {
    const int n1 = grid_.J - 1;
    const int n2 = grid_.K - 1;
    std::vector<double> out(eigenvalues_.size());
    for (int p = 1; p <= n1; ++p) {
        const double sx = std::sin(p * std::numbers::pi / (2.0 * grid_.J));
        for (int q = 1; q <= n2; ++q) {
            const double sy = std::sin(q * std::numbers::pi / (2.0 * grid_.K));
            out[std::size_t(p - 1) * std::size_t(n2) + std::size_t(q - 1)] =
                -4.0 * sx * sx / (grid_.dx * grid_.dx) - 4.0 * sy * sy / (grid_.dy * grid_.dy);
        }
    }
    return out;
}

void SpectralPlan::transform(std::vector<cplx>& data) const {
    double* raw = reinterpret_cast<double*>(data.data());
    fftw_execute_r2r(static_cast<fftw_plan>(plan_.get()), raw, raw);
}

std::vector<cplx> SpectralPlan::forward(const Field& u) const {
    require_same_grid(grid_, u.grid(), "SpectralPlan::forward");
    std::vector<cplx> data;
    data.reserve(eigenvalues_.size());
    for (int j = 1; j < grid_.J; ++j)
        for (int k = 1; k < grid_.K; ++k) data.push_back(u(j, k));
    transform(data);
    return data;
}

Field SpectralPlan::inverse(std::vector<cplx> modes) const {
    transform(modes);
    const double scale = 1.0 / (4.0 * grid_.J * grid_.K);
    Field out(grid_);
    std::size_t i = 0;
    for (int j = 1; j < grid_.J; ++j)
        for (int k = 1; k < grid_.K; ++k) out(j, k) = modes[i++] * scale;
    return out;
}

Field SpectralPlan::apply_multiplier(const Field& u, const std::vector<cplx>& multiplier) const {
    std::vector<cplx> modes = forward(u);
    for (std::size_t i = 0; i < modes.size(); ++i) modes[i] *= multiplier[i];
    return inverse(std::move(modes));
}

Field SpectralPlan::apply_multiplier(const Field& u, const std::vector<double>& multiplier) const {
    std::vector<cplx> modes = forward(u);
    for (std::size_t i = 0; i < modes.size(); ++i) modes[i] *= multiplier[i];
    return inverse(std::move(modes));
}

Field nonlinear_substep(const Field& u, double dt, const CubicQuinticCoeffs& coeffs) {
    const double eps = coeffs.epsilon;
    Field out(u.grid());
    auto src = u.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double rho0 = std::norm(src[i]);
        if (rho0 == 0.0) continue;
        double amp = 1.0;
        double i1 = rho0 * dt;
        double i2 = rho0 * rho0 * dt;
        if (eps != 0.0) {
            const double g = 1.0 + 2.0 * eps * rho0 * dt;
            if (!(g > 0.0)) throw DomainError("nonlinear_substep: 1 + 2*eps*rho*dt <= 0");
            amp = 1.0 / std::sqrt(g);
            i1 = std::log1p(2.0 * eps * rho0 * dt) / (2.0 * eps);
            i2 = rho0 * rho0 * dt / g;
        }
        const double theta = coeffs.lambda * i1 - coeffs.nu * i2;
        dst[i] = src[i] * amp * std::polar(1.0, theta);
    }
    return out;
}

namespace {

std::vector<cplx> linear_phases(const SpectralPlan& plan, double dt) {
    const auto& mu = plan.eigenvalues();
    std::vector<cplx> phase(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) phase[i] = std::polar(1.0, mu[i] * dt);
    return phase;
}

}  // namespace

Field linear_substep(const Field& u, double dt, const SpectralPlan& plan) {
    return plan.apply_multiplier(u, linear_phases(plan, dt));
}

Field evolve_ssfm(const Field& u0, const SolverParams& params, const SpectralPlan& plan,
                  const StepObserver& observer) {
    // The exact flows stay well defined for ν = 0, so only the step sizes and ε are checked.
    SolverParams checked = params;
    checked.coeffs.nu = 1.0;
    checked.validate();
    if (!(params.coeffs.nu >= 0.0)) throw ConfigError("nu must be >= 0");
    require_same_grid(plan.grid(), u0.grid(), "evolve_ssfm");
    const long n_steps = params.steps();
    const double half = 0.5 * params.tau;
    const std::vector<cplx> phase = linear_phases(plan, params.tau);
    Field u = u0;
    for (long n = 0; n < n_steps; ++n) {
        u = nonlinear_substep(u, half, params.coeffs);
        u = plan.apply_multiplier(u, phase);
        u = nonlinear_substep(u, half, params.coeffs);
        if (observer) observer(n + 1, u, StepReport{});
    }
    return u;
}

}  // namespace cqnls
