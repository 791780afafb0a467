#pragma once

#include <functional>

#include "cqnls/grid.hpp"
#include "cqnls/linsolve.hpp"
#include "cqnls/nonlinearity.hpp"

namespace cqnls {

struct SolverParams {
    CubicQuinticCoeffs coeffs;
    double tau = 1.0 / 32;
    double t_final = 1.0;
    double fp_tol = 1e-8;
    int fp_maxiter = 100;
    double lin_tol = 1e-12;
    int lin_maxiter = 0;  // 0 selects the grid-dependent default

    /// Throws ConfigError on τ <= 0, fp_tol outside (0,1), t_final < τ,
    /// or t_final not an integer multiple of τ (relative 1e-9).
    void validate() const;
    /// N = round(t_final / τ).
    long steps() const;
};

struct StepReport {
    int fixed_point_iters = 0;
    double final_fp_residual = 0;
    long total_krylov_iters = 0;
};

struct StepResult {
    Field u;
    StepReport report;
};

/// One Crank-Nicolson step solved by fixed-point iteration on the frozen-coefficient
/// linear system. Stops when ||U^{l+1}-U^l|| / ||U^{l+1}|| <= fp_tol (absolute when
/// ||U^{l+1}|| = 0). Throws StepFailure after fp_maxiter passes.
StepResult step(const Field& u_n, const SolverParams& params);

using StepObserver = std::function<void(long step_index, const Field& u, const StepReport& report)>;

/// Applies step() N times; observer (if set) sees every U^{n+1} with n+1 as the index.
Field evolve(const Field& u0, const SolverParams& params, const StepObserver& observer = {});

/// Pointwise residual of the nonlinear scheme at interior nodes:
/// i(U¹-U⁰)/τ + δ²(U¹+U⁰)/2 + λψ₁(U¹,U⁰) − νψ₂(U¹,U⁰) + iεφ(U¹,U⁰).
Field scheme_residual(const Field& u_n, const Field& u_next, double tau, const CubicQuinticCoeffs& coeffs);

}  // namespace cqnls
