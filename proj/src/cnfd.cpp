#include "cqnls/cnfd.hpp"

#include <cmath>
#include <sstream>

#include "cqnls/error.hpp"

namespace cqnls {

void SolverParams::validate() const {
    cqnls::validate(coeffs);
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be > 0");
    if (!(fp_tol > 0.0 && fp_tol < 1.0)) throw ConfigError("fp_tol must lie in (0, 1)");
    if (fp_maxiter < 1) throw ConfigError("fp_maxiter must be >= 1");
    if (!(lin_tol > 0.0)) throw ConfigError("lin_tol must be > 0");
    if (!(t_final >= tau * (1.0 - 1e-9))) throw ConfigError("t_final must be >= tau");
    const double ratio = t_final / tau;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        std::ostringstream os;
        os << "t_final = " << t_final << " is not an integer multiple of tau = " << tau;
        throw ConfigError(os.str());
    }
}

long SolverParams::steps() const { return std::lround(t_final / tau); }

StepResult step(const Field& u_n, const SolverParams& params) {
    params.validate();
    if (!u_n.in_X()) throw ConfigError("step: initial field must vanish on the boundary");
    const Grid2D& g = u_n.grid();
    const Field d2un = apply_delta2(u_n);
    const cplx shift(0.0, 2.0 / params.tau);
    const KrylovOptions kopts{params.lin_tol, params.lin_maxiter};

    StepReport report;
    std::vector<double> history;
    Field iterate = u_n;
    for (int l = 0; l < params.fp_maxiter; ++l) {
        const HelmholtzOperator op = build_operator(g, params.tau, u_n, iterate, params.coeffs);
        Field rhs(g);
        std::size_t i = 0;
        for (int j = 1; j < g.J; ++j)
            for (int k = 1; k < g.K; ++k, ++i) rhs(j, k) = (shift - op.coeff[i]) * u_n(j, k) - d2un(j, k);

        SolveResult sol = solve(op, rhs, kopts, &iterate);
        report.total_krylov_iters += sol.iterations;

        const double diff = norm(sol.solution - iterate, Norm::L2);
        const double size = norm(sol.solution, Norm::L2);
        const double crit = size > 0.0 ? diff / size : diff;
        history.push_back(crit);
        iterate = std::move(sol.solution);
        report.fixed_point_iters = l + 1;
        report.final_fp_residual = crit;
        if (crit <= params.fp_tol) return {std::move(iterate), report};
    }
    std::ostringstream os;
    os << "fixed-point iteration did not converge in " << params.fp_maxiter << " passes (last increment "
       << history.back() << ")";
    throw StepFailure(os.str(), std::move(history));
}

Field evolve(const Field& u0, const SolverParams& params, const StepObserver& observer) {
    params.validate();
    const long n_steps = params.steps();
    Field u = u0;
    for (long n = 0; n < n_steps; ++n) {
        StepResult r;
        try {
            r = step(u, params);
        } catch (const StepFailure& e) {
            std::ostringstream os;
            os << "step " << n << ": " << e.what();
            throw StepFailure(os.str(), e.history(), n);
        }
        u = std::move(r.u);
        if (observer) observer(n + 1, u, r.report);
    }
    return u;
}

Field scheme_residual(const Field& u_n, const Field& u_next, double tau, const CubicQuinticCoeffs& coeffs) {
    require_same_grid(u_n.grid(), u_next.grid(), "scheme_residual");
    const Grid2D& g = u_n.grid();
    const Field lap = apply_delta2(0.5 * (u_next + u_n));
    const cplx I(0.0, 1.0);
    Field res(g);
    for (int j = 1; j < g.J; ++j) {
        for (int k = 1; k < g.K; ++k) {
            const cplx z = u_next(j, k);
            const cplx w = u_n(j, k);
            res(j, k) = I * (z - w) / tau + lap(j, k) + coeffs.lambda * psi1(z, w) - coeffs.nu * psi2(z, w) +
                        I * coeffs.epsilon * varphi(z, w);
        }
    }
    return res;
}

}  // namespace cqnls
