#pragma once

#include <memory>
#include <vector>

#include "cqnls/cnfd.hpp"
#include "cqnls/grid.hpp"
#include "cqnls/nonlinearity.hpp"

namespace cqnls {

/// Two-dimensional sine transform (DST-I) over the interior nodes of a grid.
/// Mode (p, q), p = 1..J-1, q = 1..K-1, is stored at (p-1)*(K-1) + (q-1).
/// Copies share the underlying FFTW plan; all member functions are const and
/// safe to call concurrently.
class SpectralPlan {
public:
    explicit SpectralPlan(const Grid2D& grid);

    const Grid2D& grid() const noexcept { return grid_; }

    /// Continuous Dirichlet Laplacian eigenvalues -(pπ/(b-a))² - (qπ/(d-c))².
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    /// Eigenvalues of the five-point operator δ² on the same modes:
    /// -(4/dx²)sin²(pπ/2J) - (4/dy²)sin²(qπ/2K).
    std::vector<double> fd_eigenvalues() const;

    /// Unnormalised forward transform of the interior values.
    std::vector<cplx> forward(const Field& u) const;
    /// Inverse of forward(); boundary of the result is zero.
    Field inverse(std::vector<cplx> modes) const;

    /// u ↦ S⁻¹ diag(m) S u for a per-mode multiplier m.
    Field apply_multiplier(const Field& u, const std::vector<cplx>& multiplier) const;
    Field apply_multiplier(const Field& u, const std::vector<double>& multiplier) const;

private:
    void transform(std::vector<cplx>& data) const;

    Grid2D grid_;
    std::vector<double> eigenvalues_;
    std::shared_ptr<void> plan_;
};

/// Exact flow of i u_t + λ|u|²u − ν|u|⁴u + iε|u|²u = 0 over dt, node by node.
/// Throws DomainError where 1 + 2ε|u|²dt <= 0.
Field nonlinear_substep(const Field& u, double dt, const CubicQuinticCoeffs& coeffs);

/// Exact flow of i u_t + Δu = 0 over dt in the sine basis.
Field linear_substep(const Field& u, double dt, const SpectralPlan& plan);

/// N = round(t_final/τ) Strang steps: nonlinear τ/2, linear τ, nonlinear τ/2.
/// observer (if set) sees each U^{n+1}; its StepReport is empty.
Field evolve_ssfm(const Field& u0, const SolverParams& params, const SpectralPlan& plan,
                  const StepObserver& observer = {});

}  // namespace cqnls
