#pragma once

#include <vector>

#include "cqnls/grid.hpp"
#include "cqnls/nonlinearity.hpp"

namespace cqnls {

/// Matrix-free operator W ↦ shift·W + δ²W + coeff∘W on X_JK.
/// For the CNFD linearization shift = 2i/τ; coeff lives on interior nodes only,
/// packed as (j-1)*(K-1) + (k-1).
struct HelmholtzOperator {
    Grid2D grid;
    cplx shift{};
    std::vector<cplx> coeff;

    std::size_t unknowns() const noexcept { return grid.interior_nodes(); }
    cplx diagonal(std::size_t i) const noexcept {
        return shift - 2.0 / (grid.dx * grid.dx) - 2.0 / (grid.dy * grid.dy) + coeff[i];
    }
};

/// Frozen-coefficient operator of one fixed-point pass:
/// coeff = λ·q₁ − ν·q₂ + iε|(u_iter+u_prev)/2|², shift = 2i/τ.
HelmholtzOperator build_operator(const Grid2D& grid, double tau, const Field& u_prev, const Field& u_iter,
                                 const CubicQuinticCoeffs& coeffs);

/// shift·W + δ²W with no coefficient field.
HelmholtzOperator shifted_laplacian(const Grid2D& grid, cplx shift);

Field apply(const HelmholtzOperator& op, const Field& w);

struct SolveResult {
    Field solution;
    int iterations = 0;
    double relative_residual = 0;
};

struct KrylovOptions {
    double tol = 1e-12;
    int maxiter = 0;  // 0 selects 10*sqrt(unknowns) + 200
};

int default_maxiter(const Grid2D& grid);

/// Jacobi-preconditioned BiCGSTAB. On return
/// ||apply(op, W) - rhs||_{2,h} <= tol * ||rhs||_{2,h}; otherwise throws NoConvergence.
/// `guess`, when given, is the starting iterate.
SolveResult solve(const HelmholtzOperator& op, const Field& rhs, const KrylovOptions& opts = {},
                  const Field* guess = nullptr);

/// Interior packing helpers shared with other solvers.
std::vector<cplx> pack_interior(const Field& f);
Field unpack_interior(const Grid2D& grid, const std::vector<cplx>& v);

}  // namespace cqnls
