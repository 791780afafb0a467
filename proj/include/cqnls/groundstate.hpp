#pragma once

#include "cqnls/grid.hpp"
#include "cqnls/nonlinearity.hpp"

namespace cqnls {

struct GroundStateResult {
    Field profile;  // real values stored as complex
    double mu = 0;
    double power = 0;
    double residual = 0;
    int iterations = 0;
};

enum class AitemPreconditioner {
    Spectral,  // exact (c − δ²)⁻¹ in the sine basis
    Krylov,    // BiCGSTAB on the same shifted five-point operator
};

struct AitemOptions {
    double tol = 1e-9;
    int maxiter = 20000;
    double shift = 0;  // c; 0 selects max(1, 2|μ(seed)|)
    double dt = 0;     // imaginary-time step; 0 selects 0.8/c
    AitemPreconditioner preconditioner = AitemPreconditioner::Spectral;
};

/// Power-normalised accelerated imaginary-time iteration for
/// δ²v + λv³ − νv⁵ = μv with ||v||²_{2,h} = P. Stops when
/// ||δ²v + λv³ − νv⁵ − μv||_{2,h} <= tol. Throws NoGroundState on maxiter
/// or collapse, ConfigError on a bad seed or P <= 0.
GroundStateResult aitem_solve(const Grid2D& grid, const CubicQuinticCoeffs& coeffs, double power, const Field& seed,
                              const AitemOptions& opts = {});

/// ||δ²v + λ|v|²v − ν|v|⁴v − μv||_{2,h}.
double stationary_residual(const Field& v, double mu, const CubicQuinticCoeffs& coeffs);

/// sech(x² + y²) on the interior.
Field sech_seed(const Grid2D& grid);

struct SolitonICParams {
    double A0 = 1;
    double x0 = 0, y0 = 0;
    double d1 = 0, d2 = 0;
    double alpha0 = 0;
};

struct SolitonIC {
    Field u0;
    bool truncated = false;   // more than 1e-6 of the profile power left the domain
    double lost_fraction = 0;
};

/// u0 = A0 v0(x−x0, y−y0) exp(i α0 + i(d1(x−x0) + d2(y−y0))/2). Grid-aligned shifts
/// copy nodes; others interpolate bilinearly. The boundary is forced to zero.
SolitonIC build_soliton_ic(const Field& v0, const SolitonICParams& p);

/// (2/√π)(x+iy)exp(−(x²+y²)/2), boundary forced to zero.
Field gaussian_vortex_ic(const Grid2D& grid);

}  // namespace cqnls
