#pragma once

#include <complex>

namespace cqnls {

using cplx = std::complex<double>;

/// Coefficients of i u_t + Δu + λ|u|²u − ν|u|⁴u + iε|u|²u = 0.
struct CubicQuinticCoeffs {
    double lambda = 1.0;
    double nu = 1.0;
    double epsilon = 0.0;
};

/// Throws ConfigError unless nu > 0 and epsilon >= 0.
void validate(const CubicQuinticCoeffs& coeffs);

// Integrated difference quotients of F1, F2 between ρ = |z|² and σ = |w|².
// These are the forms used everywhere; the raw quotient is 0/0 at ρ = σ.
inline double quotient_F1(double rho, double sigma) noexcept { return 0.5 * (rho + sigma); }
inline double quotient_F2(double rho, double sigma) noexcept {
    return (rho * rho + sigma * sigma + rho * sigma) / 3.0;
}

/// ψ₁(z,w) = [(|z|²+|w|²)/2]·(z+w)/2
cplx psi1(cplx z, cplx w) noexcept;
/// ψ₂(z,w) = [(|z|⁴+|z|²|w|²+|w|⁴)/3]·(z+w)/2
cplx psi2(cplx z, cplx w) noexcept;
/// φ(z,w) = |m|²m with m = (z+w)/2
cplx varphi(cplx z, cplx w) noexcept;

enum class Primitive { F1 = 1, F2 = 2 };

/// F₁(ρ) = ρ²/2, F₂(ρ) = ρ³/3. Throws DomainError for ρ < 0.
double primitive_F(double rho, Primitive which);
/// f₁(s) = s, f₂(s) = s².
double density_f(double s, Primitive which) noexcept;

}  // namespace cqnls
