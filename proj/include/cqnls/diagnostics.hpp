#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "cqnls/cnfd.hpp"
#include "cqnls/grid.hpp"
#include "cqnls/nonlinearity.hpp"

namespace cqnls {

/// E_h(u) = ||δ⁺u||² − (λ/2)||u||₄⁴ + (ν/3)||u||₆⁶.
double discrete_energy(const Field& u, const CubicQuinticCoeffs& coeffs);

inline double discrete_mass(const Field& u) { return lp_norm_pow(u, 2); }

/// Peak modulus, used as the soliton amplitude measurement.
inline double amplitude(const Field& u) { return sup_norm(u); }

/// A(t) = A0 [1 + 2ε ||v0||₄⁴ ||v0||₂⁻² A0⁴ t]^(-1/2).
double amplitude_theory(double t, double A0, double epsilon, const Field& v0);

struct RelativeErrors {
    double e2 = 0;  // ||U − u_ref|| / ||u_ref||
    double e1 = 0;  // ||δ⁺(U − u_ref)|| / ||δ⁺u_ref||
};

/// Throws DomainError when the reference (or its gradient) has zero norm.
RelativeErrors relative_errors(const Field& u_num, const Field& u_ref);

struct ConservationErrors {
    double mass = 0;    // | ||U||² − M(u0) |
    double energy = 0;  // | E_h(U) − E(u0) |
};

ConservationErrors conservation_errors(const Field& u_n, double continuous_mass, double continuous_energy,
                                       const CubicQuinticCoeffs& coeffs);

/// rate_i = log2(e_i / e_{i+1}). Throws DomainError on fewer than two values or
/// a nonpositive entry.
std::vector<double> convergence_rates(const std::vector<double>& errors);

/// ||δ⁺u||² + (ν/6)||u||₆⁶ <= E_h(u) + (3λ²/8ν)||u||² + slack.
bool h1_energy_bound_holds(const Field& u, const CubicQuinticCoeffs& coeffs, double slack = 0.0);

struct TimeSeriesRecord {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> energy;
    std::vector<double> amplitude;
    std::vector<int> fp_iters;

    /// Appends one sample; throws ConfigError if t does not increase.
    void append(double t, const Field& u, const CubicQuinticCoeffs& coeffs, int fp_iterations);
    std::size_t size() const noexcept { return times.size(); }
};

struct ConvergenceReport {
    std::vector<std::pair<double, double>> levels;  // (h, τ)
    std::vector<double> e2;
    std::vector<double> e1;
    std::vector<double> rate2;
    std::vector<double> rate1;

    /// Appends a level; rates are recomputed once at least two levels exist.
    void add_level(double h, double tau, RelativeErrors errors);
};

/// Mass and energy of the continuous solution, E(u) = ||∇u||² − λ∫F₁(|u|²) + ν∫F₂(|u|²).
struct ContinuousInvariants {
    double mass = 0;
    double energy = 0;
};

/// Closed forms for u0 = (2/√π)(x+iy)exp(−(x²+y²)/2) on the whole plane:
/// mass 4, ||∇u0||² = 8, ∫|u0|⁴ = 4/π, ∫|u0|⁶ = 128/(27π²).
ContinuousInvariants gaussian_vortex_invariants(const CubicQuinticCoeffs& coeffs);

/// Discrete mass and energy of fn sampled on grids J and 2J over the same domain,
/// combined by Richardson extrapolation (4·fine − coarse)/3.
ContinuousInvariants richardson_invariants(const std::function<cplx(double, double)>& fn, const Grid2D& coarse,
                                           const CubicQuinticCoeffs& coeffs);

}  // namespace cqnls
