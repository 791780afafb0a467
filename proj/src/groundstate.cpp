#include "cqnls/groundstate.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "cqnls/error.hpp"
#include "cqnls/linsolve.hpp"
#include "cqnls/ssfm.hpp"

namespace cqnls {

namespace {

// δ²v + λ|v|²v − ν|v|⁴v
Field stationary_operator(const Field& v, const CubicQuinticCoeffs& coeffs) {
    Field out = apply_delta2(v);
    const Grid2D& g = v.grid();
    for (int j = 1; j < g.J; ++j) {
        for (int k = 1; k < g.K; ++k) {
            const double r = std::norm(v(j, k));
            out(j, k) += (coeffs.lambda * r - coeffs.nu * r * r) * v(j, k);
        }
    }
    return out;
}

double rayleigh_mu(const Field& v, const Field& Lv) {
    return std::real(inner_h(Lv, v, SumRange::Interior)) / lp_norm_pow(v, 2);
}

}  // namespace

double stationary_residual(const Field& v, double mu, const CubicQuinticCoeffs& coeffs) {
    Field r = stationary_operator(v, coeffs);
    r -= mu * v;
    return norm(r, Norm::L2);
}

GroundStateResult aitem_solve(const Grid2D& grid, const CubicQuinticCoeffs& coeffs, double power, const Field& seed,
                              const AitemOptions& opts) {
    validate(coeffs);
    require_same_grid(grid, seed.grid(), "aitem_solve");
    if (!(power > 0.0)) throw ConfigError("aitem_solve: target power must be > 0");
    if (!seed.in_X()) throw ConfigError("aitem_solve: seed must vanish on the boundary");
    if (!(opts.tol > 0.0) || opts.maxiter < 1) throw ConfigError("aitem_solve: bad tolerance or maxiter");

    Field v(grid);
    for (std::size_t i = 0; i < v.size(); ++i) v.values()[i] = std::real(seed.values()[i]);
    const double p0 = lp_norm_pow(v, 2);
    if (!(p0 > 0.0)) throw ConfigError("aitem_solve: seed must be real and nonzero");
    v *= std::sqrt(power / p0);

    Field Lv = stationary_operator(v, coeffs);
    double mu = rayleigh_mu(v, Lv);
    // M = c − δ², applied inversely. Without a fixed shift, c tracks the current μ.
    std::optional<SpectralPlan> plan;
    std::vector<double> fd_eig;
    if (opts.preconditioner == AitemPreconditioner::Spectral) {
        plan.emplace(grid);
        fd_eig = plan->fd_eigenvalues();
    }
    double c = 0.0;
    std::vector<double> inv_m(fd_eig.size());
    HelmholtzOperator neg_m;
    auto set_shift = [&](double next) {
        if (next == c) return;
        c = next;
        if (plan) {
            for (std::size_t i = 0; i < fd_eig.size(); ++i) inv_m[i] = 1.0 / (c - fd_eig[i]);
        } else {
            neg_m = shifted_laplacian(grid, cplx(-c));
        }
    };
    auto shift_for = [&](double mu_now) { return opts.shift > 0.0 ? opts.shift : std::max(1.0, 2.0 * std::abs(mu_now)); };
    set_shift(shift_for(mu));
    const KrylovOptions kopts{1e-12, 0};

    Field update(grid);
    for (int it = 0; it < opts.maxiter; ++it) {
        Field r = Lv;
        r -= mu * v;
        const double res = norm(r, Norm::L2);
        if (!std::isfinite(res)) throw NoGroundState("aitem_solve: iteration diverged");
        if (res <= opts.tol) return {v, mu, lp_norm_pow(v, 2), res, it};

        if (plan) {
            update = plan->apply_multiplier(r, inv_m);
        } else {
            Field neg_r = cplx(-1.0) * r;
            update = solve(neg_m, neg_r, kopts, &update).solution;
        }
        const double dt = opts.dt > 0.0 ? opts.dt : 0.8 / c;
        for (std::size_t i = 0; i < v.size(); ++i) v.values()[i] = std::real(v.values()[i] + dt * update.values()[i]);

        const double p = lp_norm_pow(v, 2);
        if (!(p > 0.0) || !std::isfinite(p)) throw NoGroundState("aitem_solve: iterate collapsed to zero");
        v *= std::sqrt(power / p);
        Lv = stationary_operator(v, coeffs);
        mu = rayleigh_mu(v, Lv);
        set_shift(shift_for(mu));
    }
    Field r = Lv;
    r -= mu * v;
    std::ostringstream os;
    os << "aitem_solve: no convergence in " << opts.maxiter << " iterations (residual " << norm(r, Norm::L2) << ")";
    throw NoGroundState(os.str());
}

Field sech_seed(const Grid2D& grid) {
    return sample_interior(grid, [](double x, double y) { return 1.0 / std::cosh(x * x + y * y); });
}

namespace {

// Bilinear sample of v at physical point (x, y); zero outside the grid.
cplx bilinear(const Field& v, double x, double y) {
    const Grid2D& g = v.grid();
    const double s = (x - g.a) / g.dx;
    const double t = (y - g.c) / g.dy;
    if (s < 0.0 || t < 0.0 || s > g.J || t > g.K) return {};
    int j = std::min(int(std::floor(s)), g.J - 1);
    int k = std::min(int(std::floor(t)), g.K - 1);
    const double fs = s - j;
    const double ft = t - k;
    return (1 - fs) * (1 - ft) * v(j, k) + fs * (1 - ft) * v(j + 1, k) + (1 - fs) * ft * v(j, k + 1) +
           fs * ft * v(j + 1, k + 1);
}

// Integer node offset if `shift` is a multiple of `step` to 1e-9.
std::optional<int> node_offset(double shift, double step) {
    const double m = shift / step;
    const double r = std::round(m);
    if (std::abs(m - r) <= 1e-9 * std::max(1.0, std::abs(m))) return int(r);
    return std::nullopt;
}

}  // namespace

SolitonIC build_soliton_ic(const Field& v0, const SolitonICParams& p) {
    const Grid2D& g = v0.grid();
    const auto oj = node_offset(p.x0, g.dx);
    const auto ok = node_offset(p.y0, g.dy);

    SolitonIC out{Field(g), false, 0.0};
    for (int j = 1; j < g.J; ++j) {
        for (int k = 1; k < g.K; ++k) {
            const double X = g.x(j) - p.x0;
            const double Y = g.y(k) - p.y0;
            cplx amp;
            if (oj && ok) {
                const int sj = j - *oj;
                const int sk = k - *ok;
                amp = (sj >= 0 && sj <= g.J && sk >= 0 && sk <= g.K) ? v0(sj, sk) : cplx{};
            } else {
                amp = bilinear(v0, X, Y);
            }
            out.u0(j, k) = p.A0 * amp * std::polar(1.0, p.alpha0 + 0.5 * (p.d1 * X + p.d2 * Y));
        }
    }

    // Profile power whose shifted position lands on or beyond the boundary.
    double lost = 0.0, total = 0.0;
    for (int j = 0; j <= g.J; ++j) {
        for (int k = 0; k <= g.K; ++k) {
            const double w = std::norm(v0(j, k));
            total += w;
            const double x = g.x(j) + p.x0;
            const double y = g.y(k) + p.y0;
            const double tol = 1e-12 * (g.b - g.a + g.d - g.c);
            if (x <= g.a + tol || x >= g.b - tol || y <= g.c + tol || y >= g.d - tol) lost += w;
        }
    }
    out.lost_fraction = total > 0.0 ? lost / total : 0.0;
    out.truncated = out.lost_fraction > 1e-6;
    return out;
}

Field gaussian_vortex_ic(const Grid2D& grid) {
    const double amp = 2.0 / std::sqrt(std::numbers::pi);
    return sample_interior(grid, [amp](double x, double y) {
        return amp * cplx(x, y) * std::exp(-0.5 * (x * x + y * y));
    });
}

}  // namespace cqnls
