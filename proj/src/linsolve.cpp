#include "cqnls/linsolve.hpp"

#include <cmath>
#include <sstream>

#include "cqnls/error.hpp"
#include "cqnls/summation.hpp"

namespace cqnls {

namespace {

using Vec = std::vector<cplx>;

// Conjugate-linear in the first argument: sum conj(a_i) b_i.
cplx dot(const Vec& a, const Vec& b) {
    return pairwise_sum<cplx>(a.size(), [&](std::size_t i) { return std::conj(a[i]) * b[i]; });
}

double norm2(const Vec& a) {
    return std::sqrt(pairwise_sum<double>(a.size(), [&](std::size_t i) { return std::norm(a[i]); }));
}

// out = op * in on packed interior vectors.
void apply_packed(const HelmholtzOperator& op, const Vec& in, Vec& out) {
    const int nj = op.grid.J - 1;
    const int nk = op.grid.K - 1;
    const double ix2 = 1.0 / (op.grid.dx * op.grid.dx);
    const double iy2 = 1.0 / (op.grid.dy * op.grid.dy);
    const cplx centre = op.shift - 2.0 * ix2 - 2.0 * iy2;
    out.resize(in.size());
    for (int j = 0; j < nj; ++j) {
        const std::size_t base = std::size_t(j) * std::size_t(nk);
        for (int k = 0; k < nk; ++k) {
            const std::size_t i = base + std::size_t(k);
            cplx acc = (centre + op.coeff[i]) * in[i];
            cplx lat{};
            if (j > 0) lat += in[i - std::size_t(nk)];
            if (j + 1 < nj) lat += in[i + std::size_t(nk)];
            acc += lat * ix2;
            cplx lon{};
            if (k > 0) lon += in[i - 1];
            if (k + 1 < nk) lon += in[i + 1];
            acc += lon * iy2;
            out[i] = acc;
        }
    }
}

}  // namespace

std::vector<cplx> pack_interior(const Field& f) {
    const Grid2D& g = f.grid();
    Vec v;
    v.reserve(g.interior_nodes());
    for (int j = 1; j < g.J; ++j)
        for (int k = 1; k < g.K; ++k) v.push_back(f(j, k));
    return v;
}

Field unpack_interior(const Grid2D& g, const std::vector<cplx>& v) {
    Field f(g);
    std::size_t i = 0;
    for (int j = 1; j < g.J; ++j)
        for (int k = 1; k < g.K; ++k) f(j, k) = v[i++];
    return f;
}

HelmholtzOperator build_operator(const Grid2D& grid, double tau, const Field& u_prev, const Field& u_iter,
                                 const CubicQuinticCoeffs& coeffs) {
    require_same_grid(grid, u_prev.grid(), "build_operator (u_prev)");
    require_same_grid(grid, u_iter.grid(), "build_operator (u_iter)");
    if (!(tau > 0.0)) throw ConfigError("build_operator: tau must be > 0");
    HelmholtzOperator op;
    op.grid = grid;
    op.shift = cplx(0.0, 2.0 / tau);
    op.coeff.reserve(grid.interior_nodes());
    for (int j = 1; j < grid.J; ++j) {
        for (int k = 1; k < grid.K; ++k) {
            const cplx a = u_iter(j, k);
            const cplx b = u_prev(j, k);
            const double ra = std::norm(a);
            const double rb = std::norm(b);
            const double mid = std::norm(0.5 * (a + b));
            op.coeff.emplace_back(coeffs.lambda * quotient_F1(ra, rb) - coeffs.nu * quotient_F2(ra, rb),
                                  coeffs.epsilon * mid);
        }
    }
    return op;
}

HelmholtzOperator shifted_laplacian(const Grid2D& grid, cplx shift) {
    HelmholtzOperator op;
    op.grid = grid;
    op.shift = shift;
    op.coeff.assign(grid.interior_nodes(), cplx{});
    return op;
}

Field apply(const HelmholtzOperator& op, const Field& w) {
    require_same_grid(op.grid, w.grid(), "apply");
    Vec out;
    apply_packed(op, pack_interior(w), out);
    return unpack_interior(op.grid, out);
}

int default_maxiter(const Grid2D& grid) {
    return int(10.0 * std::sqrt(double(grid.interior_nodes()))) + 200;
}

SolveResult solve(const HelmholtzOperator& op, const Field& rhs, const KrylovOptions& opts, const Field* guess) {
    require_same_grid(op.grid, rhs.grid(), "solve");
    if (!(opts.tol > 0.0)) throw ConfigError("solve: tol must be > 0");
    const int maxiter = opts.maxiter > 0 ? opts.maxiter : default_maxiter(op.grid);

    const Vec b = pack_interior(rhs);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return {Field(op.grid), 0, 0.0};
    const double target = opts.tol * bnorm;

    const std::size_t n = b.size();
    Vec inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) inv_diag[i] = 1.0 / op.diagonal(i);

    Vec x = guess ? pack_interior(*guess) : Vec(n, cplx{});
    Vec r(n), tmp(n);
    auto true_residual = [&]() {
        apply_packed(op, x, tmp);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
        return norm2(r);
    };

    double rnorm = true_residual();
    if (rnorm <= target) return {unpack_interior(op.grid, x), 0, rnorm / bnorm};

    Vec rhat = r, p(n, cplx{}), v(n, cplx{}), y(n), s(n), z(n), t(n);
    cplx rho(1.0), alpha(1.0), omega(1.0);
    int restarts = 0;
    constexpr int max_restarts = 8;

    auto restart = [&]() {
        rnorm = true_residual();
        rhat = r;
        std::fill(p.begin(), p.end(), cplx{});
        std::fill(v.begin(), v.end(), cplx{});
        rho = alpha = omega = cplx(1.0);
        ++restarts;
    };

    for (int it = 1; it <= maxiter; ++it) {
        const cplx rho_new = dot(rhat, r);
        if (std::abs(rho_new) == 0.0 || std::abs(omega) == 0.0) {
            if (restarts >= max_restarts) break;
            restart();
            if (rnorm <= target) return {unpack_interior(op.grid, x), it, rnorm / bnorm};
            continue;
        }
        const cplx beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        for (std::size_t i = 0; i < n; ++i) y[i] = inv_diag[i] * p[i];
        apply_packed(op, y, v);
        const cplx rv = dot(rhat, v);
        if (std::abs(rv) == 0.0) {
            if (restarts >= max_restarts) break;
            restart();
            continue;
        }
        alpha = rho / rv;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) <= target) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
            rnorm = true_residual();
            if (rnorm <= target) return {unpack_interior(op.grid, x), it, rnorm / bnorm};
            restart();
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * s[i];
        apply_packed(op, z, t);
        const double tt = std::real(dot(t, t));
        omega = tt > 0.0 ? dot(t, s) / tt : cplx{};
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        rnorm = norm2(r);
        if (rnorm <= target) {
            // Recursive residual can drift from b - Ax; confirm before returning.
            rnorm = true_residual();
            if (rnorm <= target) return {unpack_interior(op.grid, x), it, rnorm / bnorm};
            if (restarts >= max_restarts) break;
            restart();
        }
    }
    rnorm = true_residual();
    std::ostringstream os;
    os << "BiCGSTAB did not converge: relative residual " << rnorm / bnorm << " > tol " << opts.tol << " after "
       << maxiter << " iterations";
    throw NoConvergence(os.str(), rnorm / bnorm, maxiter);
}

}  // namespace cqnls
