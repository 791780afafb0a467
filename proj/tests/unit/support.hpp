#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "cqnls/grid.hpp"
#include "cqnls/linsolve.hpp"

namespace testsupport {

using cqnls::cplx;

// Random member of X_JK with entries uniform in the unit square.
inline cqnls::Field random_field(const cqnls::Grid2D& g, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cqnls::Field f(g);
    for (int j = 1; j < g.J; ++j)
        for (int k = 1; k < g.K; ++k) f(j, k) = scale * cplx(u(rng), u(rng));
    return f;
}

inline cqnls::Field spike(const cqnls::Grid2D& g, int j, int k) {
    cqnls::Field f(g);
    f(j, k) = 1.0;
    return f;
}

inline double max_abs_diff(const cqnls::Field& a, const cqnls::Field& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

// Column-by-column assembly of the matrix-free operator on interior unknowns.
inline std::vector<std::vector<cplx>> assemble(const cqnls::HelmholtzOperator& op) {
    const std::size_t n = op.unknowns();
    std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n));
    std::vector<cplx> e(n);
    for (std::size_t c = 0; c < n; ++c) {
        e.assign(n, cplx{});
        e[c] = 1.0;
        const auto col = cqnls::pack_interior(cqnls::apply(op, cqnls::unpack_interior(op.grid, e)));
        for (std::size_t r = 0; r < n; ++r) a[r][c] = col[r];
    }
    return a;
}

// Gaussian elimination with partial pivoting.
inline std::vector<cplx> dense_solve(std::vector<std::vector<cplx>> a, std::vector<cplx> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) == 0.0) throw std::runtime_error("singular matrix");
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const cplx f = a[r][c] / a[c][c];
            if (f == cplx{}) continue;
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t i = n; i-- > 0;) {
        cplx s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

inline double vec_norm(const std::vector<cplx>& v) {
    double s = 0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace testsupport
