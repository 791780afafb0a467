#include "cqnls/grid.hpp"

#include <cmath>
#include <sstream>

#include "cqnls/error.hpp"
#include "cqnls/summation.hpp"

namespace cqnls {

Grid2D make_grid(double a, double b, double c, double d, int J, int K) {
    if (J < 2 || K < 2) {
        std::ostringstream os;
        os << "invalid grid: need J, K >= 2 (got J=" << J << ", K=" << K << ")";
        throw InvalidGrid(os.str());
    }
    if (!(b > a) || !(d > c) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
        !std::isfinite(d)) {
        throw InvalidGrid("invalid grid: domain bounds must satisfy b > a, d > c");
    }
    Grid2D g;
    g.a = a;
    g.b = b;
    g.c = c;
    g.d = d;
    g.J = J;
    g.K = K;
    g.dx = (b - a) / J;
    g.dy = (d - c) / K;
    return g;
}

Field::Field(const Grid2D& grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.nodes()) throw ConfigError("field size does not match grid");
}

bool Field::in_X() const noexcept {
    for (int j = 0; j <= grid_.J; ++j) {
        if ((*this)(j, 0) != cplx{} || (*this)(j, grid_.K) != cplx{}) return false;
    }
    for (int k = 0; k <= grid_.K; ++k) {
        if ((*this)(0, k) != cplx{} || (*this)(grid_.J, k) != cplx{}) return false;
    }
    return true;
}

void Field::zero_boundary() noexcept {
    for (int j = 0; j <= grid_.J; ++j) (*this)(j, 0) = (*this)(j, grid_.K) = cplx{};
    for (int k = 0; k <= grid_.K; ++k) (*this)(0, k) = (*this)(grid_.J, k) = cplx{};
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(grid_, other.grid_, "field addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(grid_, other.grid_, "field subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Field& Field::operator*=(cplx s) noexcept {
    for (auto& v : values_) v *= s;
    return *this;
}

void require_same_grid(const Grid2D& g1, const Grid2D& g2, const char* context) {
    if (!(g1 == g2)) throw ConfigError(std::string("grid mismatch in ") + context);
}

Field apply_delta2(const Field& u) {
    const Grid2D& g = u.grid();
    const double ix2 = 1.0 / (g.dx * g.dx);
    const double iy2 = 1.0 / (g.dy * g.dy);
    const std::size_t row = std::size_t(g.K + 1);
    Field out(g);
    const cplx* in = u.values().data();
    cplx* res = out.values().data();
    for (int j = 1; j < g.J; ++j) {
        const std::size_t base = g.index(j, 0);
        for (int k = 1; k < g.K; ++k) {
            const std::size_t i = base + std::size_t(k);
            const cplx c2 = 2.0 * in[i];
            res[i] = (in[i + row] - c2 + in[i - row]) * ix2 + (in[i + 1] - c2 + in[i - 1]) * iy2;
        }
    }
    return out;
}

Field apply_delta2(const Field& u, Axis axis) {
    const Grid2D& g = u.grid();
    Field out(g);
    if (axis == Axis::X) {
        const double ix2 = 1.0 / (g.dx * g.dx);
        for (int j = 1; j < g.J; ++j)
            for (int k = 1; k < g.K; ++k) out(j, k) = (u(j + 1, k) - 2.0 * u(j, k) + u(j - 1, k)) * ix2;
    } else {
        const double iy2 = 1.0 / (g.dy * g.dy);
        for (int j = 1; j < g.J; ++j)
            for (int k = 1; k < g.K; ++k) out(j, k) = (u(j, k + 1) - 2.0 * u(j, k) + u(j, k - 1)) * iy2;
    }
    return out;
}

Gradient apply_delta_plus(const Field& u) {
    const Grid2D& g = u.grid();
    Gradient grad{Field(g), Field(g)};
    for (int j = 0; j < g.J; ++j)
        for (int k = 0; k <= g.K; ++k) grad.gx(j, k) = (u(j + 1, k) - u(j, k)) / g.dx;
    for (int j = 0; j <= g.J; ++j)
        for (int k = 0; k < g.K; ++k) grad.gy(j, k) = (u(j, k + 1) - u(j, k)) / g.dy;
    return grad;
}

namespace {

// dx*dy * sum over rows [j0, j1) and columns [k0, k1) of term(j, k), pairwise in both directions.
template <typename T, typename Term>
T grid_sum(const Grid2D& g, int j0, int j1, int k0, int k1, Term&& term) {
    const T s = pairwise_sum<T>(std::size_t(j1 - j0), [&](std::size_t jj) {
        const int j = j0 + int(jj);
        return pairwise_sum<T>(std::size_t(k1 - k0), [&](std::size_t kk) { return term(j, k0 + int(kk)); });
    });
    return s * g.cell_area();
}

template <typename T, typename Term>
T lower_sum(const Grid2D& g, Term&& term) {
    return grid_sum<T>(g, 0, g.J, 0, g.K, std::forward<Term>(term));
}

}  // namespace

cplx inner_h(const Field& u, const Field& v, SumRange range) {
    require_same_grid(u.grid(), v.grid(), "inner_h");
    const Grid2D& g = u.grid();
    auto term = [&](int j, int k) { return u(j, k) * std::conj(v(j, k)); };
    if (range == SumRange::Interior) return grid_sum<cplx>(g, 1, g.J, 1, g.K, term);
    return lower_sum<cplx>(g, term);
}

cplx inner_h(const Gradient& du, const Gradient& dv, Axis axis) {
    const Field& a = axis == Axis::X ? du.gx : du.gy;
    const Field& b = axis == Axis::X ? dv.gx : dv.gy;
    return inner_h(a, b, SumRange::Lower);
}

cplx inner_h(const Gradient& du, const Gradient& dv) {
    return inner_h(du, dv, Axis::X) + inner_h(du, dv, Axis::Y);
}

double lp_norm_pow(const Field& u, int p) {
    const Grid2D& g = u.grid();
    switch (p) {
        case 2:
            return lower_sum<double>(g, [&](int j, int k) { return std::norm(u(j, k)); });
        case 4:
            return lower_sum<double>(g, [&](int j, int k) {
                const double r = std::norm(u(j, k));
                return r * r;
            });
        case 6:
            return lower_sum<double>(g, [&](int j, int k) {
                const double r = std::norm(u(j, k));
                return r * r * r;
            });
        case 8:
            return lower_sum<double>(g, [&](int j, int k) {
                const double r = std::norm(u(j, k));
                return (r * r) * (r * r);
            });
        default:
            throw DomainError("unsupported p-norm: p must be 2, 4, 6 or 8");
    }
}

double grad_norm_sq(const Field& u) {
    const Grid2D& g = u.grid();
    // Forward differences over j, k = 0..J-1, 0..K-1, matching ||delta+_x u||^2 + ||delta+_y u||^2.
    return lower_sum<double>(g, [&](int j, int k) {
        const cplx ex = (u(j + 1, k) - u(j, k)) / g.dx;
        const cplx ey = (u(j, k + 1) - u(j, k)) / g.dy;
        return std::norm(ex) + std::norm(ey);
    });
}

double sup_norm(const Field& u) {
    double m = 0;
    for (const cplx& v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

double norm(const Field& u, Norm which) {
    switch (which) {
        case Norm::L2: return std::sqrt(lp_norm_pow(u, 2));
        case Norm::L4: return std::pow(lp_norm_pow(u, 4), 0.25);
        case Norm::L6: return std::pow(lp_norm_pow(u, 6), 1.0 / 6.0);
        case Norm::L8: return std::pow(lp_norm_pow(u, 8), 0.125);
        case Norm::Sup: return sup_norm(u);
        case Norm::Grad: return std::sqrt(grad_norm_sq(u));
    }
    throw DomainError("unknown norm");
}

}  // namespace cqnls
