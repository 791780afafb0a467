#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cqnls {

using cplx = std::complex<double>;

/// Uniform Cartesian mesh on [a,b] x [c,d] with J x K cells, nodes (j,k) in {0..J} x {0..K}.
struct Grid2D {
    double a = 0, b = 1, c = 0, d = 1;
    int J = 2, K = 2;
    double dx = 0.5, dy = 0.5;

    double x(int j) const noexcept { return a + j * dx; }
    double y(int k) const noexcept { return c + k * dy; }
    double h() const noexcept { return dx > dy ? dx : dy; }
    double cell_area() const noexcept { return dx * dy; }

    std::size_t nodes() const noexcept { return std::size_t(J + 1) * std::size_t(K + 1); }
    std::size_t interior_nodes() const noexcept { return std::size_t(J - 1) * std::size_t(K - 1); }

    // Row-major in j, then k.
    std::size_t index(int j, int k) const noexcept { return std::size_t(j) * std::size_t(K + 1) + std::size_t(k); }

    bool on_boundary(int j, int k) const noexcept { return j == 0 || j == J || k == 0 || k == K; }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Throws InvalidGrid unless J, K >= 2, b > a and d > c.
Grid2D make_grid(double a, double b, double c, double d, int J, int K);

/// Complex grid function over all (J+1)(K+1) nodes.
/// Members of X_JK carry exact zeros on the boundary; in_X() checks that.
class Field {
public:
    Field() = default;
    explicit Field(const Grid2D& grid) : grid_(grid), values_(grid.nodes(), cplx{}) {}
    Field(const Grid2D& grid, std::vector<cplx> values);

    const Grid2D& grid() const noexcept { return grid_; }

    cplx& operator()(int j, int k) noexcept { return values_[grid_.index(j, k)]; }
    const cplx& operator()(int j, int k) const noexcept { return values_[grid_.index(j, k)]; }

    std::span<cplx> values() noexcept { return values_; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool in_X() const noexcept;
    void zero_boundary() noexcept;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(cplx s) noexcept;

    friend Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
    friend Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
    friend Field operator*(cplx s, Field f) { return f *= s; }

private:
    Grid2D grid_;
    std::vector<cplx> values_;
};

/// Throws ConfigError if the two grids differ.
void require_same_grid(const Grid2D& g1, const Grid2D& g2, const char* context);

/// Builds a field by sampling fn(x, y) at interior nodes; boundary stays zero.
template <typename Fn>
Field sample_interior(const Grid2D& grid, Fn&& fn) {
    Field f(grid);
    for (int j = 1; j < grid.J; ++j)
        for (int k = 1; k < grid.K; ++k) f(j, k) = cplx(fn(grid.x(j), grid.y(k)));
    return f;
}

enum class Axis { X, Y };

/// Five-point Laplacian at interior nodes, zero on the boundary.
Field apply_delta2(const Field& u);
/// Single-direction second difference (delta^2_x or delta^2_y), zero on the boundary.
Field apply_delta2(const Field& u, Axis axis);

/// Forward differences. gx(j,k) = (u(j+1,k)-u(j,k))/dx for j < J (all k);
/// gy(j,k) = (u(j,k+1)-u(j,k))/dy for k < K (all j). Remaining slots are zero.
struct Gradient {
    Field gx;
    Field gy;
};

Gradient apply_delta_plus(const Field& u);

enum class SumRange {
    Lower,     // j = 0..J-1, k = 0..K-1: the (.,.)_h bracket
    Interior,  // j = 1..J-1, k = 1..K-1: the <.,.>_h bracket
};

/// dx*dy * sum u * conj(v) over the chosen index range.
cplx inner_h(const Field& u, const Field& v, SumRange range = SumRange::Lower);

/// (delta+_x u, delta+_x v)_h + (delta+_y u, delta+_y v)_h.
cplx inner_h(const Gradient& du, const Gradient& dv);
/// Single-direction gradient inner product.
cplx inner_h(const Gradient& du, const Gradient& dv, Axis axis);

enum class Norm { L2, L4, L6, L8, Sup, Grad };

/// ||u||_{p,h}^p for p in {2,4,6,8}. Throws DomainError for any other p.
double lp_norm_pow(const Field& u, int p);
/// ||delta+ u||_{2,h}^2.
double grad_norm_sq(const Field& u);
double sup_norm(const Field& u);

/// The norm itself (not its power).
double norm(const Field& u, Norm which);

}  // namespace cqnls
