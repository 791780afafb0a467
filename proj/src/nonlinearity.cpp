#include "cqnls/nonlinearity.hpp"

#include <cmath>

#include "cqnls/error.hpp"

namespace cqnls {

void validate(const CubicQuinticCoeffs& coeffs) {
    if (!std::isfinite(coeffs.lambda)) throw ConfigError("lambda must be finite");
    if (!(coeffs.nu > 0.0) || !std::isfinite(coeffs.nu)) throw ConfigError("nu must be > 0");
    if (!(coeffs.epsilon >= 0.0) || !std::isfinite(coeffs.epsilon)) throw ConfigError("epsilon must be >= 0");
}

cplx psi1(cplx z, cplx w) noexcept {
    return quotient_F1(std::norm(z), std::norm(w)) * (0.5 * (z + w));
}

cplx psi2(cplx z, cplx w) noexcept {
    return quotient_F2(std::norm(z), std::norm(w)) * (0.5 * (z + w));
}

cplx varphi(cplx z, cplx w) noexcept {
    const cplx m = 0.5 * (z + w);
    return std::norm(m) * m;
}

double primitive_F(double rho, Primitive which) {
    if (rho < 0.0) throw DomainError("primitive_F: rho must be >= 0");
    return which == Primitive::F1 ? 0.5 * rho * rho : rho * rho * rho / 3.0;
}

double density_f(double s, Primitive which) noexcept { return which == Primitive::F1 ? s : s * s; }

}  // namespace cqnls
