#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace zs {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

inline cplx det2(const Vec2& u, const Vec2& v) { return u[0] * v[1] - u[1] * v[0]; }

inline double max_abs(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

// sech that stays finite for large |Re z| instead of overflowing cosh
inline cplx sech(cplx z) {
    if (std::abs(z.real()) > 300.0) return 0.0;
    return 1.0 / std::cosh(z);
}

inline double sech(double x) {
    if (std::abs(x) > 300.0) return 0.0;
    return 1.0 / std::cosh(x);
}

}  // namespace zs
