#pragma once

#include "zs/common.hpp"
#include "zs/potentials.hpp"

namespace zs {

// Pole-avoiding integration path gamma(xi) = xi + i c sech(xi), xi in [-L, L].
struct Contour {
    double elevation = 1.0;    // c
    double half_length = 20.0; // L
    double margin = 0.05;      // minimum allowed distance from the path to any pole

    cplx map(double xi) const { return cplx(xi, elevation * sech(xi)); }
    cplx dmap(double xi) const {
        double ch = std::cosh(std::min(std::abs(xi), 300.0));
        double sh = std::tanh(xi) / ch;  // sinh/cosh^2, overflow-safe
        return cplx(1.0, -elevation * sh);
    }
};

// Pick an elevation from the fixed ladder c in {c_init * 2^j : j = -3..3},
// tried in order of |j| (j = 0, -1, +1, -2, +2, -3, +3), such that the path
// clears every known pole by more than margin. Known real poles and listed
// complex poles are checked by direct distance; when the constructor record
// carries a denominator, its zeros near the path are additionally excluded by
// overlapping argument-principle probes covering the margin tube. The margin
// itself is never adjusted.
Contour build_contour(const PotentialPair& p, double c_init = 1.0, double L = 20.0,
                      double margin = 0.05);

}  // namespace zs
