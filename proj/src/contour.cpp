#include "zs/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "zs/errors.hpp"

namespace zs {

namespace {

// min over xi of |gamma(xi) - z|, coarse scan plus golden-section polish
double distance_to_point(const Contour& ct, cplx z) {
    const double L = ct.half_length;
    double best = std::numeric_limits<double>::infinity(), best_xi = -L;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        double xi = -L + 2.0 * L * i / n;
        double d = std::abs(ct.map(xi) - z);
        if (d < best) {
            best = d;
            best_xi = xi;
        }
    }
    double a = std::max(-L, best_xi - 2.0 * L / n), b = std::min(L, best_xi + 2.0 * L / n);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = std::abs(ct.map(x1) - z), f2 = std::abs(ct.map(x2) - z);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = std::abs(ct.map(x1) - z);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = std::abs(ct.map(x2) - z);
        }
    }
    return std::min(best, std::min(f1, f2));
}

// winding number of f around a circle; |result| > 0.4 counts as "zero inside".
// Returns a large sentinel when f is tiny or non-finite on the circle.
double circle_winding(const std::function<cplx(cplx)>& f, cplx center, double radius) {
    const int n = 48;
    double total = 0.0;
    double scale = 0.0;
    std::vector<cplx> vals(n + 1);
    for (int i = 0; i <= n; ++i) {
        double th = 2.0 * pi * i / n;
        cplx v = f(center + radius * cplx(std::cos(th), std::sin(th)));
        // the denominators are entire, so non-finite means overflow far from
        // any zero, not a nearby singularity
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return 0.0;
        scale = std::max(scale, std::abs(v));
        vals[i] = v;
    }
    for (int i = 0; i <= n; ++i)
        if (std::abs(vals[i]) < 1e-13 * scale) return 1e9;  // zero essentially on the circle
    for (int i = 1; i <= n; ++i) total += std::arg(vals[i] / vals[i - 1]);
    return total / (2.0 * pi);
}

bool contour_clear(const PotentialPair& p, const Contour& ct) {
    // endpoint flatness: the path must return to the real axis at xi = +-L.
    // Launch accuracy is governed by the tail integral, not this elevation, so
    // the gate only rejects paths that are visibly bent at the ends; 1e-4
    // keeps half-lengths as short as ~10 usable with the default ladder.
    if (ct.elevation * sech(ct.half_length) >= 1e-4) return false;
    for (double x0 : p.real_poles)
        if (distance_to_point(ct, cplx(x0, 0.0)) <= ct.margin) return false;
    for (cplx z0 : p.complex_poles)
        if (distance_to_point(ct, z0) <= ct.margin) return false;
    if (p.denominator) {
        // overlapping argument-principle probes along the margin tube: disks of
        // radius 1.2*margin with centers at most 0.35*margin apart measured
        // along the curve, so any denominator zero within the margin of the
        // path lands strictly inside some disk
        const double speed_cap = std::sqrt(1.0 + 0.25 * ct.elevation * ct.elevation);
        const double spacing = 0.35 * ct.margin / speed_cap;
        const int m = static_cast<int>(std::ceil(2.0 * ct.half_length / spacing));
        for (int i = 0; i <= m; ++i) {
            double xi = -ct.half_length + 2.0 * ct.half_length * i / m;
            double w = circle_winding(p.denominator, ct.map(xi), 1.2 * ct.margin);
            if (std::abs(w) > 0.4) return false;
        }
    }
    return true;
}

}  // namespace

Contour build_contour(const PotentialPair& p, double c_init, double L, double margin) {
    if (!(c_init > 0.0) || !(L > 0.0) || !(margin > 0.0))
        throw InputError("build_contour: c_init, L, margin must all be positive");
    // fixed ladder, nearest candidates first; the margin itself never changes
    static const int ladder[7] = {0, -1, +1, -2, +2, -3, +3};
    for (int j : ladder) {
        Contour ct;
        ct.elevation = c_init * std::pow(2.0, j);
        ct.half_length = L;
        ct.margin = margin;
        if (contour_clear(p, ct)) return ct;
    }
    throw NoValidContour("no ladder elevation keeps the path " + std::to_string(margin) +
                         " clear of the poles (c_init = " + std::to_string(c_init) + ")");
}

}  // namespace zs
