#include "zs/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "zs/jost.hpp"
#include "zs/poly.hpp"

namespace zs {

namespace {

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * double(n - i) / double(i + 1);
    return v;
}

// recursive phase walk along one boundary segment; each accepted piece must
// turn by at most pi/2 and change magnitude by at most a factor e
struct PhaseWalk {
    const std::function<cplx(cplx)>& f;
    double min_modulus;
    int max_depth;

    double run(cplx z0, cplx z1, cplx f0, cplx f1, int depth) const {
        double turn = std::arg(f1 / f0);
        double swing = std::abs(std::log(std::abs(f1 / f0)));
        if (std::abs(turn) <= 0.5 * pi && swing <= 1.0) return turn;
        if (depth >= max_depth)
            throw NumericalError("boundary phase walk exhausted its refinement depth");
        cplx zm = 0.5 * (z0 + z1);
        cplx fm = f(zm);
        if (!std::isfinite(fm.real()) || !std::isfinite(fm.imag()))
            throw NumericalError("non-finite value on the counting boundary");
        if (std::abs(fm) < min_modulus)
            throw BoundaryZero("modulus " + std::to_string(std::abs(fm)) +
                               " on the counting boundary");
        return run(z0, zm, f0, fm, depth + 1) + run(zm, z1, fm, f1, depth + 1);
    }
};

}  // namespace

int count_zeros(const std::function<cplx(cplx)>& f, const Box& region, const CountOptions& opt) {
    if (!(region.re1 > region.re0) || !(region.im1 > region.im0))
        throw InputError("count_zeros: rectangle is empty");
    const cplx corners[4] = {{region.re0, region.im0},
                             {region.re1, region.im0},
                             {region.re1, region.im1},
                             {region.re0, region.im1}};
    PhaseWalk walk{f, opt.min_modulus, opt.max_refine_depth};
    double total = 0.0;
    for (int s = 0; s < 4; ++s) {
        cplx A = corners[s], B = corners[(s + 1) % 4];
        cplx prev_z = A, prev_f = f(A);
        for (int i = 0; i <= opt.initial_nodes_per_side; ++i) {
            cplx z = (i == 0) ? A : A + (B - A) * (double(i) / opt.initial_nodes_per_side);
            cplx fz = (i == 0) ? prev_f : f(z);
            if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag()))
                throw NumericalError("non-finite value on the counting boundary");
            if (std::abs(fz) < opt.min_modulus)
                throw BoundaryZero("modulus " + std::to_string(std::abs(fz)) +
                                   " at a boundary node");
            if (i > 0) {
                total += walk.run(prev_z, z, prev_f, fz, 0);
                prev_z = z;
                prev_f = fz;
            }
        }
    }
    double w = total / (2.0 * pi);
    long r = std::lround(w);
    if (std::abs(w - double(r)) > opt.integer_tol)
        throw NumericalError("winding " + std::to_string(w) +
                             " is not within tolerance of an integer");
    return static_cast<int>(r);
}

cplx refine_zero(const std::function<cplx(cplx)>& f, cplx k0, const RefineOptions& opt) {
    cplx k = k0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        cplx fk = f(k);
        double radius = opt.derivative_radius;
        if (k.imag() != 0.0) radius = std::min(radius, 0.5 * std::abs(k.imag()));
        radius = std::max(radius, 1e-4);
        // f' by a trapezoid Cauchy integral; nodes reused for nothing else here
        cplx df = 0.0;
        for (int i = 0; i < opt.circle_nodes; ++i) {
            double th = 2.0 * pi * i / opt.circle_nodes;
            cplx w = radius * cplx(std::cos(th), std::sin(th));
            df += f(k + w) / w;
        }
        df /= double(opt.circle_nodes);
        if (!std::isfinite(df.real()) || !std::isfinite(df.imag()) || df == cplx(0.0))
            throw NoConvergence("derivative vanished or blew up during Newton refinement");
        cplx step = fk / df;
        k -= step;
        if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) ||
            std::abs(k - k0) > 10.0 * (1.0 + std::abs(k0)))
            throw NoConvergence("Newton iteration left the basin of the starting point");
        if (std::abs(fk) <= opt.tol && std::abs(step) <= opt.tol) return k;
    }
    throw NoConvergence("Newton refinement did not meet tolerance " + std::to_string(opt.tol) +
                        " within " + std::to_string(opt.max_iterations) + " iterations");
}

namespace {

// Jost envelopes and the analytic coefficient at one spectral point, with the
// matching sample fixed at xi = 0. "upper" integrates phi/psi (coefficient a),
// "lower" integrates phi_bar/psi_bar (coefficient a_bar).
struct PointData {
    Vec2 M, N;
    cplx a;
};

class HalfEval {
  public:
    HalfEval(const PotentialPair& p, const Contour& ct, bool upper, double rtol, double atol)
        : p_(p), ct_(ct), upper_(upper) {
        jo_.rtol = rtol;
        jo_.atol = atol;
        jo_.samples = {0.0};
    }

    const PointData& at(cplx kappa) {
        auto key = std::make_pair(kappa.real(), kappa.imag());
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        PointData d;
        if (upper_) {
            d.M = integrate_zs(p_, kappa, ct_, JostTag::Phi, jo_).at(0.0);
            d.N = integrate_zs(p_, kappa, ct_, JostTag::Psi, jo_).at(0.0);
            d.a = det2(d.M, d.N);
        } else {
            d.M = integrate_zs(p_, kappa, ct_, JostTag::PhiBar, jo_).at(0.0);
            d.N = integrate_zs(p_, kappa, ct_, JostTag::PsiBar, jo_).at(0.0);
            d.a = det2(d.N, d.M);
        }
        return cache_.emplace(key, d).first->second;
    }

    cplx a(cplx kappa) { return at(kappa).a; }

  private:
    const PotentialPair& p_;
    const Contour& ct_;
    bool upper_;
    JostOptions jo_;
    std::map<std::pair<double, double>, PointData> cache_;
};

struct CircleLog {
    std::vector<cplx> nodes;    // kappa values
    std::vector<cplx> values;   // a(kappa)
    std::vector<cplx> logs;     // continuous log along the circle
    int winding = 0;
    cplx center;
    double radius = 0.0;
};

// sample a on a circle and build the unwrapped logarithm; node count doubles
// until the per-step turn is small
CircleLog circle_log(HalfEval& ev, cplx center, double radius) {
    for (int n = 128; n <= 2048; n *= 2) {
        CircleLog cl;
        cl.center = center;
        cl.radius = radius;
        cl.nodes.resize(n);
        cl.values.resize(n);
        cl.logs.resize(n);
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
            double th = 2.0 * pi * i / n;
            cl.nodes[i] = center + radius * cplx(std::cos(th), std::sin(th));
            cl.values[i] = ev.a(cl.nodes[i]);
            scale = std::max(scale, std::abs(cl.values[i]));
        }
        bool too_small = false;
        for (cplx v : cl.values)
            if (std::abs(v) < 1e-11 * scale) too_small = true;
        if (too_small) throw BoundaryZero("coefficient nearly vanishes on a moment circle");
        double phase = std::arg(cl.values[0]);
        double worst_turn = 0.0;
        cl.logs[0] = cplx(std::log(std::abs(cl.values[0])), phase);
        for (int i = 1; i < n; ++i) {
            double turn = std::arg(cl.values[i] / cl.values[i - 1]);
            worst_turn = std::max(worst_turn, std::abs(turn));
            phase += turn;
            cl.logs[i] = cplx(std::log(std::abs(cl.values[i])), phase);
        }
        double closing = std::arg(cl.values[0] / cl.values[n - 1]);
        worst_turn = std::max(worst_turn, std::abs(closing));
        double w = (phase + closing - cl.logs[0].imag()) / (2.0 * pi);
        long r = std::lround(w);
        if (worst_turn <= pi / 3.0 && std::abs(w - double(r)) <= 1e-3) {
            cl.winding = static_cast<int>(r);
            return cl;
        }
    }
    throw ClusterUnresolved("moment circle winding failed to stabilize");
}

// power sums s_j of the zeros inside the circle, from the unwrapped log:
// s_j = m c^j - (j r / n) sum_i kappa_i^{j-1} e^{i theta_i} P(theta_i),
// P = log a - i m theta (periodic smooth part)
std::vector<cplx> power_sums(const CircleLog& cl, int jmax) {
    const int n = static_cast<int>(cl.nodes.size());
    std::vector<cplx> s(jmax + 1, 0.0);
    for (int j = 1; j <= jmax; ++j) {
        cplx acc = 0.0;
        for (int i = 0; i < n; ++i) {
            double th = 2.0 * pi * i / n;
            cplx P = cl.logs[i] - cplx(0.0, double(cl.winding) * th);
            cplx kpow = 1.0;
            for (int t = 0; t < j - 1; ++t) kpow *= cl.nodes[i];
            acc += kpow * cplx(std::cos(th), std::sin(th)) * P;
        }
        cplx cpow = 1.0;
        for (int t = 0; t < j; ++t) cpow *= cl.center;
        s[j] = double(cl.winding) * cpow - double(j) * cl.radius / double(n) * acc;
    }
    return s;
}

// zero locations inside the circle via Newton's identities on the power sums
std::vector<cplx> zeros_from_moments(const CircleLog& cl) {
    const int m = cl.winding;
    std::vector<cplx> s = power_sums(cl, m);
    std::vector<cplx> e(m + 1, 0.0);
    e[0] = 1.0;
    for (int j = 1; j <= m; ++j) {
        cplx acc = 0.0;
        for (int t = 1; t <= j; ++t) {
            cplx term = e[j - t] * s[t];
            acc += (t % 2 == 1) ? term : -term;
        }
        // e_j = (1/j) sum_{t} (-1)^{t-1} e_{j-t} s_t
        e[j] = acc / double(j);
    }
    std::vector<cplx> coeffs(m + 1);
    for (int j = 0; j <= m; ++j) {
        cplx c = e[m - j];
        if ((m - j) % 2 == 1) c = -c;
        coeffs[j] = c;
    }
    return poly_roots(Poly{coeffs});
}

struct Found {
    cplx loc;
    int mult = 1;
};

std::vector<Found> group_roots(const std::vector<cplx>& roots) {
    std::vector<Found> out;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        cplx sum = roots[i];
        int cnt = 1;
        used[i] = true;
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - sum / double(cnt)) < 1e-3) {
                sum += roots[j];
                ++cnt;
                used[j] = true;
            }
        }
        out.push_back({sum / double(cnt), cnt});
    }
    return out;
}

struct CellBox {
    Box b;
    int count = 0;
};

double clearance(const Box& b, bool upper) { return upper ? b.im0 : -b.im1; }

// Harvest one half-plane. The box must sit strictly inside it.
std::vector<DiscreteEigen> extract_half(const PotentialPair& p, const Contour& ct, Box box,
                                        bool upper, const ExtractOptions& opt,
                                        std::vector<std::string>& warnings) {
    HalfEval coarse(p, ct, upper, std::max(opt.rtol * 100.0, 1e-9),
                    std::max(opt.atol * 100.0, 1e-11));
    HalfEval fine(p, ct, upper, opt.rtol, opt.atol);
    auto fc = [&coarse](cplx z) { return coarse.a(z); };
    CountOptions copt;

    // outer count, with deterministic inflation retries when a zero sits on
    // the requested boundary
    static const double inflate[5] = {0.0, 0.011, 0.023, 0.037, 0.053};
    int total = -1;
    Box outer = box;
    std::string first_err;
    for (double fi : inflate) {
        Box b2 = box;
        double w = box.width(), h = box.height();
        b2.re0 -= fi * w;
        b2.re1 += fi * w;
        if (upper) {
            b2.im1 += fi * h;
            b2.im0 = std::max(box.im0 - fi * h, 0.5 * box.im0);
        } else {
            b2.im0 -= fi * h;
            b2.im1 = std::min(box.im1 + fi * h, 0.5 * box.im1);
        }
        try {
            total = count_zeros(fc, b2, copt);
            outer = b2;
            break;
        } catch (const NumericalError& e) {
            if (first_err.empty()) first_err = e.what();
        }
    }
    if (total < 0)
        throw BoundaryZero("region boundary could not be made zero-free (" + first_err + ")");
    if (total == 0) return {};
    if (outer.re0 != box.re0 || outer.im0 != box.im0 || outer.re1 != box.re1 ||
        outer.im1 != box.im1)
        warnings.push_back("counting region was inflated to dodge a boundary zero");

    // subdivide until each cell is small and clear of the real axis
    std::deque<CellBox> work{{outer, total}};
    std::vector<CellBox> resolved;
    static const double fracs[7] = {0.5, 0.57, 0.43, 0.64, 0.36, 0.52, 0.48};
    while (!work.empty()) {
        CellBox c = work.front();
        work.pop_front();
        if (c.count == 0) continue;
        double w = c.b.width(), h = c.b.height();
        double maxdim = std::max(w, h);
        if (maxdim <= opt.resolve_diameter && maxdim <= 0.8 * clearance(c.b, upper)) {
            resolved.push_back(c);
            continue;
        }
        if (maxdim <= opt.min_cell)
            throw ClusterUnresolved("cell reached the minimum size without resolving");
        bool cut_re = w >= h;
        bool done = false;
        for (double fr : fracs) {
            Box b1 = c.b, b2 = c.b;
            if (cut_re) {
                double cut = c.b.re0 + fr * w;
                b1.re1 = cut;
                b2.re0 = cut;
            } else {
                double cut = c.b.im0 + fr * h;
                b1.im1 = cut;
                b2.im0 = cut;
            }
            try {
                int c1 = count_zeros(fc, b1, copt);
                int c2 = count_zeros(fc, b2, copt);
                if (c1 + c2 != c.count) continue;
                // A zero sitting exactly on the cut line can split its
                // multiplicity between the halves while the sum still checks
                // out (each half-boundary collects part of the winding).
                // Re-counting one side against a displaced cut exposes that:
                // the two counts disagree unless the strip between the cuts
                // is zero-free and the original cut was clean.
                Box b1check = c.b;
                if (cut_re)
                    b1check.re1 = c.b.re0 + (fr + 0.0171) * w;
                else
                    b1check.im1 = c.b.im0 + (fr + 0.0171) * h;
                if (count_zeros(fc, b1check, copt) != c1) continue;
                work.push_back({b1, c1});
                work.push_back({b2, c2});
                done = true;
                break;
            } catch (const NumericalError&) {
                continue;
            }
        }
        if (!done) throw ClusterUnresolved("no clean cut found while subdividing");
    }

    // resolve each cell into located zeros with multiplicities
    std::vector<Found> found;
    for (const CellBox& c : resolved) {
        cplx center(0.5 * (c.b.re0 + c.b.re1), 0.5 * (c.b.im0 + c.b.im1));
        double radius = 0.55 * std::hypot(c.b.width(), c.b.height());
        bool ok = false;
        for (int attempt = 0; attempt < 6 && !ok; ++attempt, radius *= 0.9) {
            try {
                CircleLog cl = circle_log(coarse, center, radius);
                if (cl.winding != c.count) continue;  // a neighbor's zero slipped in
                auto groups = group_roots(zeros_from_moments(cl));
                for (auto& g : groups) found.push_back(g);
                ok = true;
            } catch (const NumericalError&) {
                continue;
            }
        }
        if (!ok) throw ClusterUnresolved("cell circle never matched the cell count");
    }

    // final refinement + data harvest per zero
    const cplx x_star = ct.map(0.0);
    std::vector<DiscreteEigen> eigens;
    for (size_t gi = 0; gi < found.size(); ++gi) {
        cplx loc = found[gi].loc;
        const int nu = found[gi].mult;
        if (nu > opt.multiplicity_cap)
            throw ClusterUnresolved("multiplicity " + std::to_string(nu) +
                                    " exceeds the policy cap of " +
                                    std::to_string(opt.multiplicity_cap));
        double dmin = std::numeric_limits<double>::infinity();
        for (size_t gj = 0; gj < found.size(); ++gj)
            if (gj != gi) dmin = std::min(dmin, std::abs(found[gj].loc - loc));
        double radius = std::min(0.5 * dmin, 0.25 * std::abs(loc.imag()));
        if (!(radius >= 1e-3))
            throw ClusterUnresolved("no usable data circle: zero too close to the axis or to "
                                    "a neighboring zero");

        // two centroid passes at the data tolerance pin the location
        CircleLog cl = circle_log(fine, loc, radius);
        if (cl.winding != nu)
            throw ClusterUnresolved("data circle winding disagrees with the multiplicity");
        loc = power_sums(cl, 1)[1] / double(nu);
        cl = circle_log(fine, loc, radius);
        if (cl.winding != nu)
            throw ClusterUnresolved("data circle winding disagrees after recentering");
        loc = power_sums(cl, 1)[1] / double(nu);

        if (std::abs(loc.imag()) < opt.near_real_axis)
            warnings.push_back("NearRealAxis: eigen at Im = " + std::to_string(loc.imag()));

        // Cauchy derivatives of a, M, N on one shared circle around the zero
        const int n = opt.cauchy_nodes;
        std::vector<cplx> avals(n);
        std::vector<Vec2> Mvals(n), Nvals(n);
        std::vector<cplx> wpow(n);  // (kappa - loc), updated to powers in place
        for (int i = 0; i < n; ++i) {
            double th = 2.0 * pi * i / n;
            cplx kap = loc + radius * cplx(std::cos(th), std::sin(th));
            const PointData& pd = fine.at(kap);
            avals[i] = pd.a;
            Mvals[i] = pd.M;
            Nvals[i] = pd.N;
            wpow[i] = kap - loc;
        }
        auto deriv_a = [&](int order) {
            cplx acc = 0.0;
            for (int i = 0; i < n; ++i) acc += avals[i] / std::pow(wpow[i], order);
            double fact = 1.0;
            for (int t = 2; t <= order; ++t) fact *= t;
            return acc * fact / double(n);
        };
        auto deriv_vec = [&](const std::vector<Vec2>& vals, int order) {
            Vec2 acc{0.0, 0.0};
            double fact = 1.0;
            for (int t = 2; t <= order; ++t) fact *= t;
            for (int i = 0; i < n; ++i) {
                cplx wp = std::pow(wpow[i], order);
                acc[0] += vals[i][0] / wp;
                acc[1] += vals[i][1] / wp;
            }
            acc[0] *= fact / double(n);
            acc[1] *= fact / double(n);
            return acc;
        };

        DiscreteEigen de;
        de.location = loc;
        de.multiplicity = nu;
        for (int m = nu; m <= 2 * nu - 1; ++m) de.a_derivatives.push_back(deriv_a(m));
        // claimed-multiplicity consistency: the lower derivatives must be tiny
        double lead = std::abs(de.a_derivatives[0]);
        for (int m = 0; m < nu; ++m)
            if (std::abs(deriv_a(m)) > 1e-6 * lead)
                warnings.push_back("low-order derivative of the coefficient is not small at an "
                                   "eigen of claimed multiplicity " + std::to_string(nu));

        // b data from the proportionality of the two envelopes at the zero:
        //   upper: M = b N e^{+2 i k x},  lower: M_bar = b_bar N_bar e^{-2 i k x}
        // differentiated in k via the product rule, solved recursively
        const cplx two_ix = (upper ? 2.0 : -2.0) * I * x_star;
        const cplx E = std::exp(two_ix * loc);
        std::vector<Vec2> Nder(nu), Mder(nu);
        for (int l = 0; l < nu; ++l) {
            Nder[l] = deriv_vec(Nvals, l);
            Mder[l] = deriv_vec(Mvals, l);
        }
        auto Dfac = [&](int m) {
            Vec2 acc{0.0, 0.0};
            for (int l = 0; l <= m; ++l) {
                cplx coef = binom(m, l) * std::pow(two_ix, m - l) * E;
                acc[0] += coef * Nder[l][0];
                acc[1] += coef * Nder[l][1];
            }
            return acc;
        };
        std::vector<Vec2> D(nu);
        for (int m = 0; m < nu; ++m) D[m] = Dfac(m);
        double d0sq = std::norm(D[0][0]) + std::norm(D[0][1]);
        if (d0sq == 0.0) throw ClusterUnresolved("envelope vanished at an eigen location");
        auto project = [&](const Vec2& R) {
            return (R[0] * std::conj(D[0][0]) + R[1] * std::conj(D[0][1])) / d0sq;
        };
        std::vector<cplx> b(nu);
        for (int r = 0; r < nu; ++r) {
            Vec2 rem = Mder[r];
            for (int jp = 0; jp < r; ++jp) {
                cplx coef = binom(r, jp) * b[jp];
                rem[0] -= coef * D[r - jp][0];
                rem[1] -= coef * D[r - jp][1];
            }
            b[r] = project(rem);
            if (r == 0) {
                // component-ratio cross-check of the proportionality
                double scale = std::sqrt(d0sq);
                if (std::abs(D[0][0]) > 1e-6 * scale && std::abs(D[0][1]) > 1e-6 * scale) {
                    cplx r1 = Mder[0][0] / D[0][0], r2 = Mder[0][1] / D[0][1];
                    if (std::abs(r1 - r2) > opt.b_consistency_tol * (1.0 + std::abs(b[0])))
                        warnings.push_back(
                            "component ratios for the norming coefficient disagree by " +
                            std::to_string(std::abs(r1 - r2)));
                }
            }
        }
        de.b_derivatives = std::move(b);
        eigens.push_back(std::move(de));
    }

    // ordered by (Re, Im); real parts within refinement noise of each other
    // (imaginary-axis pairs) compare equal so the Im tie-break decides
    std::sort(eigens.begin(), eigens.end(), [](const DiscreteEigen& a, const DiscreteEigen& b) {
        if (std::abs(a.location.real() - b.location.real()) > 1e-6)
            return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    int mult_sum = 0;
    for (const auto& e : eigens) mult_sum += e.multiplicity;
    if (mult_sum != total)
        throw ClusterUnresolved("multiplicity sum " + std::to_string(mult_sum) +
                                " disagrees with the regional count " + std::to_string(total));
    return eigens;
}

}  // namespace

SpectrumResult extract_discrete_data(const PotentialPair& p, const Contour& contour,
                                     const Box& region, const ExtractOptions& opt) {
    if (!(region.im0 > 0.0))
        throw InputError("extract_discrete_data: the region must sit strictly in the upper "
                         "half-plane (its mirror handles the lower one)");
    if (!(region.re1 > region.re0) || !(region.im1 > region.im0))
        throw InputError("extract_discrete_data: empty region");

    SpectrumResult sr;
    sr.upper = extract_half(p, contour, region, /*upper=*/true, opt, sr.warnings);
    Box mirror{region.re0, region.re1, -region.im1, -region.im0};
    sr.lower = extract_half(p, contour, mirror, /*upper=*/false, opt, sr.warnings);
    return sr;
}

}  // namespace zs
