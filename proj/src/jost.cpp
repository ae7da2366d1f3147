#include "zs/jost.hpp"

#include <algorithm>
#include <cmath>

#include "zs/errors.hpp"

namespace zs {

std::string to_string(JostTag t) {
    switch (t) {
        case JostTag::Phi: return "phi";
        case JostTag::PhiBar: return "phi_bar";
        case JostTag::Psi: return "psi";
        case JostTag::PsiBar: return "psi_bar";
    }
    return "?";
}

namespace {

bool launches_left(JostTag t) { return t == JostTag::Phi || t == JostTag::PhiBar; }

// envelope systems: the phase e^{-+ikx} is factored out analytically, leaving
//   M' = [[0, q],[r, 2ik]] M        (Phi, PsiBar normalization (1,0))
//   V' = [[-2ik, q],[r, 0]] V       (PhiBar, Psi normalization (0,1))
bool uses_upper_matrix(JostTag t) { return t == JostTag::Phi || t == JostTag::PsiBar; }

void check_half_plane(JostTag which, cplx k) {
    const double im = k.imag();
    const bool upper_ok = which == JostTag::Phi || which == JostTag::Psi;
    if (im > 1e-12 && !upper_ok)
        throw WrongHalfPlane(to_string(which) + " is analytic in the lower half-plane only, "
                                                "got Im k > 0");
    if (im < -1e-12 && upper_ok)
        throw WrongHalfPlane(to_string(which) + " is analytic in the upper half-plane only, "
                                                "got Im k < 0");
}

}  // namespace

const Vec2& JostSolution::at(double xi_value) const {
    auto it = std::lower_bound(xi.begin(), xi.end(), xi_value - 1e-9);
    if (it == xi.end() || std::abs(*it - xi_value) > 1e-9)
        throw InputError("JostSolution::at: xi = " + std::to_string(xi_value) +
                         " was not a requested sample point");
    return samples[static_cast<size_t>(it - xi.begin())];
}

Vec2 JostSolution::raw_at(double xi_value) const {
    const Vec2& v = at(xi_value);
    if (!envelope_form) return v;
    cplx x = contour.map(xi_value);
    // Phi: phi = M e^{-ikx}; PhiBar: phi_bar = V e^{+ikx};
    // Psi: psi = N e^{+ikx}; PsiBar: psi_bar = V e^{-ikx}
    cplx phase = (which == JostTag::Phi || which == JostTag::PsiBar) ? std::exp(-I * k * x)
                                                                    : std::exp(I * k * x);
    return {v[0] * phase, v[1] * phase};
}

JostSolution integrate_zs(const PotentialPair& p, cplx k, const Contour& contour, JostTag which,
                          const JostOptions& opt) {
    if (std::abs(k) < 1e-14)
        throw ContractViolation("k = 0 is excluded: the boundary normalization degenerates");
    check_half_plane(which, k);

    const double L = contour.half_length;
    std::vector<double> want = opt.samples;
    if (want.empty()) {
        int n = std::max(2, opt.default_sample_count);
        want.resize(n);
        for (int i = 0; i < n; ++i) want[i] = -L + 2.0 * L * i / (n - 1);
    }
    std::sort(want.begin(), want.end());
    if (want.front() < -L - 1e-12 || want.back() > L + 1e-12)
        throw InputError("requested sample outside the contour parameter range");

    JostSolution js;
    js.which = which;
    js.k = k;
    js.contour = contour;
    js.envelope_form = opt.envelope;

    const bool left = launches_left(which);
    const bool upper = uses_upper_matrix(which);
    const cplx diag = upper ? 2.0 * I * k : -2.0 * I * k;

    Vec2 y0 = upper ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    auto rhs_env = [&](double xi, const Vec2& y, Vec2& dy) {
        cplx x = contour.map(xi);
        cplx g = contour.dmap(xi);
        cplx q = p.q(x), r = p.r(x);
        if (upper) {
            dy[0] = g * (q * y[1]);
            dy[1] = g * (r * y[0] + diag * y[1]);
        } else {
            dy[0] = g * (diag * y[0] + q * y[1]);
            dy[1] = g * (r * y[0]);
        }
    };
    auto rhs_raw = [&](double xi, const Vec2& y, Vec2& dy) {
        cplx x = contour.map(xi);
        cplx g = contour.dmap(xi);
        cplx q = p.q(x), r = p.r(x);
        dy[0] = g * (-I * k * y[0] + q * y[1]);
        dy[1] = g * (r * y[0] + I * k * y[1]);
    };

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;

    std::vector<std::pair<double, Vec2>> got;
    got.reserve(want.size());
    auto sink = [&](double t, const Vec2& y) { got.emplace_back(t, y); };

    // integrate from the launch endpoint only as far as the last sample asked for
    double t0 = left ? -L : L, t1 = left ? want.back() : want.front();
    std::vector<double> order = want;
    if (!left) std::reverse(order.begin(), order.end());

    if (opt.envelope) {
        integrate_dp54(rhs_env, y0, t0, t1, order, oo, sink);
    } else {
        // raw form: impose the phase-carrying boundary value at the endpoint;
        // phi = (1,0)e^{-ikx}, phi_bar = (0,1)e^{ikx}, psi = (0,1)e^{ikx},
        // psi_bar = (1,0)e^{-ikx}
        cplx x_end = contour.map(t0);
        cplx lead = (which == JostTag::Phi || which == JostTag::PsiBar) ? std::exp(-I * k * x_end)
                                                                        : std::exp(I * k * x_end);
        Vec2 w0 = upper ? Vec2{lead, 0.0} : Vec2{0.0, lead};
        integrate_dp54(rhs_raw, w0, t0, t1, order, oo, sink);
    }

    std::sort(got.begin(), got.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [t, y] : got) {
        js.xi.push_back(t);
        js.samples.push_back(y);
    }
    // truncation proxy: boundary data was imposed at +-L instead of +-infinity
    js.tail_bound = tail_integral(p, L);
    return js;
}

JostSolution continue_in_k(const PotentialPair& p, const Contour& contour, JostTag which, cplx k,
                           const JostOptions& opt) {
    check_half_plane(which, k);
    return integrate_zs(p, k, contour, which, opt);
}

}  // namespace zs
