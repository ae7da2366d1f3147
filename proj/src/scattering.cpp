#include "zs/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "zs/errors.hpp"

namespace zs {

namespace {

double spread_of(const std::vector<cplx>& vals) {
    double s = 0.0;
    for (size_t i = 0; i < vals.size(); ++i)
        for (size_t j = i + 1; j < vals.size(); ++j) s = std::max(s, std::abs(vals[i] - vals[j]));
    return s;
}

cplx mean_of(const std::vector<cplx>& vals) {
    cplx s = 0.0;
    for (cplx v : vals) s += v;
    return s / double(vals.size());
}

}  // namespace

ScatteringData scatter_at(const PotentialPair& p, cplx k, const Contour& contour,
                          const ScatterOptions& opt) {
    if (std::abs(k) < 1e-14)
        throw ContractViolation("k = 0 is excluded from scattering by contract");

    std::vector<double> match = opt.matching_points;
    if (match.empty()) {
        double L4 = contour.half_length / 4.0;
        match = {-L4, 0.0, L4};
    }
    std::sort(match.begin(), match.end());

    JostOptions jo;
    jo.rtol = opt.rtol;
    jo.atol = opt.atol;
    jo.samples = match;

    ScatteringData sd;
    sd.k = k;

    const bool real_k = std::abs(k.imag()) <= 1e-12;
    if (!real_k) {
        if (k.imag() > 0.0) {
            JostSolution M = integrate_zs(p, k, contour, JostTag::Phi, jo);
            JostSolution N = integrate_zs(p, k, contour, JostTag::Psi, jo);
            std::vector<cplx> as;
            for (double xi : match) as.push_back(det2(M.at(xi), N.at(xi)));
            sd.a = mean_of(as);
            sd.wronskian_spread = spread_of(as);
        } else {
            JostSolution Mb = integrate_zs(p, k, contour, JostTag::PhiBar, jo);
            JostSolution Nb = integrate_zs(p, k, contour, JostTag::PsiBar, jo);
            std::vector<cplx> abars;
            for (double xi : match) abars.push_back(det2(Nb.at(xi), Mb.at(xi)));
            sd.a_bar = mean_of(abars);
            sd.wronskian_spread = spread_of(abars);
        }
        return sd;
    }

    JostSolution M = integrate_zs(p, k, contour, JostTag::Phi, jo);
    JostSolution Mb = integrate_zs(p, k, contour, JostTag::PhiBar, jo);
    JostSolution N = integrate_zs(p, k, contour, JostTag::Psi, jo);
    JostSolution Nb = integrate_zs(p, k, contour, JostTag::PsiBar, jo);

    // phase-free fundamental-pair determinants must stay at 1
    for (double xi : match) {
        double d1 = std::abs(det2(M.at(xi), Mb.at(xi)) - 1.0);
        double d2 = std::abs(det2(Nb.at(xi), N.at(xi)) - 1.0);
        if (d1 > opt.wronskian_tol || d2 > opt.wronskian_tol)
            throw DegenerateWronskian(
                "fundamental-pair determinant drifted by " + std::to_string(std::max(d1, d2)) +
                " at xi = " + std::to_string(xi));
    }

    // b and b_bar carry the phase e^{-+2ik gamma(xi)}, which amplifies noise by
    // e^{2|Re k| c sech xi}; drop matching points beyond the exponent cap
    std::vector<double> b_points;
    for (double xi : match) {
        double expo = 2.0 * std::abs(k.real()) * contour.elevation * sech(xi);
        if (expo <= opt.phase_exponent_cap) b_points.push_back(xi);
    }
    if (b_points.empty()) b_points = match;  // nothing passes: no better option

    std::vector<cplx> as, abars, bs, bbars;
    for (double xi : match) {
        as.push_back(det2(M.at(xi), N.at(xi)));
        abars.push_back(det2(Nb.at(xi), Mb.at(xi)));
    }
    for (double xi : b_points) {
        cplx x = contour.map(xi);
        bs.push_back(det2(Nb.at(xi), M.at(xi)) * std::exp(-2.0 * I * k * x));
        bbars.push_back(det2(Mb.at(xi), N.at(xi)) * std::exp(2.0 * I * k * x));
    }

    sd.a = mean_of(as);
    sd.a_bar = mean_of(abars);
    sd.b = mean_of(bs);
    sd.b_bar = mean_of(bbars);
    sd.wronskian_spread =
        std::max(std::max(spread_of(as), spread_of(abars)), std::max(spread_of(bs), spread_of(bbars)));
    sd.unitarity_residual = std::abs(*sd.a * *sd.a_bar - *sd.b * *sd.b_bar - 1.0);
    if (std::abs(*sd.a) >= 1e-12) sd.rho = *sd.b / *sd.a;
    if (std::abs(*sd.a_bar) >= 1e-12) sd.rho_bar = *sd.b_bar / *sd.a_bar;
    return sd;
}

std::vector<GridEntry> scatter_grid(const PotentialPair& p, const std::vector<cplx>& ks,
                                    const Contour& contour, const ScatterOptions& opt) {
    std::vector<GridEntry> out;
    out.reserve(ks.size());
    for (cplx k : ks) {
        GridEntry e;
        e.k = k;
        try {
            e.data = scatter_at(p, k, contour, opt);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

double check_symmetry_relations(const std::vector<ScatteringData>& grid, Reduction symmetry) {
    if (symmetry == Reduction::None)
        throw InputError("check_symmetry_relations: a concrete reduction is required");
    const bool negate = symmetry == Reduction::REqQ || symmetry == Reduction::REqNegQ;
    const bool minus_b = symmetry == Reduction::REqNegQ || symmetry == Reduction::REqNegConjQ;

    auto find_partner = [&grid](cplx target) -> const ScatteringData* {
        for (const auto& e : grid)
            if (std::abs(e.k - target) <= 1e-9 * (1.0 + std::abs(target))) return &e;
        return nullptr;
    };

    double worst = 0.0;
    bool checked_any = false;
    for (const auto& e : grid) {
        if (!e.a_bar && !e.b_bar) continue;  // nothing barred to test at this k
        cplx target = negate ? -e.k : std::conj(e.k);
        const ScatteringData* pe = find_partner(target);
        if (!pe)
            throw MissingPartner("grid lacks the entry at k = (" + std::to_string(target.real()) +
                                 ", " + std::to_string(target.imag()) + ")");
        // case (i)/(ii): abar(k) = a(-k); case (iii)/(iv): abar(k) = conj(a(conj k))
        if (e.a_bar && pe->a) {
            cplx rhs = negate ? *pe->a : std::conj(*pe->a);
            worst = std::max(worst, std::abs(*e.a_bar - rhs));
            checked_any = true;
        }
        // b identity, with the sign flip for the (ii)/(iv) reductions
        if (e.b_bar && pe->b) {
            cplx rhs = negate ? *pe->b : std::conj(*pe->b);
            if (minus_b) rhs = -rhs;
            worst = std::max(worst, std::abs(*e.b_bar - rhs));
            checked_any = true;
        }
    }
    if (!checked_any)
        throw MissingPartner("no grid entry carried the barred coefficients needed for the check");
    return worst;
}

StokesFactorization stokes_matrices(const ScatteringData& sd) {
    if (!sd.a || !sd.a_bar || !sd.b || !sd.b_bar)
        throw IncompleteData("Stokes matrices need all four coefficients (real k record)");
    cplx a = *sd.a, ab = *sd.a_bar, b = *sd.b, bb = *sd.b_bar;
    cplx det = a * ab - b * bb;
    if (std::abs(det - 1.0) > 1e-6)
        throw ContractViolation("determinant relation a*abar - b*bbar = 1 violated by " +
                                std::to_string(std::abs(det - 1.0)));
    StokesFactorization st;
    st.S_minus = {{{a, bb}, {b, ab}}};
    // exact inverse: dividing by the determinant keeps S_plus * S_minus = id
    // at machine precision even when the unitarity relation holds only to 1e-10
    st.S_plus = {{{ab / det, -bb / det}, {-b / det, a / det}}};
    return st;
}

ReflectionlessReport reflectionless_test(const std::vector<ScatteringData>& grid, double tol) {
    ReflectionlessReport rep;
    bool any = false;
    for (const auto& sd : grid) {
        if (!sd.b || !sd.b_bar) continue;
        double v = std::max(std::abs(*sd.b), std::abs(*sd.b_bar));
        if (!any || v > rep.worst_value) {
            rep.worst_value = v;
            rep.worst_k = sd.k;
        }
        any = true;
    }
    if (!any) throw InputError("reflectionless_test: no real-k entries with b data");
    rep.reflectionless = rep.worst_value < tol;
    return rep;
}

ReflectionlessReport reflectionless_test(const PotentialPair& p, const std::vector<double>& ks,
                                         const Contour& contour, double tol,
                                         const ScatterOptions& opt) {
    std::vector<ScatteringData> grid;
    for (double k : ks) grid.push_back(scatter_at(p, cplx(k, 0.0), contour, opt));
    return reflectionless_test(grid, tol);
}

}  // namespace zs
