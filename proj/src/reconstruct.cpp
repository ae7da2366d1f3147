#include "zs/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <memory>

#include "zs/serialize.hpp"

namespace zs {

namespace {

cplx polyval(const std::vector<cplx>& ascending, cplx x) {
    cplx acc = 0.0;
    for (size_t i = ascending.size(); i-- > 0;) acc = acc * x + ascending[i];
    return acc;
}

void check_eigen(const DiscreteEigen& e, bool upper) {
    const char* side = upper ? "upper" : "lower";
    if (e.multiplicity < 1)
        throw InputError(std::string("reconstruction input: nonpositive multiplicity on the ") +
                         side + " list");
    if (upper && !(e.location.imag() > 0.0))
        throw InputError("reconstruction input: upper eigen located off the upper half-plane");
    if (!upper && !(e.location.imag() < 0.0))
        throw InputError("reconstruction input: lower eigen located off the lower half-plane");
    if (static_cast<int>(e.a_derivatives.size()) != e.multiplicity)
        throw InsufficientDerivatives(
            std::string("reconstruction input: a ") + side +
            " eigen needs exactly nu analytic-coefficient derivatives (orders nu..2nu-1)");
    if (static_cast<int>(e.b_derivatives.size()) != e.multiplicity)
        throw InsufficientDerivatives(std::string("reconstruction input: a ") + side +
                                      " eigen needs exactly nu norming derivatives (orders "
                                      "0..nu-1)");
    auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    if (!finite(e.location)) throw InputError("reconstruction input: non-finite location");
    for (cplx v : e.a_derivatives)
        if (!finite(v)) throw InputError("reconstruction input: non-finite derivative value");
    for (cplx v : e.b_derivatives)
        if (!finite(v)) throw InputError("reconstruction input: non-finite derivative value");
    if (e.a_derivatives[0] == cplx(0.0))
        throw InputError("reconstruction input: leading coefficient derivative vanishes, so the "
                         "claimed multiplicity is inconsistent");
}

std::vector<PrincipalPart<cplx>> build_pps(const std::vector<DiscreteEigen>& eigens,
                                           bool barred) {
    std::vector<PrincipalPart<cplx>> pps;
    pps.reserve(eigens.size());
    for (const auto& e : eigens)
        pps.push_back(residue_terms<cplx>(e.location, e.multiplicity, e.a_derivatives,
                                          e.b_derivatives, barred));
    return pps;
}

}  // namespace

void validate(const ReconstructionInput& input) {
    for (const auto& e : input.upper) check_eigen(e, true);
    for (const auto& e : input.lower) check_eigen(e, false);
    auto dup = [](const std::vector<DiscreteEigen>& v) {
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = i + 1; j < v.size(); ++j)
                if (std::abs(v[i].location - v[j].location) <
                    1e-10 * (1.0 + std::abs(v[i].location)))
                    throw InputError("reconstruction input: duplicate eigen locations should be "
                                     "merged into one entry with higher multiplicity");
    };
    dup(input.upper);
    dup(input.lower);
}

ReconstructionInput reconstruction_input_from(const SpectrumResult& sr) {
    ReconstructionInput in;
    in.upper = sr.upper;
    in.lower = sr.lower;
    return in;
}

AssembledSystem assemble_linear_system(const ReconstructionInput& input, cplx x) {
    validate(input);
    auto upper_pp = build_pps(input.upper, false);
    auto lower_pp = build_pps(input.lower, true);

    for (const auto& u : input.upper)
        for (const auto& l : input.lower)
            if (std::abs(u.location - l.location) < 1e-12 * (1.0 + std::abs(u.location)))
                throw PoleCollision("an upper and a lower eigen coincide at " +
                                    std::to_string(u.location.real()) + " + " +
                                    std::to_string(u.location.imag()) + "i");

    AssembledSystem sys;
    int S = 0;
    for (const auto& e : input.upper) S += e.multiplicity;
    for (const auto& e : input.lower) S += e.multiplicity;
    if (S == 0) throw InputError("assemble_linear_system: no discrete data");
    sys.matrix = Eigen::MatrixXcd::Identity(S, S);
    sys.rhs = Eigen::MatrixXcd::Zero(S, 2);
    sys.layout.clear();

    const int nup = static_cast<int>(input.upper.size());
    std::vector<int> offset;  // first row/column of each eigen block
    {
        int at = 0;
        for (const auto& e : input.upper) {
            offset.push_back(at);
            at += e.multiplicity;
        }
        for (const auto& e : input.lower) {
            offset.push_back(at);
            at += e.multiplicity;
        }
    }
    for (int j = 0; j < nup; ++j)
        for (int r = 0; r < input.upper[j].multiplicity; ++r) sys.layout.push_back({j, r});
    for (size_t l = 0; l < input.lower.size(); ++l)
        for (int r = 0; r < input.lower[l].multiplicity; ++r)
            sys.layout.push_back({nup + static_cast<int>(l), r});

    // precompute, per eigen, phase * sum_sigma P_{m,sigma}(x) applied to each
    // unknown order sigma: block_cols[e](m-1, sigma)
    auto coupling = [&](const PrincipalPart<cplx>& pp) {
        Eigen::MatrixXcd c(pp.nu, pp.nu);
        cplx phase = std::exp(cplx(0.0, 2.0) * double(pp.eps) * pp.pole * x);
        for (int m = 1; m <= pp.nu; ++m)
            for (int sg = 0; sg < pp.nu; ++sg)
                c(m - 1, sg) = phase * polyval(pp.coeff[m - 1][sg], x);
        return c;
    };
    std::vector<Eigen::MatrixXcd> upper_c, lower_c;
    for (const auto& pp : upper_pp) upper_c.push_back(coupling(pp));
    for (const auto& pp : lower_pp) lower_c.push_back(coupling(pp));

    // upper rows: N_j^{(rho)} - sum over lower principal parts = delta_{rho 0} e2
    for (int j = 0; j < nup; ++j) {
        for (int rho = 0; rho < input.upper[j].multiplicity; ++rho) {
            int row = offset[j] + rho;
            sys.rhs(row, 1) = (rho == 0) ? 1.0 : 0.0;
            for (size_t l = 0; l < input.lower.size(); ++l) {
                const auto& pp = lower_pp[l];
                int col0 = offset[nup + static_cast<int>(l)];
                for (int m = 1; m <= pp.nu; ++m) {
                    cplx ip = inverse_power_derivative<cplx>(pp.pole, m, rho,
                                                             input.upper[j].location);
                    for (int sg = 0; sg < pp.nu; ++sg)
                        sys.matrix(row, col0 + sg) -= ip * lower_c[l](m - 1, sg);
                }
            }
        }
    }
    // lower rows: Nbar_l^{(rho)} - sum over upper principal parts = delta_{rho 0} e1
    for (size_t l = 0; l < input.lower.size(); ++l) {
        for (int rho = 0; rho < input.lower[l].multiplicity; ++rho) {
            int row = offset[nup + static_cast<int>(l)] + rho;
            sys.rhs(row, 0) = (rho == 0) ? 1.0 : 0.0;
            for (int j = 0; j < nup; ++j) {
                const auto& pp = upper_pp[j];
                int col0 = offset[j];
                for (int m = 1; m <= pp.nu; ++m) {
                    cplx ip = inverse_power_derivative<cplx>(pp.pole, m, rho,
                                                             input.lower[l].location);
                    for (int sg = 0; sg < pp.nu; ++sg)
                        sys.matrix(row, col0 + sg) -= ip * upper_c[j](m - 1, sg);
                }
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.matrix);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    sys.condition = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    return sys;
}

ReconstructionAtX solve_reconstruction(const ReconstructionInput& input, cplx x) {
    AssembledSystem sys = assemble_linear_system(input, x);
    if (!(sys.condition <= 1e12))
        throw SingularSystem("reconstruction system at x = " + std::to_string(x.real()) +
                             (x.imag() != 0.0 ? " + " + std::to_string(x.imag()) + "i" : "") +
                             " has condition " + std::to_string(sys.condition));
    Eigen::MatrixXcd sol = Eigen::FullPivLU<Eigen::MatrixXcd>(sys.matrix).solve(sys.rhs);

    ReconstructionAtX out;
    out.x = x;
    out.condition = sys.condition;
    out.upper_pp = build_pps(input.upper, false);
    out.lower_pp = build_pps(input.lower, true);
    int row = 0;
    for (const auto& e : input.upper) {
        std::vector<Vec2> vals(e.multiplicity);
        for (int r = 0; r < e.multiplicity; ++r, ++row) vals[r] = {sol(row, 0), sol(row, 1)};
        out.upper_N.push_back(std::move(vals));
    }
    for (const auto& e : input.lower) {
        std::vector<Vec2> vals(e.multiplicity);
        for (int r = 0; r < e.multiplicity; ++r, ++row) vals[r] = {sol(row, 0), sol(row, 1)};
        out.lower_N.push_back(std::move(vals));
    }
    return out;
}

Vec2 ReconstructionAtX::N(cplx k) const {
    Vec2 v{0.0, 1.0};
    for (size_t l = 0; l < lower_pp.size(); ++l) {
        const auto& pp = lower_pp[l];
        cplx phase = std::exp(cplx(0.0, -2.0) * pp.pole * x);
        for (int m = 1; m <= pp.nu; ++m) {
            cplx invp = std::pow(k - pp.pole, -m);
            Vec2 inner{0.0, 0.0};
            for (int sg = 0; sg < pp.nu; ++sg) {
                cplx c = polyval(pp.coeff[m - 1][sg], x);
                inner[0] += c * lower_N[l][sg][0];
                inner[1] += c * lower_N[l][sg][1];
            }
            v[0] += invp * phase * inner[0];
            v[1] += invp * phase * inner[1];
        }
    }
    return v;
}

Vec2 ReconstructionAtX::Nbar(cplx k) const {
    Vec2 v{1.0, 0.0};
    for (size_t j = 0; j < upper_pp.size(); ++j) {
        const auto& pp = upper_pp[j];
        cplx phase = std::exp(cplx(0.0, 2.0) * pp.pole * x);
        for (int m = 1; m <= pp.nu; ++m) {
            cplx invp = std::pow(k - pp.pole, -m);
            Vec2 inner{0.0, 0.0};
            for (int sg = 0; sg < pp.nu; ++sg) {
                cplx c = polyval(pp.coeff[m - 1][sg], x);
                inner[0] += c * upper_N[j][sg][0];
                inner[1] += c * upper_N[j][sg][1];
            }
            v[0] += invp * phase * inner[0];
            v[1] += invp * phase * inner[1];
        }
    }
    return v;
}

Vec2 ReconstructionAtX::psi(cplx k) const {
    Vec2 v = N(k);
    cplx ph = std::exp(I * k * x);
    return {v[0] * ph, v[1] * ph};
}

Vec2 ReconstructionAtX::psi_bar(cplx k) const {
    Vec2 v = Nbar(k);
    cplx ph = std::exp(-I * k * x);
    return {v[0] * ph, v[1] * ph};
}

cplx ReconstructionAtX::q() const {
    cplx acc = 0.0;
    for (size_t l = 0; l < lower_pp.size(); ++l) {
        const auto& pp = lower_pp[l];
        cplx phase = std::exp(cplx(0.0, -2.0) * pp.pole * x);
        cplx inner = 0.0;
        for (int sg = 0; sg < pp.nu; ++sg)
            inner += polyval(pp.coeff[0][sg], x) * lower_N[l][sg][0];
        acc += phase * inner;
    }
    return cplx(0.0, 2.0) * acc;
}

cplx ReconstructionAtX::r() const {
    cplx acc = 0.0;
    for (size_t j = 0; j < upper_pp.size(); ++j) {
        const auto& pp = upper_pp[j];
        cplx phase = std::exp(cplx(0.0, 2.0) * pp.pole * x);
        cplx inner = 0.0;
        for (int sg = 0; sg < pp.nu; ++sg)
            inner += polyval(pp.coeff[0][sg], x) * upper_N[j][sg][1];
        acc += phase * inner;
    }
    return cplx(0.0, -2.0) * acc;
}

JostValues solve_jost(const ReconstructionInput& input, cplx x, cplx k) {
    for (const auto& e : input.upper)
        if (std::abs(k - e.location) < 1e-12 * (1.0 + std::abs(k)))
            throw PoleCollision("evaluation point coincides with an upper eigen location");
    for (const auto& e : input.lower)
        if (std::abs(k - e.location) < 1e-12 * (1.0 + std::abs(k)))
            throw PoleCollision("evaluation point coincides with a lower eigen location");
    ReconstructionAtX at = solve_reconstruction(input, x);
    return {at.N(k), at.Nbar(k), at.psi(k), at.psi_bar(k)};
}

RecoveredPotential recover_potentials(const ReconstructionInput& input,
                                      const std::vector<double>& xs,
                                      const RecoverOptions& opt) {
    validate(input);
    if (xs.empty()) throw InputError("recover_potentials: empty grid");
    RecoveredPotential out;
    for (const auto& e : input.upper)
        if (e.multiplicity >= 3)
            out.warnings.push_back("multiplicity " + std::to_string(e.multiplicity) +
                                   " uses the generic series path; no golden data covers it");
    for (const auto& e : input.lower)
        if (e.multiplicity >= 3)
            out.warnings.push_back("multiplicity " + std::to_string(e.multiplicity) +
                                   " uses the generic series path; no golden data covers it");
    double worst_rich = 0.0;
    for (double x : xs) {
        PotentialSample s;
        s.x = x;
        try {
            ReconstructionAtX at = solve_reconstruction(input, cplx(x, 0.0));
            s.q = at.q();
            s.r = at.r();
            s.condition = at.condition;
            if (opt.cross_check) {
                // the exact coefficient sums must agree with the numerical
                // large-k limit of the envelopes (Richardson in 1/k)
                const double K1 = 1e3, K2 = 1e4;
                cplx f1 = cplx(0.0, 2.0) * K1 * at.N(cplx(K1, 0.0))[0];
                cplx f2 = cplx(0.0, 2.0) * K2 * at.N(cplx(K2, 0.0))[0];
                cplx qr = (K2 * f2 - K1 * f1) / (K2 - K1);
                cplx g1 = cplx(0.0, -2.0) * K1 * at.Nbar(cplx(K1, 0.0))[1];
                cplx g2 = cplx(0.0, -2.0) * K2 * at.Nbar(cplx(K2, 0.0))[1];
                cplx rr = (K2 * g2 - K1 * g1) / (K2 - K1);
                double dev = std::max(std::abs(qr - s.q) / (1.0 + std::abs(s.q)),
                                      std::abs(rr - s.r) / (1.0 + std::abs(s.r)));
                worst_rich = std::max(worst_rich, dev);
            }
        } catch (const SingularSystem&) {
            s.singular = true;
            s.condition = std::numeric_limits<double>::infinity();
            out.pole_candidates.push_back(x);
        }
        out.samples.push_back(s);
    }
    if (opt.cross_check && worst_rich > opt.richardson_tol)
        out.warnings.push_back("large-k cross-check deviates by " + std::to_string(worst_rich) +
                               " from the exact coefficient sums");
    return out;
}

namespace {

// shared mutable state behind the closures of a reconstructed pair; only the
// most recent point is cached (q and r at the same x share one solve) --
// an unbounded map would grow with every ODE evaluation point
struct ReconState {
    ReconstructionInput input;
    std::optional<std::pair<cplx, ReconstructionAtX>> last;
    std::optional<std::pair<cplx, cplx>> last_det;

    const ReconstructionAtX& at(cplx x) {
        if (!last || last->first != x) last.emplace(x, solve_reconstruction(input, x));
        return last->second;
    }

    cplx det(cplx x) {
        if (!last_det || last_det->first != x) {
            AssembledSystem sys = assemble_linear_system(input, x);
            last_det.emplace(x, Eigen::FullPivLU<Eigen::MatrixXcd>(sys.matrix).determinant());
        }
        return last_det->second;
    }
};

}  // namespace

PotentialPair reconstructed_pair(const ReconstructionInput& input) {
    validate(input);
    if (input.upper.empty() && input.lower.empty())
        throw InputError("reconstructed_pair: no discrete data");
    auto st = std::make_shared<ReconState>();
    st->input = input;

    PotentialPair p;
    p.q_raw = [st](cplx x) { return st->at(x).q(); };
    p.r_raw = [st](cplx x) { return st->at(x).r(); };
    p.denominator = [st](cplx x) { return st->det(x); };
    p.description = "potential pair reconstructed from discrete scattering data";
    nlohmann::json rec;
    rec["kind"] = "reconstructed";
    rec["params"]["upper"] = nlohmann::json::array();
    for (const auto& e : input.upper) rec["params"]["upper"].push_back(to_json(e));
    rec["params"]["lower"] = nlohmann::json::array();
    for (const auto& e : input.lower) rec["params"]["lower"].push_back(to_json(e));
    p.record = rec;

    double min_im = std::numeric_limits<double>::infinity();
    for (const auto& e : input.upper) min_im = std::min(min_im, std::abs(e.location.imag()));
    for (const auto& e : input.lower) min_im = std::min(min_im, std::abs(e.location.imag()));
    p.decay_radius = std::max(1.0, 2.0 / min_im);

    p.real_poles = locate_real_poles(p, -8.0, 8.0);
    std::vector<double> pts;
    for (double x = -4.0; x <= 4.0 + 1e-12; x += 0.2) {
        bool clear = true;
        for (double px : p.real_poles)
            if (std::abs(x - px) < 10.0 * p.pole_exclusion) clear = false;
        if (clear) pts.push_back(x);
    }
    p.symmetry = pts.empty() ? Reduction::None : classify_symmetry(p, pts, 1e-8);
    return p;
}

RoundtripReport roundtrip(const PotentialPair& p, const Contour& contour, const Box& region,
                          const RoundtripOptions& opt) {
    RoundtripReport rep;
    rep.reflectionless = reflectionless_test(p, opt.test_ks, contour, opt.reflectionless_tol);
    if (!rep.reflectionless.reflectionless)
        throw NotReflectionless("worst reflection magnitude " +
                                std::to_string(rep.reflectionless.worst_value) + " at k = " +
                                std::to_string(rep.reflectionless.worst_k.real()) + " exceeds " +
                                std::to_string(opt.reflectionless_tol));

    rep.spectrum = extract_discrete_data(p, contour, region, opt.extract);
    ReconstructionInput input = reconstruction_input_from(rep.spectrum);
    validate(input);
    if (input.upper.empty() && input.lower.empty())
        throw IncompleteData("roundtrip: no discrete data found in the region");

    std::vector<double> xs = opt.xs;
    if (xs.empty()) {
        for (int i = 0; i < 81; ++i) xs.push_back(-4.0 + 8.0 * i / 80.0);
    }
    rep.recovered = recover_potentials(input, xs);

    auto near_pole = [&](double x) {
        for (double px : p.real_poles)
            if (std::abs(x - px) < opt.pole_avoid) return true;
        for (double px : rep.recovered.pole_candidates)
            if (std::abs(x - px) < opt.pole_avoid) return true;
        return false;
    };
    for (const auto& s : rep.recovered.samples) {
        if (s.singular || near_pole(s.x)) continue;
        try {
            cplx qt = p.q(cplx(s.x, 0.0));
            cplx rt = p.r(cplx(s.x, 0.0));
            rep.max_rel_deviation_q = std::max(rep.max_rel_deviation_q,
                                               std::abs(s.q - qt) / (1.0 + std::abs(qt)));
            rep.max_rel_deviation_r = std::max(rep.max_rel_deviation_r,
                                               std::abs(s.r - rt) / (1.0 + std::abs(rt)));
        } catch (const EvaluationNearPole&) {
            continue;
        }
    }

    // forward-scatter the reconstruction and compare coefficients
    PotentialPair rp = reconstructed_pair(input);
    Contour rc = build_contour(rp);
    for (double k : opt.rescatter_ks) {
        ScatteringData d1 = scatter_at(p, cplx(k, 0.0), contour);
        ScatteringData d2 = scatter_at(rp, cplx(k, 0.0), rc);
        auto gap = [](const std::optional<cplx>& u, const std::optional<cplx>& v) {
            if (!u || !v) return 0.0;
            return std::abs(*u - *v);
        };
        double dev = std::max(std::max(gap(d1.a, d2.a), gap(d1.a_bar, d2.a_bar)),
                              std::max(gap(d1.b, d2.b), gap(d1.b_bar, d2.b_bar)));
        rep.max_rescatter_deviation = std::max(rep.max_rescatter_deviation, dev);
    }

    for (const auto& w : rep.spectrum.warnings) rep.warnings.push_back(w);
    for (const auto& w : rep.recovered.warnings) rep.warnings.push_back(w);
    return rep;
}

}  // namespace zs
