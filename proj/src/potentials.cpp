#include "zs/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zs/poly.hpp"
#include "zs/reconstruct.hpp"
#include "zs/serialize.hpp"

namespace zs {

std::string to_string(Reduction r) {
    switch (r) {
        case Reduction::REqQ: return "r_eq_q";
        case Reduction::REqNegQ: return "r_eq_neg_q";
        case Reduction::REqConjQ: return "r_eq_conj_q";
        case Reduction::REqNegConjQ: return "r_eq_neg_conj_q";
        case Reduction::None: return "none";
    }
    return "none";
}

Reduction reduction_from_string(const std::string& s) {
    if (s == "r_eq_q" || s == "q" || s == "i") return Reduction::REqQ;
    if (s == "r_eq_neg_q" || s == "-q" || s == "ii") return Reduction::REqNegQ;
    if (s == "r_eq_conj_q" || s == "conj_q" || s == "iii") return Reduction::REqConjQ;
    if (s == "r_eq_neg_conj_q" || s == "-conj_q" || s == "iv") return Reduction::REqNegConjQ;
    if (s == "none") return Reduction::None;
    throw SchemaError("unknown reduction tag '" + s + "'");
}

cplx PotentialPair::guarded(const std::function<cplx(cplx)>& f, cplx x) const {
    for (double p : real_poles)
        if (std::abs(x - cplx(p, 0.0)) < pole_exclusion)
            throw EvaluationNearPole("point within exclusion radius of real pole at x = " +
                                     std::to_string(p));
    for (cplx p : complex_poles)
        if (std::abs(x - p) < pole_exclusion)
            throw EvaluationNearPole("point within exclusion radius of a complex pole");
    cplx v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw EvaluationNearPole("evaluator returned a non-finite value (unlisted pole?)");
    return v;
}

namespace {

using nlohmann::json;

const json& require(const json& params, const char* key) {
    if (!params.is_object() || !params.contains(key))
        throw SchemaError(std::string("missing required field '") + key + "'");
    return params.at(key);
}

cplx parse_cplx(const json& j, const char* what) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw SchemaError(std::string(what) + " must be a number or an [re, im] pair");
}

Poly parse_poly(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw SchemaError(std::string(what) + " must be a nonempty coefficient array");
    std::vector<cplx> c;
    c.reserve(j.size());
    for (const auto& e : j) c.push_back(parse_cplx(e, what));
    return Poly{std::move(c)};
}

json poly_record(const Poly& p) {
    json a = json::array();
    for (cplx c : p.c) a.push_back(json::array({c.real(), c.imag()}));
    return a;
}

// r(x) derived from q as an analytic function: on the real axis the four
// reductions read r = q, -q, conj q, -conj q; off the axis conjugation becomes
// x -> conj(q(conj x)) so the evaluator stays meromorphic.
std::function<cplx(cplx)> derive_r(const std::function<cplx(cplx)>& q, Reduction red) {
    switch (red) {
        case Reduction::REqQ: return q;
        case Reduction::REqNegQ: return [q](cplx x) { return -q(x); };
        case Reduction::REqConjQ: return [q](cplx x) { return std::conj(q(std::conj(x))); };
        case Reduction::REqNegConjQ:
            return [q](cplx x) { return -std::conj(q(std::conj(x))); };
        case Reduction::None: break;
    }
    throw SchemaError("a concrete reduction tag is required to derive r from q");
}

// refine one approximate root of f by the complex secant method
std::optional<cplx> secant_root(const std::function<cplx(cplx)>& f, cplx z0, double tol,
                                int cap = 80) {
    cplx z1 = z0 + 1e-4, f0, f1;
    try {
        f0 = f(z0);
        f1 = f(z1);
    } catch (const NumericalError&) {
        return std::nullopt;
    }
    for (int it = 0; it < cap; ++it) {
        if (f1 == f0) return std::nullopt;
        cplx z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
        if (!std::isfinite(z2.real()) || !std::isfinite(z2.imag())) return std::nullopt;
        if (std::abs(z2 - z1) < tol * 0.1) return z2;
        z0 = z1;
        f0 = f1;
        z1 = z2;
        try {
            f1 = f(z1);
        } catch (const NumericalError&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

PotentialPair build_zero() {
    PotentialPair p;
    p.q_raw = [](cplx) { return cplx(0.0); };
    p.r_raw = p.q_raw;
    p.symmetry = Reduction::REqQ;
    p.decay_radius = 1.0;
    p.description = "identically zero pair";
    p.record = {{"kind", "zero"}, {"params", json::object()}};
    return p;
}

PotentialPair build_rational_in_x(const json& params) {
    Poly qn = parse_poly(require(params, "q_numerator"), "q_numerator");
    Poly qd = parse_poly(require(params, "q_denominator"), "q_denominator");
    if (qd.is_zero()) throw SchemaError("q_denominator is the zero polynomial");
    if (!qn.is_zero() && qn.degree() >= qd.degree())
        throw SchemaError("rational_in_x requires numerator degree < denominator degree");

    Poly rn, rd;
    Reduction declared = Reduction::None;
    if (params.contains("r_numerator") || params.contains("r_denominator")) {
        rn = parse_poly(require(params, "r_numerator"), "r_numerator");
        rd = parse_poly(require(params, "r_denominator"), "r_denominator");
        if (rd.is_zero()) throw SchemaError("r_denominator is the zero polynomial");
        if (!rn.is_zero() && rn.degree() >= rd.degree())
            throw SchemaError("rational_in_x requires numerator degree < denominator degree");
    } else {
        declared = reduction_from_string(params.value("reduction", "r_eq_q"));
    }

    PotentialPair p;
    p.q_raw = [qn, qd](cplx x) { return qn(x) / qd(x); };
    if (declared == Reduction::None) {
        p.r_raw = [rn, rd](cplx x) { return rn(x) / rd(x); };
        p.denominator = [qd, rd](cplx x) { return qd(x) * rd(x); };
    } else {
        // a declared reduction is authoritative: distinct reductions can agree
        // pointwise (r = -q vs r = -conj q for real q) yet tie different
        // coefficient identities, so no re-classification happens here
        p.symmetry = declared;
        p.r_raw = derive_r(p.q_raw, declared);
        p.denominator = [qd](cplx x) { return qd(x); };
    }

    // poles = denominator roots, polished by Newton on the polynomial itself
    auto collect = [&p](const Poly& den) {
        Poly dden = den.derivative();
        for (cplx z : poly_roots(den)) {
            for (int it = 0; it < 50; ++it) {
                cplx f = den(z), df = dden(z);
                if (std::abs(df) == 0.0) break;
                cplx step = f / df;
                z -= step;
                if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
            }
            if (std::abs(z.imag()) < 1e-10)
                p.real_poles.push_back(z.real());
            else
                p.complex_poles.push_back(z);
        }
    };
    collect(qd);
    if (declared == Reduction::None) {
        collect(rd);
    } else if (declared == Reduction::REqConjQ || declared == Reduction::REqNegConjQ) {
        // r's poles are the conjugates of q's
        std::vector<cplx> extra;
        for (cplx z : p.complex_poles) extra.push_back(std::conj(z));
        p.complex_poles.insert(p.complex_poles.end(), extra.begin(), extra.end());
    }
    std::sort(p.real_poles.begin(), p.real_poles.end());
    p.real_poles.erase(std::unique(p.real_poles.begin(), p.real_poles.end(),
                                   [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                       p.real_poles.end());

    double rmax = 1.0;
    for (double x : p.real_poles) rmax = std::max(rmax, std::abs(x));
    for (cplx z : p.complex_poles) rmax = std::max(rmax, std::abs(z));
    p.decay_radius = 2.0 * rmax;
    p.description = "rational pair in x";
    json rec = {{"kind", "rational_in_x"},
                {"params",
                 {{"q_numerator", poly_record(qn)}, {"q_denominator", poly_record(qd)}}}};
    if (declared == Reduction::None) {
        rec["params"]["r_numerator"] = poly_record(rn);
        rec["params"]["r_denominator"] = poly_record(rd);
    } else {
        rec["params"]["reduction"] = to_string(declared);
    }
    p.record = rec;
    return p;
}

PotentialPair build_rational_in_exp(const json& params) {
    cplx lambda = parse_cplx(require(params, "lambda"), "lambda");
    if (lambda.real() <= 0.0) throw SchemaError("lambda must have positive real part");
    Poly qn = parse_poly(require(params, "q_numerator"), "q_numerator");
    Poly qd = parse_poly(require(params, "q_denominator"), "q_denominator");
    if (qd.is_zero()) throw SchemaError("q_denominator is the zero polynomial");
    auto low_order = [](const Poly& p) {
        for (size_t i = 0; i < p.c.size(); ++i)
            if (std::abs(p.c[i]) != 0.0) return static_cast<int>(i);
        return -1;
    };
    if (!qn.is_zero()) {
        // E = e^{lambda x}: decay at +inf needs deg P < deg Q, at -inf needs
        // the valuation of P at E = 0 to exceed Q's
        if (qn.degree() >= qd.degree())
            throw SchemaError("rational_in_exp decays at +inf only if numerator degree < "
                              "denominator degree (in e^{lambda x})");
        if (low_order(qn) <= low_order(qd))
            throw SchemaError("rational_in_exp decays at -inf only if the numerator's lowest "
                              "power of e^{lambda x} exceeds the denominator's");
    }
    Reduction declared = reduction_from_string(params.value("reduction", "r_eq_q"));

    PotentialPair p;
    p.symmetry = declared;
    const double overflow_cap = 280.0 / std::max(1, qd.degree());
    p.q_raw = [qn, qd, lambda, overflow_cap](cplx x) {
        // beyond this the ratio has decayed below double range anyway
        if ((lambda * x).real() > overflow_cap) return cplx(0.0);
        cplx E = std::exp(lambda * x);
        return qn(E) / qd(E);
    };
    p.r_raw = derive_r(p.q_raw, declared);
    p.denominator = [qd, lambda](cplx x) { return qd(std::exp(lambda * x)); };

    // poles: e^{lambda x} = w for each root w of the denominator
    for (cplx w : poly_roots(qd)) {
        if (std::abs(w) == 0.0) continue;
        cplx logw = std::log(w);
        for (int n = -50; n <= 50; ++n) {
            cplx x = (logw + cplx(0.0, 2.0 * pi * n)) / lambda;
            if (std::abs(x.real()) > 60.0 || std::abs(x.imag()) > 12.0) continue;
            if (std::abs(x.imag()) < 1e-10)
                p.real_poles.push_back(x.real());
            else
                p.complex_poles.push_back(x);
        }
    }
    std::sort(p.real_poles.begin(), p.real_poles.end());
    double rmax = 1.0 / lambda.real();
    for (double x : p.real_poles) rmax = std::max(rmax, std::abs(x));
    p.decay_radius = 2.0 * std::max(1.0, rmax);
    p.description = "rational pair in e^{lambda x}";
    p.record = {{"kind", "rational_in_exp"},
                {"params",
                 {{"lambda", json::array({lambda.real(), lambda.imag()})},
                  {"q_numerator", poly_record(qn)},
                  {"q_denominator", poly_record(qd)},
                  {"reduction", to_string(declared)}}}};
    return p;
}

PotentialPair build_sech_family(const json& params) {
    cplx A = parse_cplx(require(params, "amplitude"), "amplitude");
    Reduction declared = reduction_from_string(
        require(params, "reduction").get_ref<const std::string&>());

    PotentialPair p;
    p.symmetry = declared;
    p.q_raw = [A](cplx x) { return A * sech(x); };
    p.r_raw = derive_r(p.q_raw, declared);
    p.denominator = [](cplx x) { return std::cosh(x); };
    for (int n = -4; n <= 3; ++n) p.complex_poles.push_back(cplx(0.0, pi * (n + 0.5)));
    p.decay_radius = 1.0;
    p.description = "sech pair, amplitude " + std::to_string(A.real());
    p.record = {{"kind", "sech_family"},
                {"params",
                 {{"amplitude", json::array({A.real(), A.imag()})},
                  {"reduction", to_string(declared)}}}};
    return p;
}

// Two-pole reflectionless pair with a double eigenvalue at k = i. The closed
// form is pinned by self-consistency of its discrete scattering data
// (a(k) = (k-i)^2/(k+i)^2, b = 0 on the real line) and by the pole locations
// of the shared denominator d.
PotentialPair build_negaton() {
    auto d_direct = [](cplx x) {
        cplx e4 = std::exp(4.0 * x);
        return e4 * e4 - 2.0 * (8.0 * x * x + 8.0 * x + 3.0) * e4 + 1.0;
    };
    PotentialPair p;
    // The direct forms stay within double range out to Re x ~ 35; switching to
    // the e^{-8x}-rescaled tail at 30 keeps the seam beyond the contour tube
    // (|Re| <= half_length + probe radius), so the winding probes never see a
    // circle straddling the rescale jump.
    p.q_raw = [d_direct](cplx x) {
        if (x.real() <= 30.0) {
            cplx e2 = std::exp(2.0 * x), e4 = e2 * e2;
            return -16.0 * e2 * (x * e4 + x + 1.0) / d_direct(x);
        }
        // rescaled by e^{-8x} to dodge overflow on the right tail
        cplx em2 = std::exp(-2.0 * x), em4 = em2 * em2, em6 = em4 * em2, em8 = em4 * em4;
        cplx num = -16.0 * (x * em2 + (x + 1.0) * em6);
        cplx den = 1.0 - 2.0 * (8.0 * x * x + 8.0 * x + 3.0) * em4 + em8;
        return num / den;
    };
    p.r_raw = p.q_raw;
    p.symmetry = Reduction::REqQ;
    p.denominator = [d_direct](cplx x) {
        if (x.real() <= 30.0) return d_direct(x);
        cplx em4 = std::exp(-4.0 * x);
        return 1.0 - 2.0 * (8.0 * x * x + 8.0 * x + 3.0) * em4 + em4 * em4;
    };
    p.real_poles = {-0.24503653424027389, 0.86455844910718743};
    p.complex_poles = {
        {-0.50688035520308524, 0.77964786125778938}, {-0.50688035520308524, -0.77964786125778938},
        {1.17204571836652910, 2.00398822017505214},  {1.17204571836652910, -2.00398822017505214},
        {-1.10468695043676719, 2.22015083406380710}, {-1.10468695043676719, -2.22015083406380710}};
    p.decay_radius = 2.0;
    p.description = "negaton pair: reflectionless, double eigenvalue at k = i";
    p.record = {{"kind", "negaton"}, {"params", json::object()}};
    return p;
}

}  // namespace

PotentialPair make_potential(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string())
        throw SchemaError("constructor record must be an object with a string 'kind'");
    const std::string kind = spec.at("kind").get<std::string>();
    const json params = spec.value("params", json::object());

    PotentialPair p;
    if (kind == "zero") {
        p = build_zero();
    } else if (kind == "rational_in_x") {
        p = build_rational_in_x(params);
    } else if (kind == "rational_in_exp") {
        p = build_rational_in_exp(params);
    } else if (kind == "sech_family") {
        p = build_sech_family(params);
    } else if (kind == "negaton" || kind == "negaton_example31") {
        p = build_negaton();
    } else if (kind == "reconstructed") {
        ReconstructionInput input = reconstruction_input_from_json(params);
        return reconstructed_pair(input);
    } else {
        throw SchemaError("unknown potential kind '" + kind + "'");
    }

    if (p.symmetry == Reduction::None) {
        std::vector<double> samples;
        for (int i = 0; i <= 40; ++i) {
            double x = -4.0 + 0.2 * i;
            bool clear = true;
            for (double rp : p.real_poles)
                if (std::abs(x - rp) < 2.0 * p.pole_exclusion) clear = false;
            if (clear) samples.push_back(x);
        }
        p.symmetry = classify_symmetry(p, samples, 1e-10);
    }
    return p;
}

std::vector<double> locate_real_poles(const PotentialPair& p, double window_lo, double window_hi,
                                      double tol) {
    if (!(window_hi > window_lo) || !(tol > 0.0))
        throw InputError("locate_real_poles: window must be nonempty and tol positive");

    // f vanishes exactly at the poles: the denominator when the record carries
    // one, 1/q otherwise (1/q extends analytically through simple poles of q).
    std::function<cplx(cplx)> f;
    if (p.denominator) {
        f = p.denominator;
    } else {
        f = [&p](cplx x) {
            cplx q = p.q_raw(x);
            if (q == cplx(0.0)) return cplx(std::numeric_limits<double>::infinity(), 0.0);
            return 1.0 / q;
        };
    }

    const int n = std::max(2001, static_cast<int>((window_hi - window_lo) / 0.002));
    std::vector<double> mag(n + 1);
    std::vector<double> xs(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = window_lo + (window_hi - window_lo) * i / n;
        cplx v = f(cplx(xs[i], 0.0));
        mag[i] = (std::isfinite(v.real()) && std::isfinite(v.imag()))
                     ? std::abs(v)
                     : std::numeric_limits<double>::infinity();
    }
    std::vector<double> roots;
    auto try_seed = [&](double x0) {
        auto z = secant_root(f, cplx(x0, 0.0), tol);
        if (!z) return;
        if (std::abs(z->imag()) > 10.0 * tol) return;
        double xr = z->real();
        if (xr < window_lo - tol || xr > window_hi + tol) return;
        for (double r : roots)
            if (std::abs(r - xr) < std::max(100.0 * tol, 1e-7)) return;
        roots.push_back(xr);
    };
    for (int i = 1; i < n; ++i)
        if (mag[i] <= mag[i - 1] && mag[i] <= mag[i + 1] && std::isfinite(mag[i])) try_seed(xs[i]);
    std::sort(roots.begin(), roots.end());
    return roots;
}

Reduction classify_symmetry(const PotentialPair& p, const std::vector<double>& sample_points,
                            double tol) {
    if (sample_points.empty())
        throw InputError("classify_symmetry: at least one sample point required");
    auto fits = [&](auto&& transform) {
        for (double x : sample_points) {
            cplx q = p.q(cplx(x, 0.0)), r = p.r(cplx(x, 0.0));
            if (std::abs(r - transform(q)) > tol) return false;
        }
        return true;
    };
    // fixed tie-break order
    if (fits([](cplx q) { return q; })) return Reduction::REqQ;
    if (fits([](cplx q) { return -q; })) return Reduction::REqNegQ;
    if (fits([](cplx q) { return std::conj(q); })) return Reduction::REqConjQ;
    if (fits([](cplx q) { return -std::conj(q); })) return Reduction::REqNegConjQ;
    return Reduction::None;
}

double tail_integral(const PotentialPair& p, double R) {
    if (!(R > 0.0)) throw InputError("tail_integral: R must be positive");
    // 8-point Gauss-Legendre on [-1, 1]
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};
    auto integrand = [&p](double x) {
        return std::abs(p.q(cplx(x, 0.0))) + std::abs(p.r(cplx(x, 0.0)));
    };
    auto window = [&](double a, double b) {
        double total = 0.0;
        const int panels = 16;
        for (int i = 0; i < panels; ++i) {
            double lo = a + (b - a) * i / panels, hi = a + (b - a) * (i + 1) / panels;
            double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int j = 0; j < 4; ++j)
                total += half * gw[j] * (integrand(mid - half * gx[j]) +
                                         integrand(mid + half * gx[j]));
        }
        return total;
    };
    return window(R, 2.0 * R) + window(-2.0 * R, -R);
}

}  // namespace zs
