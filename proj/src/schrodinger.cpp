#include "zs/schrodinger.hpp"

#include <cmath>
#include <memory>

#include "zs/poly.hpp"

namespace zs {

namespace {

Poly poly_from_record(const nlohmann::json& arr) {
    std::vector<cplx> c;
    for (const auto& e : arr) {
        if (e.is_number())
            c.emplace_back(e.get<double>(), 0.0);
        else
            c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return Poly{std::move(c)};
}

// derivative of an analytic evaluator at x via a trapezoid Cauchy integral on
// a small circle, shrinking the radius when the circle clips a pole exclusion
cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx x, int order, double radius0) {
    const int n = 32;
    double radius = radius0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            cplx acc = 0.0;
            for (int i = 0; i < n; ++i) {
                double th = 2.0 * pi * i / n;
                cplx w = radius * cplx(std::cos(th), std::sin(th));
                // f(x + w) / w^order summed over the uniform grid gives
                // f^(order)(x) * radius^0 ... / order! after normalization
                acc += f(x + w) / std::pow(w, order);
            }
            double fact = 1.0;
            for (int m = 2; m <= order; ++m) fact *= m;
            return acc * fact / double(n);
        } catch (const NumericalError&) {
            radius *= 0.5;
        }
    }
    throw EvaluationNearPole("no pole-free derivative circle found near the requested point");
}

}  // namespace

SchrodingerForm schrodinger_form(const PotentialPair& p) {
    SchrodingerForm sf;
    const std::string kind = p.record.value("kind", "");

    if (kind == "rational_in_x") {
        const auto& params = p.record.at("params");
        Poly P = poly_from_record(params.at("q_numerator"));
        Poly Q = poly_from_record(params.at("q_denominator"));
        if (P.is_zero()) throw DivisionByZeroPotential("q is identically zero");
        Poly dP = P.derivative(), dQ = Q.derivative();
        Poly W = dP * Q - P * dQ;   // numerator of q_x over Q^2
        Poly dW = W.derivative();
        auto r_eval = p.r_raw;
        auto q_eval = p.q_raw;

        sf.u1_eval = [P, Q, W](cplx x) {
            cplx pv = P(x), qv = Q(x);
            if (std::abs(pv) < 1e-280) throw DivisionByZeroPotential("u1 requested at a zero of q");
            if (std::abs(qv) < 1e-280) throw EvaluationNearPole("u1 requested at a pole of q");
            return W(x) / (pv * qv);
        };
        sf.u2_eval = [P, Q, W, dW, dQ, q_eval, r_eval](cplx x) {
            cplx pv = P(x), qv = Q(x);
            if (std::abs(pv) < 1e-280) throw DivisionByZeroPotential("u2 requested at a zero of q");
            if (std::abs(qv) < 1e-280) throw EvaluationNearPole("u2 requested at a pole of q");
            // q_xx / (2q) = (W'Q - 2WQ') / (2 Q^2 P)
            cplx qxx_over_q = (dW(x) * qv - 2.0 * W(x) * dQ(x)) / (2.0 * qv * qv * pv);
            cplx u1 = W(x) / (pv * qv);
            return qxx_over_q - 0.75 * u1 * u1 - q_eval(x) * r_eval(x);
        };
        sf.m1 = P.degree();
        sf.m2 = Q.degree();
        sf.order_u1_at_infinity = 1;
        sf.order_u2_at_infinity = std::min(2 * (Q.degree() - P.degree()), 2);
        return sf;
    }

    // generic meromorphic path: derivatives by Cauchy circles
    auto pp = std::make_shared<PotentialPair>(p);
    auto q_fn = [pp](cplx z) { return pp->q(z); };
    sf.u1_eval = [pp, q_fn](cplx x) {
        cplx q = pp->q(x);
        cplx dq = cauchy_derivative(q_fn, x, 1, 0.05);
        if (std::abs(q) < 1e-12 * (1.0 + std::abs(dq)))
            throw DivisionByZeroPotential("u1 requested at a zero of q");
        return dq / q;
    };
    sf.u2_eval = [pp, q_fn](cplx x) {
        cplx q = pp->q(x);
        cplx dq = cauchy_derivative(q_fn, x, 1, 0.05);
        cplx ddq = cauchy_derivative(q_fn, x, 2, 0.05);
        if (std::abs(q) < 1e-12 * (1.0 + std::abs(dq)))
            throw DivisionByZeroPotential("u2 requested at a zero of q");
        cplx u1 = dq / q;
        return ddq / (2.0 * q) - 0.75 * u1 * u1 - q * pp->r(x);
    };
    return sf;
}

}  // namespace zs
