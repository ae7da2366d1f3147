#pragma once

#include <vector>

#include "zs/common.hpp"

namespace zs {

// Dense polynomial with complex coefficients, ascending powers.
struct Poly {
    std::vector<cplx> c;

    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for the zero polynomial
    bool is_zero() const { return c.empty(); }

    cplx operator()(cplx x) const {
        cplx v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
        return v;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly{};
        std::vector<cplx> d(c.size() - 1);
        for (size_t n = 1; n < c.size(); ++n) d[n - 1] = double(n) * c[n];
        return Poly{std::move(d)};
    }

    friend Poly operator*(const Poly& p, const Poly& q) {
        if (p.is_zero() || q.is_zero()) return Poly{};
        std::vector<cplx> r(p.c.size() + q.c.size() - 1, 0.0);
        for (size_t i = 0; i < p.c.size(); ++i)
            for (size_t j = 0; j < q.c.size(); ++j) r[i + j] += p.c[i] * q.c[j];
        return Poly{std::move(r)};
    }
    friend Poly operator+(const Poly& p, const Poly& q) {
        std::vector<cplx> r(std::max(p.c.size(), q.c.size()), 0.0);
        for (size_t i = 0; i < p.c.size(); ++i) r[i] += p.c[i];
        for (size_t i = 0; i < q.c.size(); ++i) r[i] += q.c[i];
        return Poly{std::move(r)};
    }
    friend Poly operator-(const Poly& p, const Poly& q) {
        std::vector<cplx> r(std::max(p.c.size(), q.c.size()), 0.0);
        for (size_t i = 0; i < p.c.size(); ++i) r[i] += p.c[i];
        for (size_t i = 0; i < q.c.size(); ++i) r[i] -= q.c[i];
        return Poly{std::move(r)};
    }
    friend Poly operator*(cplx s, const Poly& p) {
        std::vector<cplx> r = p.c;
        for (auto& v : r) v *= s;
        return Poly{std::move(r)};
    }
};

// All complex roots via the companion-matrix eigenvalue problem.
std::vector<cplx> poly_roots(const Poly& p);

}  // namespace zs
