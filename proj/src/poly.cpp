#include "zs/poly.hpp"

#include <Eigen/Eigenvalues>

#include "zs/errors.hpp"

namespace zs {

std::vector<cplx> poly_roots(const Poly& p) {
    Poly q = p;
    q.trim();
    if (q.is_zero()) throw InputError("poly_roots: zero polynomial has no discrete root set");
    const int n = q.degree();
    if (n == 0) return {};
    // companion matrix of the monic normalization
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -q.c[i] / q.c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericalError("poly_roots: eigenvalue iteration failed to converge");
    std::vector<cplx> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    // deterministic order
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

}  // namespace zs
