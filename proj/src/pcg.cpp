#include "romflux/pcg.hpp"

#include <cmath>

namespace romflux {

PpeResult solve_ppe(const SparseOperator& L, const std::vector<double>& rhs,
                    int ref_cell, double p_ref, double tol, int max_iter,
                    const std::vector<double>* guess) {
    const int n = L.rows();
    require(L.cols() == n, "solve_ppe: operator must be square");
    require(static_cast<int>(rhs.size()) == n, "solve_ppe: rhs size mismatch");
    require(ref_cell >= 0 && ref_cell < n, "solve_ppe: ref_cell out of range");
    require(tol > 0.0, "solve_ppe: tolerance must be positive");

    // Work with A = -L (positive semidefinite) and b = -rhs, with the
    // constant component removed from b.
    std::vector<double> b(n);
    double mean = 0.0;
    for (double v : rhs) mean += v;
    mean /= n;
    for (int i = 0; i < n; ++i) b[i] = -(rhs[i] - mean);

    const double bnorm = std::sqrt(blocked_dot(b, b));
    PpeResult out;
    out.p.assign(n, p_ref);
    if (bnorm == 0.0) return out;

    std::vector<double> diag(n, 1.0);
    for (int r = 0; r < n; ++r) {
        const double d = -L.coeff(r, r);
        if (d > 0.0) diag[r] = 1.0 / d;
    }

    std::vector<double> x(n, 0.0);
    if (guess && static_cast<int>(guess->size()) == n) x = *guess;

    std::vector<double> r(n), z(n), p(n), q(n);
    L.apply(std::span<const double>(x), std::span<double>(r));  // r = L x
    for (int i = 0; i < n; ++i) r[i] = b[i] + r[i];             // b - (-L)x
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
    p = z;
    double rho = blocked_dot(r, z);
    double rnorm = std::sqrt(blocked_dot(r, r));

    int it = 0;
    while (rnorm > tol * bnorm && it < max_iter) {
        L.apply(std::span<const double>(p), std::span<double>(q));
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) q[i] = -q[i];  // A p
        const double alpha = rho / blocked_dot(p, q);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
        const double rho2 = blocked_dot(r, z);
        const double beta = rho2 / rho;
        rho = rho2;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rnorm = std::sqrt(blocked_dot(r, r));
        ++it;
    }

    out.iterations = it;
    out.residual = rnorm / bnorm;
    if (rnorm > tol * bnorm)
        throw NumericalError("solve_ppe: no convergence in " + std::to_string(max_iter) +
                             " iterations, relative residual " + std::to_string(out.residual));

    const double shift = p_ref - x[ref_cell];
    for (int i = 0; i < n; ++i) out.p[i] = x[i] + shift;
    return out;
}

}  // namespace romflux
