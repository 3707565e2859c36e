#pragma once

#include "romflux/sparse.hpp"

namespace romflux {

struct PpeResult {
    std::vector<double> p;
    int iterations = 0;
    double residual = 0.0;  // final relative residual
};

/// Solve the singular pure-Neumann pressure system L p = rhs.
///
/// The constant component of rhs is projected out first (compatibility),
/// then a diagonally preconditioned conjugate gradient runs on the negated
/// (positive semidefinite) system. The solution is shifted so that
/// p[ref_cell] = p_ref. `guess` (optional) warm-starts the iteration.
PpeResult solve_ppe(const SparseOperator& L, const std::vector<double>& rhs,
                    int ref_cell, double p_ref, double tol, int max_iter,
                    const std::vector<double>* guess = nullptr);

}  // namespace romflux
