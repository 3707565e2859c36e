#pragma once

#include <vector>

#include "romflux/core.hpp"

namespace romflux {

/// Small dense row-major matrix for reduced-space algebra.
struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    static DenseMatrix identity(int n);
    DenseMatrix transpose() const;
    DenseMatrix multiply(const DenseMatrix& o) const;
    std::vector<double> apply(const std::vector<double>& x) const;
};

/// LU factorization with partial pivoting, computed once and reused.
class LuFactorization {
  public:
    explicit LuFactorization(const DenseMatrix& a);
    std::vector<double> solve(const std::vector<double>& b) const;

  private:
    int n_;
    DenseMatrix lu_;
    std::vector<int> perm_;
};

struct EigenDecomposition {
    DenseMatrix vectors;           // columns are eigenvectors
    std::vector<double> values;    // descending
};

/// Cyclic Jacobi eigensolver for symmetric matrices; eigenvalues sorted
/// descending with matching column order.
EigenDecomposition jacobi_eigensymm(const DenseMatrix& c, int max_sweeps = 100);

}  // namespace romflux
