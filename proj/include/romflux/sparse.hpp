#pragma once

#include <span>
#include <vector>

#include "romflux/core.hpp"

namespace romflux {

struct Triplet {
    int row, col;
    double val;
};

/// Row-compressed sparse matrix. Column indices are sorted within each row,
/// duplicates summed at construction, explicit zeros dropped. Assembly order
/// is deterministic, so identical inputs give bit-identical operators.
class SparseOperator {
  public:
    SparseOperator() = default;

    static SparseOperator from_triplets(int rows, int cols,
                                        std::vector<Triplet> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(vals_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return vals_; }

    /// y = A x. Row-parallel; bitwise identical to the serial path because
    /// each row is accumulated sequentially.
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(const std::vector<double>& x) const;

    SparseOperator multiply(const SparseOperator& other) const;
    SparseOperator scaled(double s) const;
    SparseOperator add(const SparseOperator& other) const;

    std::vector<std::vector<double>> to_dense() const;

    double coeff(int row, int col) const;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> vals_;
};

namespace serial {
/// Reference mat-vec, no threading. Kept for equivalence tests and the
/// kernel benchmark.
void spmv(const SparseOperator& a, std::span<const double> x, std::span<double> y);
}  // namespace serial

/// Deterministic dot product: fixed-size blocks summed in index order, so
/// the result does not depend on the number of OpenMP threads.
double blocked_dot(std::span<const double> a, std::span<const double> b);

}  // namespace romflux
