#include "romflux/sparse.hpp"

#include <algorithm>
#include <numeric>

namespace romflux {

SparseOperator SparseOperator::from_triplets(int rows, int cols,
                                             std::vector<Triplet> entries) {
    for (const Triplet& t : entries)
        require(t.row >= 0 && t.row < rows && t.col >= 0 && t.col < cols,
                "SparseOperator: triplet index out of range");
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseOperator m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    size_t i = 0;
    while (i < entries.size()) {
        size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col) {
            sum += entries[j].val;
            ++j;
        }
        if (sum != 0.0) {
            m.col_idx_.push_back(entries[i].col);
            m.vals_.push_back(sum);
            ++m.row_ptr_[entries[i].row + 1];
        }
        i = j;
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
    return m;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
    require(static_cast<int>(x.size()) == cols_ && static_cast<int>(y.size()) == rows_,
            "SparseOperator::apply: dimension mismatch");
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows_; ++r) {
        double sum = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            sum += vals_[k] * x[col_idx_[k]];
        y[r] = sum;
    }
}

std::vector<double> SparseOperator::apply(const std::vector<double>& x) const {
    std::vector<double> y(rows_);
    apply(std::span<const double>(x), std::span<double>(y));
    return y;
}

SparseOperator SparseOperator::multiply(const SparseOperator& other) const {
    require(cols_ == other.rows_, "SparseOperator::multiply: inner dimension mismatch");
    std::vector<Triplet> out;
    std::vector<double> acc(other.cols_, 0.0);
    std::vector<int> marked;
    for (int r = 0; r < rows_; ++r) {
        marked.clear();
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const int mid = col_idx_[k];
            const double v = vals_[k];
            for (int k2 = other.row_ptr_[mid]; k2 < other.row_ptr_[mid + 1]; ++k2) {
                const int c = other.col_idx_[k2];
                if (acc[c] == 0.0) marked.push_back(c);
                acc[c] += v * other.vals_[k2];
            }
        }
        std::sort(marked.begin(), marked.end());
        for (int c : marked) {
            if (acc[c] != 0.0) out.push_back({r, c, acc[c]});
            acc[c] = 0.0;
        }
    }
    return from_triplets(rows_, other.cols_, std::move(out));
}

SparseOperator SparseOperator::scaled(double s) const {
    SparseOperator m = *this;
    for (double& v : m.vals_) v *= s;
    return m;
}

SparseOperator SparseOperator::add(const SparseOperator& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_,
            "SparseOperator::add: dimension mismatch");
    std::vector<Triplet> t;
    t.reserve(vals_.size() + other.vals_.size());
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            t.push_back({r, col_idx_[k], vals_[k]});
        for (int k = other.row_ptr_[r]; k < other.row_ptr_[r + 1]; ++k)
            t.push_back({r, other.col_idx_[k], other.vals_[k]});
    }
    return from_triplets(rows_, cols_, std::move(t));
}

std::vector<std::vector<double>> SparseOperator::to_dense() const {
    std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
    for (int r = 0; r < rows_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            d[r][col_idx_[k]] = vals_[k];
    return d;
}

double SparseOperator::coeff(int row, int col) const {
    for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
        if (col_idx_[k] == col) return vals_[k];
    return 0.0;
}

namespace serial {
void spmv(const SparseOperator& a, std::span<const double> x, std::span<double> y) {
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& v = a.values();
    for (int r = 0; r < a.rows(); ++r) {
        double sum = 0.0;
        for (int k = rp[r]; k < rp[r + 1]; ++k) sum += v[k] * x[ci[k]];
        y[r] = sum;
    }
}
}  // namespace serial

double blocked_dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "blocked_dot: size mismatch");
    const int n = static_cast<int>(a.size());
    constexpr int block = 1024;
    const int nblocks = (n + block - 1) / block;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (int bi = 0; bi < nblocks; ++bi) {
        double s = 0.0;
        const int end = std::min(n, (bi + 1) * block);
        for (int i = bi * block; i < end; ++i) s += a[i] * b[i];
        partial[bi] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace romflux
