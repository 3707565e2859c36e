#include "romflux/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace romflux {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols, rows);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) t(c, r) = (*this)(r, c);
    return t;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& o) const {
    require(cols == o.rows, "DenseMatrix::multiply: inner dimension mismatch");
    DenseMatrix out(rows, o.cols);
#pragma omp parallel for schedule(static) if (rows > 64)
    for (int r = 0; r < rows; ++r)
        for (int k = 0; k < cols; ++k) {
            const double v = (*this)(r, k);
            if (v == 0.0) continue;
            for (int c = 0; c < o.cols; ++c) out(r, c) += v * o(k, c);
        }
    return out;
}

std::vector<double> DenseMatrix::apply(const std::vector<double>& x) const {
    require(static_cast<int>(x.size()) == cols, "DenseMatrix::apply: size mismatch");
    std::vector<double> y(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
        double s = 0.0;
        for (int c = 0; c < cols; ++c) s += (*this)(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

LuFactorization::LuFactorization(const DenseMatrix& a) : n_(a.rows), lu_(a) {
    require(a.rows == a.cols, "LuFactorization: matrix must be square");
    perm_.resize(n_);
    std::iota(perm_.begin(), perm_.end(), 0);
    for (int k = 0; k < n_; ++k) {
        int piv = k;
        double best = std::abs(lu_(k, k));
        for (int r = k + 1; r < n_; ++r)
            if (std::abs(lu_(r, k)) > best) { best = std::abs(lu_(r, k)); piv = r; }
        if (best == 0.0) throw NumericalError("LuFactorization: singular matrix");
        if (piv != k) {
            for (int c = 0; c < n_; ++c) std::swap(lu_(k, c), lu_(piv, c));
            std::swap(perm_[k], perm_[piv]);
        }
        for (int r = k + 1; r < n_; ++r) {
            lu_(r, k) /= lu_(k, k);
            const double f = lu_(r, k);
            for (int c = k + 1; c < n_; ++c) lu_(r, c) -= f * lu_(k, c);
        }
    }
}

std::vector<double> LuFactorization::solve(const std::vector<double>& b) const {
    require(static_cast<int>(b.size()) == n_, "LuFactorization::solve: size mismatch");
    std::vector<double> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (int i = n_ - 1; i >= 0; --i) {
        for (int j = i + 1; j < n_; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

EigenDecomposition jacobi_eigensymm(const DenseMatrix& c, int max_sweeps) {
    require(c.rows == c.cols, "jacobi_eigensymm: matrix must be square");
    const int n = c.rows;
    DenseMatrix a = c;
    DenseMatrix v = DenseMatrix::identity(n);

    double off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) off += a(i, j) * a(i, j);
    double norm = 0.0;
    for (double x : a.data) norm += x * x;
    const double stop = 1e-30 * std::max(norm, 1e-300);

    int sweep = 0;
    while (off > stop && sweep < max_sweeps) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cs * akp - sn * akq;
                    a(k, q) = sn * akp + cs * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cs * apk - sn * aqk;
                    a(q, k) = sn * apk + cs * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cs * vkp - sn * vkq;
                    v(k, q) = sn * vkp + cs * vkq;
                }
            }
        off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) off += a(i, j) * a(i, j);
        ++sweep;
    }
    if (off > stop)
        throw NumericalError("jacobi_eigensymm: iteration cap reached, off-diagonal " +
                             std::to_string(std::sqrt(off)));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

}  // namespace romflux
