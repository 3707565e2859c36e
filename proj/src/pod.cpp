#include "romflux/pod.hpp"

#include <algorithm>
#include <cmath>

namespace romflux {

std::vector<double> cell_weights(const StructuredMesh& mesh, int components) {
    std::vector<double> w;
    w.reserve(static_cast<size_t>(mesh.n_cells()) * components);
    for (int k = 0; k < mesh.n_cells(); ++k)
        for (int c = 0; c < components; ++c) w.push_back(mesh.cell_volumes[k]);
    return w;
}

std::vector<double> face_weights(const StructuredMesh& mesh) {
    std::vector<double> w;
    w.reserve(3 * static_cast<size_t>(mesh.n_faces()));
    for (int f = 0; f < mesh.n_interior_faces(); ++f)
        for (int c = 0; c < 3; ++c) w.push_back(mesh.face_areas[f].norm());
    for (const BoundaryFace& bf : mesh.boundary_faces)
        for (int c = 0; c < 3; ++c) w.push_back(bf.area.norm());
    return w;
}

PodBasis PodBasis::truncated(int n) const {
    require(n >= 1 && n <= modes.cols, "PodBasis::truncated: invalid mode count");
    PodBasis b;
    b.eigenvalues = eigenvalues;
    b.weights = weights;
    b.kind = kind;
    b.modes = DenseMatrix(modes.rows, n);
    for (int r = 0; r < modes.rows; ++r)
        for (int c = 0; c < n; ++c) b.modes(r, c) = modes(r, c);
    return b;
}

DenseMatrix correlation_matrix(const DenseMatrix& snapshots,
                               const std::vector<double>& weights) {
    require(snapshots.cols >= 1, "correlation_matrix: need at least one snapshot");
    require(static_cast<int>(weights.size()) == snapshots.rows,
            "correlation_matrix: weight length must match dof");
    const int ns = snapshots.cols, dof = snapshots.rows;
    DenseMatrix c(ns, ns);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < ns; ++i)
        for (int j = i; j < ns; ++j) {
            double s = 0.0;
            for (int k = 0; k < dof; ++k)
                s += snapshots(k, i) * snapshots(k, j) * weights[k];
            c(i, j) = s;
            c(j, i) = s;
        }
    return c;
}

namespace {

double weighted_dot(const DenseMatrix& m, int ci, int cj, const std::vector<double>& w) {
    double s = 0.0;
    for (int k = 0; k < m.rows; ++k) s += m(k, ci) * m(k, cj) * w[k];
    return s;
}

}  // namespace

PodBasis build_modes(const DenseMatrix& snapshots, const EigenDecomposition& eig,
                     int n_modes, const std::vector<double>& weights,
                     const std::string& kind) {
    const int ns = snapshots.cols;
    require(n_modes >= 1 && n_modes <= ns, "build_modes: invalid mode count");
    const double lam1 = eig.values.empty() ? 0.0 : eig.values[0];
    for (int i = 0; i < n_modes; ++i)
        if (eig.values[i] <= 1e-13 * lam1)
            throw ValidationError("build_modes: requested mode " + std::to_string(i + 1) +
                                  " is below the rank floor");

    PodBasis basis;
    basis.eigenvalues = eig.values;
    basis.weights = weights;
    basis.kind = kind;
    basis.modes = DenseMatrix(snapshots.rows, n_modes);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < snapshots.rows; ++k)
        for (int i = 0; i < n_modes; ++i) {
            double s = 0.0;
            for (int n = 0; n < ns; ++n) s += snapshots(k, n) * eig.vectors(n, i);
            basis.modes(k, i) = s / std::sqrt(eig.values[i]);
        }

    // Modified Gram-Schmidt in the weighted inner product.
    for (int i = 0; i < n_modes; ++i) {
        for (int j = 0; j < i; ++j) {
            const double proj = weighted_dot(basis.modes, i, j, weights);
            for (int k = 0; k < basis.modes.rows; ++k)
                basis.modes(k, i) -= proj * basis.modes(k, j);
        }
        const double nrm = std::sqrt(weighted_dot(basis.modes, i, i, weights));
        if (nrm <= 0.0)
            throw NumericalError("build_modes: zero mode after orthogonalization");
        for (int k = 0; k < basis.modes.rows; ++k) basis.modes(k, i) /= nrm;
    }

    // Deterministic sign: largest-magnitude entry positive.
    for (int i = 0; i < n_modes; ++i) {
        int arg = 0;
        double best = 0.0;
        for (int k = 0; k < basis.modes.rows; ++k)
            if (std::abs(basis.modes(k, i)) > best) { best = std::abs(basis.modes(k, i)); arg = k; }
        if (basis.modes(arg, i) < 0.0)
            for (int k = 0; k < basis.modes.rows; ++k) basis.modes(k, i) = -basis.modes(k, i);
    }
    return basis;
}

PodBasis pod_from_snapshots(const DenseMatrix& snapshots, int n_modes,
                            const std::vector<double>& weights,
                            const std::string& kind) {
    const DenseMatrix c = correlation_matrix(snapshots, weights);
    const EigenDecomposition eig = jacobi_eigensymm(c);
    return build_modes(snapshots, eig, n_modes, weights, kind);
}

std::vector<double> project_coefficients(const std::vector<double>& field,
                                         const PodBasis& basis) {
    require(static_cast<int>(field.size()) == basis.dof(),
            "project_coefficients: dof mismatch");
    std::vector<double> coeffs(basis.n_modes(), 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < basis.n_modes(); ++i) {
        double s = 0.0;
        for (int k = 0; k < basis.dof(); ++k)
            s += basis.modes(k, i) * basis.weights[k] * field[k];
        coeffs[i] = s;
    }
    return coeffs;
}

std::vector<double> reconstruct_field(const PodBasis& basis,
                                      const std::vector<double>& coeffs) {
    require(static_cast<int>(coeffs.size()) == basis.n_modes(),
            "reconstruct_field: coefficient length mismatch");
    std::vector<double> f(basis.dof(), 0.0);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < basis.dof(); ++k) {
        double s = 0.0;
        for (int i = 0; i < basis.n_modes(); ++i) s += basis.modes(k, i) * coeffs[i];
        f[k] = s;
    }
    return f;
}

void save_basis(SnapshotSet& out, const std::string& name, const PodBasis& basis) {
    out.write_matrix(name + "_modes", basis.modes.rows, basis.modes.cols, basis.modes.data);
    out.write_matrix(name + "_eigenvalues", 1, static_cast<int>(basis.eigenvalues.size()),
                     basis.eigenvalues);
}

PodBasis load_basis(const SnapshotSet& in, const std::string& name,
                    const std::vector<double>& weights, const std::string& kind) {
    const SnapshotRecord& rec = in.find_matrix(name + "_modes");
    PodBasis b;
    b.modes = DenseMatrix(rec.rows, rec.cols);
    b.modes.data = in.read_record(rec);
    b.eigenvalues = in.read_record(in.find_matrix(name + "_eigenvalues"));
    b.weights = weights;
    b.kind = kind;
    require(static_cast<int>(weights.size()) == b.modes.rows,
            "load_basis: weight length does not match stored modes");
    return b;
}

DenseMatrix series_to_matrix(const FieldSeries& series) {
    require(!series.columns.empty(), "series_to_matrix: empty series");
    const int dof = static_cast<int>(series.columns[0].size());
    DenseMatrix m(dof, static_cast<int>(series.columns.size()));
    for (int j = 0; j < m.cols; ++j) {
        require(static_cast<int>(series.columns[j].size()) == dof,
                "series_to_matrix: inconsistent record lengths");
        for (int i = 0; i < dof; ++i) m(i, j) = series.columns[j][i];
    }
    return m;
}

}  // namespace romflux
