#pragma once

#include <string>

#include "romflux/dense.hpp"
#include "romflux/mesh.hpp"
#include "romflux/romf.hpp"

namespace romflux {

/// Diagonal inner-product weights: cell volumes repeated per component for
/// cell fields, face-area magnitudes repeated per component for face fields.
std::vector<double> cell_weights(const StructuredMesh& mesh, int components);
std::vector<double> face_weights(const StructuredMesh& mesh);

/// Weighted orthonormal modes with the snapshot eigenvalue spectrum.
struct PodBasis {
    DenseMatrix modes;              // dof x N_r, columns are modes
    std::vector<double> eigenvalues;  // full spectrum, descending
    std::vector<double> weights;
    std::string kind;               // cell-scalar | cell-vector | face-vector

    int n_modes() const { return modes.cols; }
    int dof() const { return modes.rows; }
    PodBasis truncated(int n) const;
};

/// C_ij = sum_k s_ik s_jk w_k over the snapshot columns.
DenseMatrix correlation_matrix(const DenseMatrix& snapshots,
                               const std::vector<double>& weights);

/// Method-of-snapshots mode construction. Modes are formed from the
/// correlation eigenpairs and re-orthonormalized in the weighted inner
/// product by modified Gram-Schmidt; the entry of largest magnitude of each
/// mode is made positive so bases are deterministic.
PodBasis build_modes(const DenseMatrix& snapshots, const EigenDecomposition& eig,
                     int n_modes, const std::vector<double>& weights,
                     const std::string& kind);

/// Convenience: correlation + eigensolve + mode construction.
PodBasis pod_from_snapshots(const DenseMatrix& snapshots, int n_modes,
                            const std::vector<double>& weights,
                            const std::string& kind);

std::vector<double> project_coefficients(const std::vector<double>& field,
                                         const PodBasis& basis);

std::vector<double> reconstruct_field(const PodBasis& basis,
                                      const std::vector<double>& coeffs);

void save_basis(SnapshotSet& out, const std::string& name, const PodBasis& basis);
PodBasis load_basis(const SnapshotSet& in, const std::string& name,
                    const std::vector<double>& weights, const std::string& kind);

DenseMatrix series_to_matrix(const FieldSeries& series);

}  // namespace romflux
