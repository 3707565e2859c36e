#pragma once

#include <vector>

#include "romflux/core.hpp"
#include "romflux/mesh.hpp"

namespace romflux {

/// Per-cell 3-vector field, components interleaved (cell c at 3c..3c+2).
struct CellVectorField {
    std::vector<double> v;

    static CellVectorField zeros(const StructuredMesh& m) {
        return {std::vector<double>(3 * static_cast<size_t>(m.n_cells()), 0.0)};
    }
    Vec3 at(int c) const { return {v[3 * c], v[3 * c + 1], v[3 * c + 2]}; }
    void set(int c, const Vec3& u) { v[3 * c] = u.x; v[3 * c + 1] = u.y; v[3 * c + 2] = u.z; }
    int n_cells() const { return static_cast<int>(v.size() / 3); }
};

struct CellScalarField {
    std::vector<double> v;

    static CellScalarField zeros(const StructuredMesh& m) {
        return {std::vector<double>(static_cast<size_t>(m.n_cells()), 0.0)};
    }
};

/// Per-face 3-vector field over interior faces then boundary faces, in mesh
/// order. Holds u_f and (with zeros on interior faces) u_b.
struct FaceVectorField {
    std::vector<double> v;

    static FaceVectorField zeros(const StructuredMesh& m) {
        return {std::vector<double>(3 * static_cast<size_t>(m.n_faces()), 0.0)};
    }
    Vec3 at(int f) const { return {v[3 * f], v[3 * f + 1], v[3 * f + 2]}; }
    void set(int f, const Vec3& u) { v[3 * f] = u.x; v[3 * f + 1] = u.y; v[3 * f + 2] = u.z; }
};

/// Boundary-value face field for the cavity: lid faces carry the lid
/// velocity, wall faces zero; interior slots are zero.
inline FaceVectorField boundary_velocity_field(const StructuredMesh& m,
                                               const BoundaryPatchSet& patches) {
    FaceVectorField ub = FaceVectorField::zeros(m);
    const int fi = m.n_interior_faces();
    for (const BoundaryPatch& p : patches.patches) {
        if (p.name != "lid") continue;
        for (int b : p.faces) ub.set(fi + b, patches.lid_velocity);
    }
    return ub;
}

}  // namespace romflux
