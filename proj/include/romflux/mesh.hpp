#pragma once

#include <vector>

#include "romflux/core.hpp"

namespace romflux {

/// A boundary face: owned by one cell, outward-oriented area vector,
/// wall-normal distance from the cell center to the face centroid.
struct BoundaryFace {
    int owner = -1;
    Vec3 area;       // outward
    Vec3 centroid;
    double d_n = 0.0;
    int patch = -1;  // assigned by classify_boundary
};

/// Uniform structured hexahedral grid of a box domain.
///
/// Interior faces are ordered x-faces, then y-faces, then z-faces,
/// lexicographic by owner cell index (flat index, x fastest). Interior
/// area vectors point owner -> neighbor (lower index -> higher index).
/// Boundary faces follow the same axis ordering, minus side before plus
/// side, lexicographic by owner cell.
struct StructuredMesh {
    int nx = 0, ny = 0, nz = 0;
    double lx = 0.0, ly = 0.0, lz = 0.0;

    std::vector<double> cell_volumes;
    std::vector<Vec3> face_areas;      // interior faces
    std::vector<int> face_owner;
    std::vector<int> face_neighbor;
    std::vector<Vec3> d_vectors;       // owner center -> neighbor center
    std::vector<BoundaryFace> boundary_faces;

    int n_cells() const { return nx * ny * nz; }
    int n_interior_faces() const { return static_cast<int>(face_areas.size()); }
    int n_boundary_faces() const { return static_cast<int>(boundary_faces.size()); }
    int n_faces() const { return n_interior_faces() + n_boundary_faces(); }

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double dz() const { return lz / nz; }

    int cell_index(int i, int j, int k) const { return i + nx * (j + ny * k); }
    Vec3 cell_center(int c) const {
        int i = c % nx, j = (c / nx) % ny, k = c / (nx * ny);
        return {(i + 0.5) * dx(), (j + 0.5) * dy(), (k + 0.5) * dz()};
    }
};

struct BoundaryPatch {
    int id = -1;
    std::string name;
    std::vector<int> faces;  // indices into mesh.boundary_faces
};

struct BoundaryPatchSet {
    std::vector<BoundaryPatch> patches;  // [0]=lid, [1]=walls
    Vec3 lid_velocity;
};

StructuredMesh build_structured_mesh(int nx, int ny, int nz,
                                     double lx, double ly, double lz);

/// Assign every boundary face with outward normal +z to the "lid" patch,
/// all remaining faces to "walls". Also stamps patch ids into the mesh copy
/// held by the caller via the returned patch set.
BoundaryPatchSet classify_boundary(StructuredMesh& mesh, const Vec3& lid_velocity);

}  // namespace romflux
