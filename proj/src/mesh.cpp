#include "romflux/mesh.hpp"

namespace romflux {

StructuredMesh build_structured_mesh(int nx, int ny, int nz,
                                     double lx, double ly, double lz) {
    require(nx >= 2 && ny >= 2 && nz >= 2,
            "build_structured_mesh: cell counts must be >= 2 per axis");
    require(lx > 0.0 && ly > 0.0 && lz > 0.0,
            "build_structured_mesh: domain lengths must be positive");

    StructuredMesh m;
    m.nx = nx; m.ny = ny; m.nz = nz;
    m.lx = lx; m.ly = ly; m.lz = lz;

    const double dx = lx / nx, dy = ly / ny, dz = lz / nz;
    const double vol = dx * dy * dz;
    m.cell_volumes.assign(static_cast<size_t>(nx) * ny * nz, vol);

    const Vec3 area[3] = {{dy * dz, 0, 0}, {0, dx * dz, 0}, {0, 0, dx * dy}};
    const Vec3 dvec[3] = {{dx, 0, 0}, {0, dy, 0}, {0, 0, dz}};

    // Interior faces: axis-major, lexicographic by owner cell index.
    for (int axis = 0; axis < 3; ++axis) {
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    int ni = i + (axis == 0), nj = j + (axis == 1), nk = k + (axis == 2);
                    if (ni >= nx || nj >= ny || nk >= nz) continue;
                    m.face_owner.push_back(m.cell_index(i, j, k));
                    m.face_neighbor.push_back(m.cell_index(ni, nj, nk));
                    m.face_areas.push_back(area[axis]);
                    m.d_vectors.push_back(dvec[axis]);
                }
    }

    // Boundary faces: axis-major, minus side before plus side.
    const double dn[3] = {dx / 2, dy / 2, dz / 2};
    for (int axis = 0; axis < 3; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const double sign = side == 0 ? -1.0 : 1.0;
            for (int k = 0; k < nz; ++k)
                for (int j = 0; j < ny; ++j)
                    for (int i = 0; i < nx; ++i) {
                        int idx[3] = {i, j, k};
                        int lim[3] = {nx, ny, nz};
                        if (side == 0 && idx[axis] != 0) continue;
                        if (side == 1 && idx[axis] != lim[axis] - 1) continue;
                        BoundaryFace f;
                        f.owner = m.cell_index(i, j, k);
                        f.area = area[axis] * sign;
                        f.d_n = dn[axis];
                        Vec3 c = m.cell_center(f.owner);
                        f.centroid = c + dvec[axis] * (sign * 0.5);
                        m.boundary_faces.push_back(f);
                    }
        }
    }
    return m;
}

BoundaryPatchSet classify_boundary(StructuredMesh& mesh, const Vec3& lid_velocity) {
    BoundaryPatchSet s;
    s.lid_velocity = lid_velocity;
    s.patches.resize(2);
    s.patches[0] = {0, "lid", {}};
    s.patches[1] = {1, "walls", {}};
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        BoundaryFace& f = mesh.boundary_faces[b];
        const bool lid = f.area.z > 0.0;  // outward +z is the top plane
        f.patch = lid ? 0 : 1;
        s.patches[f.patch].faces.push_back(b);
    }
    return s;
}

}  // namespace romflux
