#include "romflux/operators.hpp"

namespace romflux {

SparseOperator assemble_divergence(const StructuredMesh& mesh) {
    const int h = mesh.n_cells();
    const int fi = mesh.n_interior_faces();
    std::vector<Triplet> t;
    t.reserve(6 * (fi + mesh.n_boundary_faces()));
    for (int f = 0; f < fi; ++f) {
        const Vec3 s = mesh.face_areas[f];
        for (int c = 0; c < 3; ++c) {
            if (s[c] == 0.0) continue;
            t.push_back({mesh.face_owner[f], 3 * f + c, s[c]});
            t.push_back({mesh.face_neighbor[f], 3 * f + c, -s[c]});
        }
    }
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        for (int c = 0; c < 3; ++c)
            if (bf.area[c] != 0.0) t.push_back({bf.owner, 3 * (fi + b) + c, bf.area[c]});
    }
    return SparseOperator::from_triplets(h, 3 * mesh.n_faces(), std::move(t));
}

std::vector<double> continuity_boundary(const StructuredMesh& mesh,
                                        const FaceVectorField& u_b) {
    std::vector<double> r(mesh.n_cells(), 0.0);
    const int fi = mesh.n_interior_faces();
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        r[bf.owner] += bf.area.dot(u_b.at(fi + b));
    }
    return r;
}

InterpolationOperators assemble_interpolation(const StructuredMesh& mesh) {
    const int h = mesh.n_cells();
    const int fi = mesh.n_interior_faces();
    std::vector<Triplet> ts, tv;
    for (int f = 0; f < fi; ++f) {
        const int p = mesh.face_owner[f], n = mesh.face_neighbor[f];
        ts.push_back({f, p, 0.5});
        ts.push_back({f, n, 0.5});
        for (int c = 0; c < 3; ++c) {
            tv.push_back({3 * f + c, 3 * p + c, 0.5});
            tv.push_back({3 * f + c, 3 * n + c, 0.5});
        }
    }
    InterpolationOperators ops;
    ops.Pi_pf = SparseOperator::from_triplets(mesh.n_faces(), h, std::move(ts));
    ops.I_pf = SparseOperator::from_triplets(3 * mesh.n_faces(), 3 * h, std::move(tv));
    return ops;
}

SparseOperator assemble_gradient_Gp(const StructuredMesh& mesh) {
    const int h = mesh.n_cells();
    const int fi = mesh.n_interior_faces();
    std::vector<Triplet> t;
    for (int f = 0; f < fi; ++f) {
        const int p = mesh.face_owner[f], n = mesh.face_neighbor[f];
        const Vec3 s = mesh.face_areas[f];
        for (int c = 0; c < 3; ++c) {
            if (s[c] == 0.0) continue;
            // face value = (p_P + p_N)/2, signed by ownership
            t.push_back({3 * p + c, p, 0.5 * s[c] / mesh.cell_volumes[p]});
            t.push_back({3 * p + c, n, 0.5 * s[c] / mesh.cell_volumes[p]});
            t.push_back({3 * n + c, p, -0.5 * s[c] / mesh.cell_volumes[n]});
            t.push_back({3 * n + c, n, -0.5 * s[c] / mesh.cell_volumes[n]});
        }
    }
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        for (int c = 0; c < 3; ++c)
            if (bf.area[c] != 0.0)
                t.push_back({3 * bf.owner + c, bf.owner,
                             bf.area[c] / mesh.cell_volumes[bf.owner]});
    }
    return SparseOperator::from_triplets(3 * h, h, std::move(t));
}

SparseOperator assemble_gradient_Gf(const StructuredMesh& mesh) {
    const int fi = mesh.n_interior_faces();
    std::vector<Triplet> t;
    for (int f = 0; f < fi; ++f) {
        const int p = mesh.face_owner[f], n = mesh.face_neighbor[f];
        const Vec3 s = mesh.face_areas[f];
        const double inv_d = 1.0 / mesh.d_vectors[f].norm();
        const double smag = s.norm();
        for (int c = 0; c < 3; ++c) {
            if (s[c] == 0.0) continue;
            const double w = (s[c] / smag) * inv_d;
            t.push_back({3 * f + c, n, w});
            t.push_back({3 * f + c, p, -w});
        }
    }
    return SparseOperator::from_triplets(3 * mesh.n_faces(), mesh.n_cells(), std::move(t));
}

SparseOperator assemble_laplacian(const StructuredMesh& mesh,
                                  const std::vector<double>& nu_face,
                                  bool allow_signed) {
    require(static_cast<int>(nu_face.size()) == mesh.n_faces(),
            "assemble_laplacian: nu_face must have one value per face");
    if (!allow_signed)
        for (double nu : nu_face)
            require(nu >= 0.0, "assemble_laplacian: negative face viscosity");
    const int h = mesh.n_cells();
    const int fi = mesh.n_interior_faces();
    std::vector<Triplet> t;
    for (int f = 0; f < fi; ++f) {
        const int p = mesh.face_owner[f], n = mesh.face_neighbor[f];
        const double w = nu_face[f] * mesh.face_areas[f].norm() / mesh.d_vectors[f].norm();
        for (int c = 0; c < 3; ++c) {
            t.push_back({3 * p + c, 3 * n + c, w / mesh.cell_volumes[p]});
            t.push_back({3 * p + c, 3 * p + c, -w / mesh.cell_volumes[p]});
            t.push_back({3 * n + c, 3 * p + c, w / mesh.cell_volumes[n]});
            t.push_back({3 * n + c, 3 * n + c, -w / mesh.cell_volumes[n]});
        }
    }
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        const double w = nu_face[fi + b] * bf.area.norm() / bf.d_n;
        for (int c = 0; c < 3; ++c)
            t.push_back({3 * bf.owner + c, 3 * bf.owner + c,
                         -w / mesh.cell_volumes[bf.owner]});
    }
    return SparseOperator::from_triplets(3 * h, 3 * h, std::move(t));
}

std::vector<double> laplacian_boundary(const StructuredMesh& mesh,
                                       const std::vector<double>& nu_face,
                                       const FaceVectorField& u_b) {
    require(static_cast<int>(nu_face.size()) == mesh.n_faces(),
            "laplacian_boundary: nu_face must have one value per face");
    std::vector<double> r(3 * static_cast<size_t>(mesh.n_cells()), 0.0);
    const int fi = mesh.n_interior_faces();
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        const double w = nu_face[fi + b] * bf.area.norm() / bf.d_n;
        const Vec3 ub = u_b.at(fi + b);
        for (int c = 0; c < 3; ++c)
            r[3 * bf.owner + c] += w * ub[c] / mesh.cell_volumes[bf.owner];
    }
    return r;
}

SparseOperator assemble_convection(const StructuredMesh& mesh,
                                   const FaceVectorField& u_f) {
    require(all_finite(u_f.v), "assemble_convection: non-finite face velocity");
    const int h = mesh.n_cells();
    const int fi = mesh.n_interior_faces();
    std::vector<Triplet> t;
    for (int f = 0; f < fi; ++f) {
        const int p = mesh.face_owner[f], n = mesh.face_neighbor[f];
        const double phi = mesh.face_areas[f].dot(u_f.at(f));
        if (phi == 0.0) continue;
        for (int c = 0; c < 3; ++c) {
            // transported value at the face by central interpolation
            t.push_back({3 * p + c, 3 * p + c, 0.5 * phi / mesh.cell_volumes[p]});
            t.push_back({3 * p + c, 3 * n + c, 0.5 * phi / mesh.cell_volumes[p]});
            t.push_back({3 * n + c, 3 * p + c, -0.5 * phi / mesh.cell_volumes[n]});
            t.push_back({3 * n + c, 3 * n + c, -0.5 * phi / mesh.cell_volumes[n]});
        }
    }
    return SparseOperator::from_triplets(3 * h, 3 * h, std::move(t));
}

std::vector<double> convection_boundary(const StructuredMesh& mesh,
                                        const FaceVectorField& u_b) {
    std::vector<double> r(3 * static_cast<size_t>(mesh.n_cells()), 0.0);
    const int fi = mesh.n_interior_faces();
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        const Vec3 ub = u_b.at(fi + b);
        const double phi = bf.area.dot(ub);
        for (int c = 0; c < 3; ++c)
            r[3 * bf.owner + c] += phi * ub[c] / mesh.cell_volumes[bf.owner];
    }
    return r;
}

PpeOperators assemble_ppe_operators(const StructuredMesh& mesh) {
    PpeOperators ops;
    const int h = mesh.n_cells();
    const int fi = mesh.n_interior_faces();
    std::vector<Triplet> t;
    for (int f = 0; f < fi; ++f) {
        const int p = mesh.face_owner[f], n = mesh.face_neighbor[f];
        const double w = mesh.face_areas[f].norm() / mesh.d_vectors[f].norm();
        t.push_back({p, n, w});
        t.push_back({p, p, -w});
        t.push_back({n, p, w});
        t.push_back({n, n, -w});
    }
    ops.L_f = SparseOperator::from_triplets(h, h, std::move(t));

    const SparseOperator M = assemble_divergence(mesh);
    const SparseOperator I_pf = assemble_interpolation(mesh).I_pf;
    ops.L_p = M.multiply(I_pf).multiply(assemble_gradient_Gp(mesh));
    return ops;
}

std::vector<double> face_interpolate_scalar(const StructuredMesh& mesh,
                                            const std::vector<double>& cell_values) {
    require(static_cast<int>(cell_values.size()) == mesh.n_cells(),
            "face_interpolate_scalar: cell count mismatch");
    std::vector<double> out(mesh.n_faces());
    const int fi = mesh.n_interior_faces();
    for (int f = 0; f < fi; ++f)
        out[f] = 0.5 * (cell_values[mesh.face_owner[f]] + cell_values[mesh.face_neighbor[f]]);
    for (int b = 0; b < mesh.n_boundary_faces(); ++b)
        out[fi + b] = cell_values[mesh.boundary_faces[b].owner];
    return out;
}

std::vector<double> face_viscosity(const StructuredMesh& mesh,
                                   const CellScalarField& nu_cell) {
    for (double nu : nu_cell.v)
        require(nu >= 0.0, "face_viscosity: negative cell viscosity");
    return face_interpolate_scalar(mesh, nu_cell.v);
}

Operators assemble_operators(const StructuredMesh& mesh) {
    Operators ops;
    ops.M = assemble_divergence(mesh);
    InterpolationOperators interp = assemble_interpolation(mesh);
    ops.I_pf = std::move(interp.I_pf);
    ops.Pi_pf = std::move(interp.Pi_pf);
    ops.M_p = ops.M.multiply(ops.I_pf);
    ops.G_p = assemble_gradient_Gp(mesh);
    ops.G_f = assemble_gradient_Gf(mesh);
    ops.D_lam = assemble_laplacian(mesh, std::vector<double>(mesh.n_faces(), 1.0));
    PpeOperators ppe = assemble_ppe_operators(mesh);
    ops.L_p = std::move(ppe.L_p);
    ops.L_f = std::move(ppe.L_f);
    return ops;
}

}  // namespace romflux
