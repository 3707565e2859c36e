#pragma once

#include "romflux/fields.hpp"
#include "romflux/mesh.hpp"
#include "romflux/sparse.hpp"

namespace romflux {

// Degree-of-freedom layout: cell scalars are length h, cell vectors 3h
// (components interleaved), face vectors 3F with F = interior + boundary
// faces in mesh order. Momentum-row operators (convection, diffusion,
// pressure gradient) are pre-divided by the cell volume so the semi-discrete
// momentum equation is a plain rate equation; continuity rows (M, M_p, L_f)
// carry volumetric flux units.

/// Discrete divergence M (h x 3F): (M u_f)_k = sum of signed S_f . u_f.
SparseOperator assemble_divergence(const StructuredMesh& mesh);

/// r_p^M = M u_b restricted to boundary faces (length h).
std::vector<double> continuity_boundary(const StructuredMesh& mesh,
                                        const FaceVectorField& u_b);

struct InterpolationOperators {
    SparseOperator I_pf;   // 3F x 3h, vector fields
    SparseOperator Pi_pf;  // F x h, scalar fields
};

/// Midpoint interpolation to interior faces; boundary rows are zero
/// (boundary values live in u_b).
InterpolationOperators assemble_interpolation(const StructuredMesh& mesh);

/// Cell-centered pressure gradient G_p (3h x h), face values by
/// interpolation, zero-gradient boundary (owner copy), divided by volume.
SparseOperator assemble_gradient_Gp(const StructuredMesh& mesh);

/// Face pressure gradient G_f (3F x h): n_f (p_N - p_P)/|d| on interior
/// faces, zero boundary rows. Satisfies M G_f = L_f exactly.
SparseOperator assemble_gradient_Gf(const StructuredMesh& mesh);

/// Variable-coefficient Laplacian D_p (3h x 3h) with per-face viscosity
/// (length F). Boundary Dirichlet owner coefficient included; the boundary
/// value contribution is in laplacian_boundary. Physical viscosities must
/// be non-negative; `allow_signed` admits signed coefficients for the
/// per-mode diffusion slices of the reduced model, which are linear-algebra
/// building blocks rather than viscosities.
SparseOperator assemble_laplacian(const StructuredMesh& mesh,
                                  const std::vector<double>& nu_face,
                                  bool allow_signed = false);

/// r_p^D for the given face viscosity and boundary velocity (length 3h).
std::vector<double> laplacian_boundary(const StructuredMesh& mesh,
                                       const std::vector<double>& nu_face,
                                       const FaceVectorField& u_b);

/// Linearized convection operator C~_p(u_f) (3h x 3h): central face values
/// weighted by the face fluxes phi_f = S_f . u_f.
SparseOperator assemble_convection(const StructuredMesh& mesh,
                                   const FaceVectorField& u_f);

/// Boundary convective flux (S_b . u_b) u_b per owner cell (length 3h).
std::vector<double> convection_boundary(const StructuredMesh& mesh,
                                        const FaceVectorField& u_b);

struct PpeOperators {
    SparseOperator L_p;  // wide stencil M_p G_p, checkerboard nullspace
    SparseOperator L_f;  // compact 7-point |S_f|/|d|, pure Neumann
};

PpeOperators assemble_ppe_operators(const StructuredMesh& mesh);

/// Arithmetic-mean face interpolation of a cell viscosity field; boundary
/// faces copy the owner value. Rejects negative input.
std::vector<double> face_viscosity(const StructuredMesh& mesh,
                                   const CellScalarField& nu_cell);

/// Same interpolation without the sign check (for basis-mode slices).
std::vector<double> face_interpolate_scalar(const StructuredMesh& mesh,
                                            const std::vector<double>& cell_values);

/// The mesh-dependent, state-independent operator set assembled once.
struct Operators {
    SparseOperator M;
    SparseOperator I_pf;
    SparseOperator Pi_pf;
    SparseOperator M_p;    // M I_pf
    SparseOperator G_p;
    SparseOperator G_f;
    SparseOperator D_lam;  // unit-viscosity Laplacian
    SparseOperator L_p;
    SparseOperator L_f;
};

Operators assemble_operators(const StructuredMesh& mesh);

}  // namespace romflux
