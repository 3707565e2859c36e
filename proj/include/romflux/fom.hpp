#pragma once

#include <array>
#include <functional>

#include "romflux/fields.hpp"
#include "romflux/mesh.hpp"
#include "romflux/operators.hpp"
#include "romflux/romf.hpp"

namespace romflux {

struct FomConfig {
    double nu = 1e-4;       // molecular kinematic viscosity
    double C_s = 0.2;       // Smagorinsky constant
    double Pr_t = 0.9;      // stored for fidelity; no temperature equation
    double dt = 0.0;
    int n_steps = 0;
    int spinup_steps = 0;   // advanced before recording starts
    int snapshot_stride = 1;
    int ref_cell = 0;
    double p_ref = 0.0;
    double ppe_tol = 1e-10;
    int ppe_max_iter = 0;   // 0 -> 10 * n_cells

    void validate(const StructuredMesh& mesh, double lid_speed) const;
};

struct FomState {
    CellVectorField u_p;
    FaceVectorField u_f;   // carries boundary values on boundary slots
    CellScalarField p_p;
    CellScalarField nu_t;
    double time = 0.0;
    int step = 0;
};

/// State-independent data shared by every step.
struct FomWorkspace {
    Operators ops;
    FaceVectorField u_b;
    std::vector<double> r_M;  // continuity boundary vector
    std::vector<double> r_C;  // convective boundary vector
};

FomWorkspace make_workspace(const StructuredMesh& mesh, const BoundaryPatchSet& patches);

FomState initial_state(const StructuredMesh& mesh, const FomWorkspace& ws);

/// Per-cell velocity gradient tensor grad[i][j] = d u_j / d x_i from the
/// Gauss face-sum of interpolated face velocities.
std::vector<std::array<std::array<double, 3>, 3>> cell_velocity_gradient(
    const StructuredMesh& mesh, const CellVectorField& u_p, const FaceVectorField& u_b);

CellScalarField smagorinsky_viscosity(const StructuredMesh& mesh,
                                      const CellVectorField& u_p,
                                      const FaceVectorField& u_b, double C_s);

/// One consistent-flux time step: eddy-viscosity update, explicit forcing,
/// compact-stencil pressure Poisson solve, cell and face velocity updates.
/// The resulting face flux is divergence free to the PPE tolerance.
FomState cfm_step(const FomState& state, const StructuredMesh& mesh,
                  const FomWorkspace& ws, const FomConfig& config);

/// Relative divergence of the face flux: ||M u_f + r_M||_inf over the
/// largest per-cell absolute flux sum.
double relative_divergence(const StructuredMesh& mesh, const FomWorkspace& ws,
                           const FaceVectorField& u_f);

using StepCallback = std::function<void(const FomState&)>;

/// Advance from rest, record u_p/p_p/u_f/nu_t every `snapshot_stride` steps
/// after the spin-up (including the post-spin-up initial state).
void run_fom(const StructuredMesh& mesh, const BoundaryPatchSet& patches,
             const FomConfig& config, SnapshotSet* out,
             const StepCallback& on_step = {});

}  // namespace romflux
