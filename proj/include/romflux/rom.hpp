#pragma once

#include <functional>
#include <string>

#include "romflux/fom.hpp"
#include "romflux/pod.hpp"

namespace romflux {

/// Bases for the coupled reduced system: cell velocity (phi), cell pressure
/// (chi), face velocity (psi), eddy viscosity (xi).
struct RomBases {
    PodBasis phi;  // 3h x n_u
    PodBasis chi;  // h  x n_p
    PodBasis psi;  // 3F x n_c
    PodBasis xi;   // h  x n_nut
};

/// Galerkin-reduced operators of the consistent-flux step. Convection enters
/// through third-order tensors stored as one matrix slice per face-velocity
/// mode; the eddy-viscosity dependence of diffusion is linear in the modal
/// coefficients d, so it is stored as one diffusion slice plus one boundary
/// vector per viscosity mode. Boundary data splits into a convective part, a
/// laminar diffusive part scaled by nu, and the per-viscosity-mode parts.
struct ReducedModel {
    int n_u = 0, n_p = 0, n_c = 0, n_nut = 0;
    double nu = 0.0;

    // Pressure equation (n_p rows).
    DenseMatrix L_r;                       // n_p x n_p
    DenseMatrix M_r, B_r;                  // n_p x n_u
    std::vector<DenseMatrix> A_r;          // n_c slices, n_p x n_u
    std::vector<DenseMatrix> Bt_r;         // n_nut slices, n_p x n_u
    std::vector<double> q_M, q_C, q_D;     // n_p
    std::vector<std::vector<double>> q_T;  // n_nut slices, n_p

    // Cell momentum equation (n_u rows).
    DenseMatrix D_r;                       // n_u x n_u
    std::vector<DenseMatrix> C_r;          // n_c slices, n_u x n_u
    std::vector<DenseMatrix> Dt_r;         // n_nut slices, n_u x n_u
    DenseMatrix Ghat_r;                    // n_u x n_p
    std::vector<double> r_C, r_D;          // n_u
    std::vector<std::vector<double>> r_T;  // n_nut slices, n_u

    // Face velocity equation (n_c rows).
    DenseMatrix W_r;                       // n_c x n_c
    DenseMatrix N_r, P_r;                  // n_c x n_u
    std::vector<DenseMatrix> K_r;          // n_c slices, n_c x n_u
    std::vector<DenseMatrix> Pt_r;         // n_nut slices, n_c x n_u
    DenseMatrix G_r;                       // n_c x n_p
    std::vector<double> s_C, s_D;          // n_c
    std::vector<std::vector<double>> s_T;  // n_nut slices, n_c
    std::vector<double> t_b;               // n_c, boundary carrier of the face field

    /// Sub-model over the leading modes of each family. Valid because every
    /// reduced entry couples a fixed pair of modes.
    ReducedModel truncated(int nu_modes, int np_modes, int nc_modes, int nnut_modes) const;
};

ReducedModel assemble_reduced_model(const StructuredMesh& mesh, const Operators& ops,
                                    const FaceVectorField& u_b, const RomBases& bases,
                                    double nu);

struct RomState {
    std::vector<double> a;  // cell velocity coefficients
    std::vector<double> b;  // pressure coefficients
    std::vector<double> c;  // face velocity coefficients
    std::vector<double> d;  // eddy viscosity coefficients in effect
    double time = 0.0;
    int step = 0;
};

/// Projection of full-order fields onto the bases (weighted inner products).
RomState project_state(const RomBases& bases, const std::vector<double>& u_p,
                       const std::vector<double>& p_p, const std::vector<double>& u_f,
                       const std::vector<double>& nu_t);

/// Time stepper holding the LU factors of the reduced pressure and face-mass
/// matrices, which do not change between steps.
class OnlineRom {
  public:
    OnlineRom(const ReducedModel& model, double dt);

    /// One step. `d_next` is the eddy-viscosity coefficient vector in effect
    /// during this step (empty means zero, i.e. laminar viscosity only).
    RomState step(const RomState& state, const std::vector<double>& d_next) const;

    const ReducedModel& model() const { return model_; }
    double dt() const { return dt_; }

  private:
    ReducedModel model_;
    double dt_;
    LuFactorization lu_pressure_;
    LuFactorization lu_face_;
};

/// Supplies the viscosity coefficients for the step from `state`; step is the
/// index of the step about to be taken (0-based).
using DProvider = std::function<std::vector<double>(int step, const RomState& state)>;

struct RomTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> a, b, c, d;
};

/// Advance n_steps from `init`, recording every state including the initial
/// one. A null provider runs with d = 0 (frozen laminar viscosity).
RomTrajectory run_rom_online(const ReducedModel& model, const RomState& init, double dt,
                             int n_steps, const DProvider& d_provider = {});

void save_reduced_model(SnapshotSet& out, const ReducedModel& model);
ReducedModel load_reduced_model(const SnapshotSet& in);

}  // namespace romflux
