#include "romflux/fom.hpp"

#include <algorithm>
#include <cstdio>

#include "romflux/pcg.hpp"

namespace romflux {

void FomConfig::validate(const StructuredMesh& mesh, double lid_speed) const {
    require(dt > 0.0, "FomConfig: dt must be positive");
    require(C_s > 0.0, "FomConfig: C_s must be positive");
    require(nu >= 0.0, "FomConfig: nu must be non-negative");
    require(n_steps >= 0 && spinup_steps >= 0, "FomConfig: step counts must be non-negative");
    require(snapshot_stride >= 1, "FomConfig: snapshot_stride must be >= 1");
    require(ref_cell >= 0 && ref_cell < mesh.n_cells(), "FomConfig: ref_cell out of range");
    const double dx_min = std::min({mesh.dx(), mesh.dy(), mesh.dz()});
    double dt_max = 0.5 * dx_min * dx_min / (2.0 * 3.0 * std::max(nu, 1e-300));
    if (lid_speed > 0.0) dt_max = std::min(dt_max, 0.5 * dx_min / lid_speed);
    require(dt <= dt_max, "FomConfig: dt " + std::to_string(dt) +
                              " exceeds the stability guard " + std::to_string(dt_max));
}

FomWorkspace make_workspace(const StructuredMesh& mesh, const BoundaryPatchSet& patches) {
    FomWorkspace ws;
    ws.ops = assemble_operators(mesh);
    ws.u_b = boundary_velocity_field(mesh, patches);
    ws.r_M = continuity_boundary(mesh, ws.u_b);
    ws.r_C = convection_boundary(mesh, ws.u_b);
    return ws;
}

FomState initial_state(const StructuredMesh& mesh, const FomWorkspace& ws) {
    FomState s;
    s.u_p = CellVectorField::zeros(mesh);
    s.u_f = ws.u_b;  // interior zero, boundary values active
    s.p_p = CellScalarField::zeros(mesh);
    s.nu_t = CellScalarField::zeros(mesh);
    return s;
}

std::vector<std::array<std::array<double, 3>, 3>> cell_velocity_gradient(
    const StructuredMesh& mesh, const CellVectorField& u_p, const FaceVectorField& u_b) {
    const int h = mesh.n_cells();
    std::vector<std::array<std::array<double, 3>, 3>> grad(
        h, {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}});
    const int fi = mesh.n_interior_faces();
    for (int f = 0; f < fi; ++f) {
        const int p = mesh.face_owner[f], n = mesh.face_neighbor[f];
        const Vec3 s = mesh.face_areas[f];
        const Vec3 uf = (u_p.at(p) + u_p.at(n)) * 0.5;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                grad[p][i][j] += s[i] * uf[j] / mesh.cell_volumes[p];
                grad[n][i][j] -= s[i] * uf[j] / mesh.cell_volumes[n];
            }
    }
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        const Vec3 ub = u_b.at(fi + b);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                grad[bf.owner][i][j] += bf.area[i] * ub[j] / mesh.cell_volumes[bf.owner];
    }
    return grad;
}

CellScalarField smagorinsky_viscosity(const StructuredMesh& mesh,
                                      const CellVectorField& u_p,
                                      const FaceVectorField& u_b, double C_s) {
    require(all_finite(u_p.v), "smagorinsky_viscosity: non-finite velocity");
    const auto grad = cell_velocity_gradient(mesh, u_p, u_b);
    CellScalarField nu_t = CellScalarField::zeros(mesh);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < mesh.n_cells(); ++k) {
        double ss = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double sij = 0.5 * (grad[k][i][j] + grad[k][j][i]);
                ss += sij * sij;
            }
        const double smag = std::sqrt(2.0 * ss);
        const double delta = std::cbrt(mesh.cell_volumes[k]);
        nu_t.v[k] = (C_s * delta) * (C_s * delta) * smag;
    }
    return nu_t;
}

namespace {

std::vector<double> momentum_rhs(const StructuredMesh& mesh, const FomWorkspace& ws,
                                 const FomState& state, const FomConfig& config,
                                 const CellScalarField& nu_t) {
    CellScalarField nu_eff{nu_t.v};
    for (double& v : nu_eff.v) v += config.nu;
    const std::vector<double> nu_f = face_viscosity(mesh, nu_eff);
    const SparseOperator D = assemble_laplacian(mesh, nu_f);
    const std::vector<double> r_D = laplacian_boundary(mesh, nu_f, ws.u_b);
    const SparseOperator C = assemble_convection(mesh, state.u_f);

    std::vector<double> rhs = D.apply(state.u_p.v);
    const std::vector<double> conv = C.apply(state.u_p.v);
    for (size_t i = 0; i < rhs.size(); ++i)
        rhs[i] += -conv[i] - ws.r_C[i] + r_D[i];
    return rhs;
}

}  // namespace

FomState cfm_step(const FomState& state, const StructuredMesh& mesh,
                  const FomWorkspace& ws, const FomConfig& config) {
    const int h = mesh.n_cells();
    const double dt = config.dt;

    FomState next;
    next.nu_t = smagorinsky_viscosity(mesh, state.u_p, ws.u_b, config.C_s);
    const std::vector<double> R = momentum_rhs(mesh, ws, state, config, next.nu_t);

    // PPE right-hand side: divergence of the provisional update.
    std::vector<double> rhs = ws.ops.M_p.apply(state.u_p.v);
    const std::vector<double> mR = ws.ops.M_p.apply(R);
    for (int k = 0; k < h; ++k) rhs[k] = (rhs[k] + ws.r_M[k]) / dt + mR[k];

    const int max_iter = config.ppe_max_iter > 0 ? config.ppe_max_iter : 10 * h;
    PpeResult ppe = solve_ppe(ws.ops.L_f, rhs, config.ref_cell, config.p_ref,
                              config.ppe_tol, max_iter, &state.p_p.v);
    next.p_p.v = std::move(ppe.p);

    // Cell velocity correction.
    const std::vector<double> gp = ws.ops.G_p.apply(next.p_p.v);
    next.u_p.v.resize(state.u_p.v.size());
    for (size_t i = 0; i < next.u_p.v.size(); ++i)
        next.u_p.v[i] = state.u_p.v[i] + dt * (R[i] - gp[i]);

    // Face velocity update with the face-evaluated pressure gradient.
    std::vector<double> aux(state.u_p.v.size());
    for (size_t i = 0; i < aux.size(); ++i) aux[i] = state.u_p.v[i] + dt * R[i];
    next.u_f.v = ws.ops.I_pf.apply(aux);
    const std::vector<double> gf = ws.ops.G_f.apply(next.p_p.v);
    for (size_t i = 0; i < next.u_f.v.size(); ++i)
        next.u_f.v[i] += ws.u_b.v[i] - dt * gf[i];

    next.time = state.time + dt;
    next.step = state.step + 1;

    if (!all_finite(next.u_p.v) || !all_finite(next.p_p.v))
        throw NumericalError("cfm_step: NaN detected at step " + std::to_string(next.step) +
                             ", time " + std::to_string(next.time));
    return next;
}

double relative_divergence(const StructuredMesh& mesh, const FomWorkspace& ws,
                           const FaceVectorField& u_f) {
    const std::vector<double> div = ws.ops.M.apply(u_f.v);
    double max_div = 0.0, scale = 0.0;
    std::vector<double> flux_sum(mesh.n_cells(), 0.0);
    const int fi = mesh.n_interior_faces();
    for (int f = 0; f < fi; ++f) {
        const double phi = std::abs(mesh.face_areas[f].dot(u_f.at(f)));
        flux_sum[mesh.face_owner[f]] += phi;
        flux_sum[mesh.face_neighbor[f]] += phi;
    }
    for (int b = 0; b < mesh.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = mesh.boundary_faces[b];
        flux_sum[bf.owner] += std::abs(bf.area.dot(u_f.at(fi + b)));
    }
    for (int k = 0; k < mesh.n_cells(); ++k) {
        max_div = std::max(max_div, std::abs(div[k] + ws.r_M[k]));
        scale = std::max(scale, flux_sum[k]);
    }
    return scale > 0.0 ? max_div / scale : max_div;
}

void run_fom(const StructuredMesh& mesh, const BoundaryPatchSet& patches,
             const FomConfig& config, SnapshotSet* out, const StepCallback& on_step) {
    const double lid_speed = patches.lid_velocity.norm();
    config.validate(mesh, lid_speed);
    FomWorkspace ws = make_workspace(mesh, patches);
    FomState state = initial_state(mesh, ws);

    auto record = [&](const FomState& s) {
        if (!out) return;
        // Times shifted so the first recorded state sits at t = 0 even
        // after a spin-up. The eddy viscosity is evaluated from the recorded
        // velocity so every snapshot is internally consistent.
        const double t = s.time - config.spinup_steps * config.dt;
        const CellScalarField nu_t =
            smagorinsky_viscosity(mesh, s.u_p, ws.u_b, config.C_s);
        out->write("u_p", "cell-vector", t, s.u_p.v);
        out->write("p_p", "cell-scalar", t, s.p_p.v);
        out->write("u_f", "face-vector", t, s.u_f.v);
        out->write("nu_t", "cell-scalar", t, nu_t.v);
    };

    for (int n = 0; n < config.spinup_steps; ++n) state = cfm_step(state, mesh, ws, config);
    record(state);

    for (int n = 0; n < config.n_steps; ++n) {
        state = cfm_step(state, mesh, ws, config);
        const double div = relative_divergence(mesh, ws, state.u_f);
        double ke = 0.0;
        for (int k = 0; k < mesh.n_cells(); ++k)
            ke += 0.5 * state.u_p.at(k).dot(state.u_p.at(k)) * mesh.cell_volumes[k];
        std::printf("step=%d time=%.6g div=%.3e ke=%.6e\n", state.step, state.time, div, ke);
        if ((n + 1) % config.snapshot_stride == 0) record(state);
        if (on_step) on_step(state);
    }
}

}  // namespace romflux
