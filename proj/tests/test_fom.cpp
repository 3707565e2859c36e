#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "romflux/dense.hpp"
#include "romflux/fom.hpp"
#include "romflux/pcg.hpp"

using namespace romflux;

namespace {

FomConfig quick_config(double dt) {
    FomConfig c;
    c.nu = 1e-3;
    c.C_s = 0.2;
    c.dt = dt;
    c.ppe_tol = 1e-12;
    return c;
}

/// Independent transcription of one step using dense linear algebra and a
/// pinned LU pressure solve.
FomState dense_step_oracle(const FomState& state, const StructuredMesh& mesh,
                           const FomWorkspace& ws, const FomConfig& config) {
    const int h = mesh.n_cells();
    const CellScalarField nu_t =
        smagorinsky_viscosity(mesh, state.u_p, ws.u_b, config.C_s);
    CellScalarField nu_eff{nu_t.v};
    for (double& v : nu_eff.v) v += config.nu;
    const std::vector<double> nu_f = face_viscosity(mesh, nu_eff);
    const SparseOperator D = assemble_laplacian(mesh, nu_f);
    const std::vector<double> r_D = laplacian_boundary(mesh, nu_f, ws.u_b);
    const SparseOperator C = assemble_convection(mesh, state.u_f);

    std::vector<double> R = D.apply(state.u_p.v);
    const std::vector<double> conv = C.apply(state.u_p.v);
    for (size_t i = 0; i < R.size(); ++i) R[i] += -conv[i] - ws.r_C[i] + r_D[i];

    std::vector<double> rhs = ws.ops.M_p.apply(state.u_p.v);
    const std::vector<double> mR = ws.ops.M_p.apply(R);
    for (int k = 0; k < h; ++k) rhs[k] = (rhs[k] + ws.r_M[k]) / config.dt + mR[k];

    // Dense pinned Neumann solve.
    double mean = 0.0;
    for (double v : rhs) mean += v;
    mean /= h;
    for (double& v : rhs) v -= mean;
    DenseMatrix a(h, h);
    const auto dense = ws.ops.L_f.to_dense();
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < h; ++c) a(r, c) = dense[r][c];
    for (int c = 0; c < h; ++c) a(config.ref_cell, c) = c == config.ref_cell ? 1.0 : 0.0;
    rhs[config.ref_cell] = 0.0;
    std::vector<double> p = LuFactorization(a).solve(rhs);
    const double shift = config.p_ref - p[config.ref_cell];
    for (double& v : p) v += shift;

    FomState next;
    next.p_p.v = p;
    next.nu_t = nu_t;
    const std::vector<double> gp = ws.ops.G_p.apply(p);
    next.u_p.v.resize(state.u_p.v.size());
    for (size_t i = 0; i < next.u_p.v.size(); ++i)
        next.u_p.v[i] = state.u_p.v[i] + config.dt * (R[i] - gp[i]);
    std::vector<double> aux(state.u_p.v.size());
    for (size_t i = 0; i < aux.size(); ++i) aux[i] = state.u_p.v[i] + config.dt * R[i];
    next.u_f.v = ws.ops.I_pf.apply(aux);
    const std::vector<double> gf = ws.ops.G_f.apply(p);
    for (size_t i = 0; i < next.u_f.v.size(); ++i)
        next.u_f.v[i] += ws.u_b.v[i] - config.dt * gf[i];
    return next;
}

}  // namespace

TEST_CASE("velocity gradient is exact on a linear shear field") {
    const StructuredMesh mesh = build_structured_mesh(4, 3, 3, 1.0, 1.0, 1.0);
    const double gamma = 0.8;
    CellVectorField u = CellVectorField::zeros(mesh);
    for (int c = 0; c < mesh.n_cells(); ++c)
        u.set(c, {gamma * mesh.cell_center(c).z, 0.0, 0.0});
    FaceVectorField u_b = FaceVectorField::zeros(mesh);
    const int fi = mesh.n_interior_faces();
    for (int b = 0; b < mesh.n_boundary_faces(); ++b)
        u_b.set(fi + b, {gamma * mesh.boundary_faces[b].centroid.z, 0.0, 0.0});

    const auto grad = cell_velocity_gradient(mesh, u, u_b);
    for (int c = 0; c < mesh.n_cells(); ++c) {
        CHECK(grad[c][2][0] == doctest::Approx(gamma).epsilon(1e-12));
        CHECK(std::abs(grad[c][0][0]) < 1e-12);
        CHECK(std::abs(grad[c][1][2]) < 1e-12);
    }

    const CellScalarField nu_t = smagorinsky_viscosity(mesh, u, u_b, 0.2);
    const double delta = std::cbrt(mesh.cell_volumes[0]);
    const double want = 0.2 * 0.2 * delta * delta * gamma;
    for (double v : nu_t.v) CHECK(v == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("a cavity with a stationary lid stays at rest") {
    StructuredMesh mesh = build_structured_mesh(3, 3, 3, 1.0, 1.0, 1.0);
    const BoundaryPatchSet patches = classify_boundary(mesh, {0.0, 0.0, 0.0});
    const FomWorkspace ws = make_workspace(mesh, patches);
    FomState s = initial_state(mesh, ws);
    const FomConfig cfg = quick_config(1e-3);
    for (int n = 0; n < 3; ++n) s = cfm_step(s, mesh, ws, cfg);
    for (double v : s.u_p.v) CHECK(std::abs(v) < 1e-12);
    for (double v : s.p_p.v) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("one step matches the dense transcription oracle") {
    StructuredMesh mesh = build_structured_mesh(3, 2, 2, 1.0, 0.8, 0.6);
    const BoundaryPatchSet patches = classify_boundary(mesh, {1.0, 0.0, 0.0});
    const FomWorkspace ws = make_workspace(mesh, patches);
    const FomConfig cfg = quick_config(2e-3);

    FomState s = initial_state(mesh, ws);
    // Advance a few steps so the state is nontrivial, then compare one step.
    for (int n = 0; n < 3; ++n) s = cfm_step(s, mesh, ws, cfg);
    const FomState got = cfm_step(s, mesh, ws, cfg);
    const FomState want = dense_step_oracle(s, mesh, ws, cfg);

    for (size_t i = 0; i < got.u_p.v.size(); ++i)
        CHECK(got.u_p.v[i] == doctest::Approx(want.u_p.v[i]).epsilon(1e-8));
    for (size_t i = 0; i < got.p_p.v.size(); ++i)
        CHECK(got.p_p.v[i] == doctest::Approx(want.p_p.v[i]).epsilon(1e-8));
    for (size_t i = 0; i < got.u_f.v.size(); ++i)
        CHECK(got.u_f.v[i] == doctest::Approx(want.u_f.v[i]).epsilon(1e-8));
}

TEST_CASE("the face flux is divergence free after every step") {
    StructuredMesh mesh = build_structured_mesh(4, 4, 4, 1.0, 1.0, 1.0);
    const BoundaryPatchSet patches = classify_boundary(mesh, {1.0, 0.0, 0.0});
    const FomWorkspace ws = make_workspace(mesh, patches);
    const FomConfig cfg = quick_config(2e-3);
    FomState s = initial_state(mesh, ws);
    for (int n = 0; n < 5; ++n) {
        s = cfm_step(s, mesh, ws, cfg);
        CHECK(relative_divergence(mesh, ws, s.u_f) < 1e-9);
    }
}

TEST_CASE("snapshot recording honors the spin-up and the stride") {
    StructuredMesh mesh = build_structured_mesh(3, 3, 3, 1.0, 1.0, 1.0);
    const BoundaryPatchSet patches = classify_boundary(mesh, {1.0, 0.0, 0.0});
    FomConfig cfg = quick_config(1e-3);
    cfg.n_steps = 6;
    cfg.spinup_steps = 4;
    cfg.snapshot_stride = 2;

    const auto dir = std::filesystem::temp_directory_path() / "romflux_fom_record";
    std::filesystem::remove_all(dir);
    SnapshotSet out(dir);
    run_fom(mesh, patches, cfg, &out);

    const FieldSeries u = out.read_series("u_p");
    REQUIRE(u.times.size() == 4);  // initial + steps 2, 4, 6
    CHECK(u.times[0] == doctest::Approx(0.0));
    CHECK(u.times[1] == doctest::Approx(2 * cfg.dt));
    CHECK(u.times[3] == doctest::Approx(6 * cfg.dt));
    CHECK(out.read_series("nu_t").times.size() == 4);
    CHECK(out.read_series("u_f").times.size() == 4);
}

TEST_CASE("the stability guard rejects an oversized step") {
    const StructuredMesh mesh = build_structured_mesh(8, 8, 8, 1.0, 1.0, 1.0);
    FomConfig cfg = quick_config(1.0);
    CHECK_THROWS_AS(cfg.validate(mesh, 1.0), ValidationError);
}
