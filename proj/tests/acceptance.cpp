// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// criterion fails. The reference cavity case is expensive, so its artifacts
// (snapshots, bases, reduced model, trained closure) are cached in a work
// directory and reused across runs; delete the directory to force a rebuild.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "romflux/pipeline.hpp"

using namespace romflux;
namespace fs = std::filesystem;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> rand_vec(int n, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.uniform(-1.0, 1.0);
    return v;
}

// ---------------------------------------------------------------------------
// Full-rank reduction setup shared by criteria 1 and 5.

PodBasis random_basis(int dof, int n_modes, const std::vector<double>& w,
                      const std::string& kind, std::uint64_t seed,
                      bool orthogonal_to_constants = false) {
    Rng rng(seed);
    DenseMatrix snaps(dof, n_modes + 6);
    for (double& x : snaps.data) x = rng.uniform(-1.0, 1.0);
    if (orthogonal_to_constants) {
        double total_w = 0.0;
        for (double x : w) total_w += x;
        for (int j = 0; j < snaps.cols; ++j) {
            double mean = 0.0;
            for (int i = 0; i < dof; ++i) mean += w[i] * snaps(i, j);
            mean /= total_w;
            for (int i = 0; i < dof; ++i) snaps(i, j) -= mean;
        }
    }
    return pod_from_snapshots(snaps, n_modes, w, kind);
}

struct FullRankSetup {
    StructuredMesh mesh;
    BoundaryPatchSet patches;
    FomWorkspace ws;
    RomBases bases;
    ReducedModel model;
    double nu = 1e-3;
};

FullRankSetup make_full_rank_setup() {
    FullRankSetup s{build_structured_mesh(3, 2, 2, 1.0, 0.9, 0.8), {}, {}, {}, {}};
    s.patches = classify_boundary(s.mesh, {1.0, 0.0, 0.0});
    s.ws = make_workspace(s.mesh, s.patches);
    const int h = s.mesh.n_cells();
    s.bases.phi = random_basis(3 * h, 3 * h, cell_weights(s.mesh, 3), "cell-vector", 101);
    s.bases.chi =
        random_basis(h, h - 1, cell_weights(s.mesh, 1), "cell-scalar", 103, true);
    s.bases.psi = random_basis(3 * s.mesh.n_faces(), 3 * s.mesh.n_faces(),
                               face_weights(s.mesh), "face-vector", 107);
    s.bases.xi = random_basis(h, h, cell_weights(s.mesh, 1), "cell-scalar", 109);
    s.model = assemble_reduced_model(s.mesh, s.ws.ops, s.ws.u_b, s.bases, s.nu);
    return s;
}

// ---------------------------------------------------------------------------
// Criterion 1: divergence-free face fluxes, full order and reduced order.

Result criterion_divergence() {
    const double tol = 1e-8;
    // Full order: a short cavity run, worst divergence over every step.
    StructuredMesh mesh = build_structured_mesh(4, 4, 4, 1.0, 1.0, 1.0);
    const BoundaryPatchSet patches = classify_boundary(mesh, {1.0, 0.0, 0.0});
    const FomWorkspace ws = make_workspace(mesh, patches);
    FomConfig cfg;
    cfg.nu = 1e-3;
    cfg.dt = 2e-3;
    cfg.ppe_tol = 1e-11;
    FomState s = initial_state(mesh, ws);
    double worst_fom = 0.0;
    for (int n = 0; n < 5; ++n) {
        s = cfm_step(s, mesh, ws, cfg);
        worst_fom = std::max(worst_fom, relative_divergence(mesh, ws, s.u_f));
    }

    // Reduced order with full-rank bases: continuity of the reconstructed flux.
    const FullRankSetup fr = make_full_rank_setup();
    FomConfig fc;
    fc.nu = fr.nu;
    fc.dt = 1e-3;
    fc.ppe_tol = 1e-13;
    FomState fs = initial_state(fr.mesh, fr.ws);
    for (int n = 0; n < 4; ++n) fs = cfm_step(fs, fr.mesh, fr.ws, fc);
    RomState rs = project_state(fr.bases, fs.u_p.v, fs.p_p.v, fs.u_f.v,
                                smagorinsky_viscosity(fr.mesh, fs.u_p, fr.ws.u_b, 0.2).v);
    const OnlineRom stepper(fr.model, fc.dt);
    const RomState next = stepper.step(rs, rs.d);
    const std::vector<double> div =
        fr.ws.ops.M.apply(reconstruct_field(fr.bases.psi, next.c));
    double worst_rom = 0.0;
    for (int k = 0; k < fr.mesh.n_cells(); ++k)
        worst_rom = std::max(worst_rom, std::abs(div[k] + fr.ws.r_M[k]));

    return {worst_fom <= tol && worst_rom <= tol,
            "fom " + fmt(worst_fom) + ", rom " + fmt(worst_rom) + " (tol 1e-08)"};
}

// ---------------------------------------------------------------------------
// Criterion 2: operator identities against independent constructions.

double dense_product_diff(const SparseOperator& a, const SparseOperator& b,
                          const SparseOperator& want) {
    const auto prod = a.multiply(b).to_dense();
    const auto ref = want.to_dense();
    double worst = 0.0;
    for (size_t r = 0; r < ref.size(); ++r)
        for (size_t c = 0; c < ref[r].size(); ++c)
            worst = std::max(worst, std::abs(prod[r][c] - ref[r][c]));
    return worst;
}

Result criterion_operator_identities() {
    const double tol = 1e-14;
    double worst = 0.0;
    for (const auto& dims : {std::array<int, 3>{3, 2, 2}, std::array<int, 3>{4, 4, 4}}) {
        StructuredMesh mesh =
            build_structured_mesh(dims[0], dims[1], dims[2], 1.0, 0.9, 0.8);
        const Operators ops = assemble_operators(mesh);
        // The cell divergence is exactly the face divergence of interpolants.
        worst = std::max(worst, dense_product_diff(ops.M, ops.I_pf, ops.M_p));
        // The face-gradient construction makes M G_f the compact Laplacian.
        worst = std::max(worst, dense_product_diff(ops.M, ops.G_f, ops.L_f));
        // The cell gradient annihilates constants.
        worst = std::max(
            worst, max_abs(ops.G_p.apply(std::vector<double>(mesh.n_cells(), 1.0))));
    }
    return {worst <= tol, "max deviation " + fmt(worst) + " (tol 1e-14)"};
}

// ---------------------------------------------------------------------------
// Criterion 3: the compact pressure operator couples the checkerboard mode.

Result criterion_checkerboard() {
    StructuredMesh mesh = build_structured_mesh(6, 6, 6, 1.0, 1.0, 1.0);
    const Operators ops = assemble_operators(mesh);
    std::vector<double> parity(mesh.n_cells());
    for (int k = 0; k < 6; ++k)
        for (int j = 0; j < 6; ++j)
            for (int i = 0; i < 6; ++i)
                parity[mesh.cell_index(i, j, k)] = ((i + j + k) % 2 == 0) ? 1.0 : -1.0;

    const std::vector<double> wide = ops.L_p.apply(parity);
    const std::vector<double> compact = ops.L_f.apply(parity);
    const double h = mesh.dx();
    const double coupling_floor = 4.0 * (h * h) / h;  // 4 |S| / |d|
    double worst_wide = 0.0, min_compact = 1e300;
    for (int k = 2; k < 4; ++k)
        for (int j = 2; j < 4; ++j)
            for (int i = 2; i < 4; ++i) {
                const int c = mesh.cell_index(i, j, k);
                worst_wide = std::max(worst_wide, std::abs(wide[c]));
                min_compact = std::min(min_compact, std::abs(compact[c]));
            }
    return {worst_wide <= 1e-12 && min_compact >= coupling_floor,
            "wide-stencil response " + fmt(worst_wide) + " (tol 1e-12), compact " +
                fmt(min_compact) + " (floor " + fmt(coupling_floor) + ")"};
}

// ---------------------------------------------------------------------------
// Criterion 4: the reduction basis is orthonormal and reproduces its span.

Result criterion_pod() {
    const double tol = 1e-10;
    const StructuredMesh mesh = build_structured_mesh(4, 3, 2, 1.0, 0.8, 0.6);
    const std::vector<double> w = cell_weights(mesh, 3);
    Rng rng(55);
    DenseMatrix gen(3 * mesh.n_cells(), 4);
    for (double& x : gen.data) x = rng.uniform(-1.0, 1.0);
    DenseMatrix coeff(4, 9);
    for (double& x : coeff.data) x = rng.uniform(-1.0, 1.0);
    DenseMatrix snaps(gen.rows, 9);
    for (int j = 0; j < snaps.cols; ++j)
        for (int i = 0; i < snaps.rows; ++i) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += gen(i, k) * coeff(k, j);
            snaps(i, j) = s;
        }
    const PodBasis basis = pod_from_snapshots(snaps, 4, w, "cell-vector");

    double worst_ortho = 0.0;
    for (int i = 0; i < basis.n_modes(); ++i)
        for (int j = 0; j < basis.n_modes(); ++j) {
            double dot = 0.0;
            for (int k = 0; k < basis.dof(); ++k)
                dot += basis.modes(k, i) * w[k] * basis.modes(k, j);
            worst_ortho = std::max(worst_ortho, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }

    double worst_rec = 0.0;
    for (int j = 0; j < snaps.cols; ++j) {
        std::vector<double> col(snaps.rows);
        for (int i = 0; i < snaps.rows; ++i) col[i] = snaps(i, j);
        const std::vector<double> rec =
            reconstruct_field(basis, project_coefficients(col, basis));
        worst_rec = std::max(worst_rec, max_abs_diff(rec, col));
    }
    return {worst_ortho <= tol && worst_rec <= tol,
            "orthonormality " + fmt(worst_ortho) + ", in-span reconstruction " +
                fmt(worst_rec) + " (tol 1e-10)"};
}

// ---------------------------------------------------------------------------
// Criterion 5: the reduction is a faithful Galerkin projection.

Result criterion_galerkin() {
    const FullRankSetup s = make_full_rank_setup();
    const ReducedModel& m = s.model;
    const std::vector<double> a = rand_vec(m.n_u, 201);
    const std::vector<double> b = rand_vec(m.n_p, 203);
    const std::vector<double> u = reconstruct_field(s.bases.phi, a);
    const std::vector<double> p = reconstruct_field(s.bases.chi, b);

    auto rel = [](double diff, const std::vector<double>& ref) {
        return diff / std::max(1.0, max_abs(ref));
    };
    double worst_op = 0.0;
    {
        const std::vector<double> want =
            project_coefficients(s.ws.ops.D_lam.apply(u), s.bases.phi);
        worst_op = std::max(worst_op, rel(max_abs_diff(m.D_r.apply(a), want), want));
    }
    {
        const std::vector<double> want =
            project_coefficients(s.ws.ops.M_p.apply(s.ws.ops.D_lam.apply(u)), s.bases.chi);
        worst_op = std::max(worst_op, rel(max_abs_diff(m.B_r.apply(a), want), want));
    }
    {
        const std::vector<double> want =
            project_coefficients(s.ws.ops.G_p.apply(p), s.bases.phi);
        worst_op = std::max(worst_op, rel(max_abs_diff(m.Ghat_r.apply(b), want), want));
    }
    {
        const std::vector<double> want =
            project_coefficients(s.ws.ops.G_f.apply(p), s.bases.psi);
        worst_op = std::max(worst_op, rel(max_abs_diff(m.G_r.apply(b), want), want));
    }
    {
        const std::vector<double> want =
            project_coefficients(s.ws.ops.L_f.apply(p), s.bases.chi);
        worst_op = std::max(worst_op, rel(max_abs_diff(m.L_r.apply(b), want), want));
    }
    {
        const std::vector<double> want =
            project_coefficients(s.ws.ops.I_pf.apply(u), s.bases.psi);
        worst_op = std::max(worst_op, rel(max_abs_diff(m.N_r.apply(a), want), want));
    }

    // One reduced step against the projected full-order step.
    FomConfig cfg;
    cfg.nu = s.nu;
    cfg.dt = 1e-3;
    cfg.ppe_tol = 1e-13;
    FomState fom = initial_state(s.mesh, s.ws);
    for (int n = 0; n < 4; ++n) fom = cfm_step(fom, s.mesh, s.ws, cfg);
    RomState rom = project_state(s.bases, fom.u_p.v, fom.p_p.v, fom.u_f.v,
                                 smagorinsky_viscosity(s.mesh, fom.u_p, s.ws.u_b, 0.2).v);
    const RomState rom_next = OnlineRom(s.model, cfg.dt).step(rom, rom.d);
    const FomState fom_next = cfm_step(fom, s.mesh, s.ws, cfg);
    double worst_step = max_abs_diff(reconstruct_field(s.bases.phi, rom_next.a),
                                     fom_next.u_p.v);
    worst_step = std::max(worst_step,
                          max_abs_diff(reconstruct_field(s.bases.psi, rom_next.c),
                                       fom_next.u_f.v));

    return {worst_op <= 1e-12 && worst_step <= 1e-8,
            "operator projection " + fmt(worst_op) + " (tol 1e-12), full-rank step " +
                fmt(worst_step) + " (tol 1e-08)"};
}

// ---------------------------------------------------------------------------
// Reference cavity case shared by criteria 6, 7, and 9.

struct DeskCase {
    CaseConfig cfg;
    StructuredMesh mesh;
    RomBases bases;
    ReducedModel model;
    pipeline::ModalHistory hist;
    RomTrajectory oracle;
    FieldSeries u_fom, p_fom, nut_fom;
    ErrorSeries err_u, err_p;
    std::vector<double> e_fom, e_rom, z_fom, z_rom;
    FaceVectorField u_b;
};

/// Per-instant relative errors of a reduced trajectory against the stored
/// full-order snapshots (velocity and gauge-fixed pressure).
void trajectory_errors(const DeskCase& d, const RomTrajectory& traj, ErrorSeries* err_u,
                       ErrorSeries* err_p, std::vector<std::vector<double>>* u_rom_out) {
    const int stride = d.cfg.snapshot_stride;
    const int n_snaps = static_cast<int>(d.u_fom.times.size());
    const int n_u = static_cast<int>(traj.a[0].size());
    const int n_p = static_cast<int>(traj.b[0].size());
    const PodBasis phi = d.bases.phi.truncated(n_u);
    const PodBasis chi = d.bases.chi.truncated(n_p);
    const std::vector<double> ws = cell_weights(d.mesh, 1);

    std::vector<std::vector<double>> u_rom(n_snaps), p_rom(n_snaps), p_ref(n_snaps);
    for (int k = 0; k < n_snaps; ++k) {
        const int r = k * stride;
        u_rom[k] = reconstruct_field(phi, traj.a[r]);
        p_rom[k] = reconstruct_field(chi, traj.b[r]);
        p_ref[k] = d.p_fom.columns[k];
        remove_weighted_mean(p_ref[k], ws);
        remove_weighted_mean(p_rom[k], ws);
    }
    if (err_u)
        *err_u = relative_error_series(d.u_fom.times, d.u_fom.columns, u_rom,
                                       cell_weights(d.mesh, 3));
    if (err_p) *err_p = relative_error_series(d.u_fom.times, p_ref, p_rom, ws);
    if (u_rom_out) *u_rom_out = std::move(u_rom);
}

DeskCase build_desk_case() {
    const fs::path dir = fs::temp_directory_path() / "romflux_acceptance_case";
    fs::create_directories(dir);
    const fs::path ini = dir / "case.ini";
    if (!fs::exists(ini)) {
        std::ofstream out(ini);
        out << "[mesh]\n"
               "nx = 24\nny = 24\nnz = 24\n"
               "[physics]\n"
               "nu = 1e-4\nc_s = 0.2\n"
               "[time]\n"
               "dt = 0.005\nn_steps = 600\nspinup_steps = 3000\nsnapshot_stride = 2\n"
               "[rom]\n"
               "modes_u = 10\nmodes_p = 10\nmodes_f = 10\nmodes_nut = 10\n"
               "ppe_tol = 1e-10\n"
               "[closure]\n"
               "model = lstm\nlookback = 15\nepochs = 1200\nbatch_size = 64\n"
               "learning_rate = 2e-5\nval_fraction = 0.2\nseed = 1\n";
    }
    DeskCase d;
    d.cfg = load_case_config(ini);
    {
        const SnapshotSet probe(d.cfg.snapshots_dir());
        if (!probe.has("u_p")) {
            std::printf("-- reference case: running the full-order solver\n");
            pipeline::cmd_fom_run(d.cfg);
        }
    }
    {
        const SnapshotSet probe(d.cfg.snapshots_dir());
        if (!probe.has("phi_modes")) {
            std::printf("-- reference case: extracting bases\n");
            pipeline::cmd_pod(d.cfg);
        }
        if (!probe.has("rom_meta")) {
            std::printf("-- reference case: assembling the reduced model\n");
            pipeline::cmd_rom_offline(d.cfg);
        }
    }
    if (!fs::exists(pipeline::closure_path(d.cfg, "lstm"))) {
        std::printf("-- reference case: training the recurrent closure\n");
        pipeline::cmd_closure_train(d.cfg, "lstm", d.cfg.seed);
    }

    d.mesh = pipeline::case_mesh(d.cfg);
    StructuredMesh mesh_copy = d.mesh;
    const BoundaryPatchSet patches = classify_boundary(mesh_copy, d.cfg.lid_velocity);
    d.u_b = boundary_velocity_field(d.mesh, patches);
    d.bases = pipeline::load_case_bases(d.cfg, d.mesh);
    SnapshotSet snaps(d.cfg.snapshots_dir());
    d.model = load_reduced_model(snaps);
    d.hist = pipeline::project_history(snaps, d.bases);
    d.u_fom = snaps.read_series("u_p");
    d.p_fom = snaps.read_series("p_p");
    d.nut_fom = snaps.read_series("nu_t");

    std::printf("-- reference case: reduced run with recorded viscosity\n");
    d.oracle =
        pipeline::run_online_case(d.cfg, d.model, d.hist, pipeline::OnlineMode::OracleD,
                                  nullptr);
    std::vector<std::vector<double>> u_rom;
    trajectory_errors(d, d.oracle, &d.err_u, &d.err_p, &u_rom);
    const int n_snaps = static_cast<int>(d.u_fom.times.size());
    d.e_fom.resize(n_snaps);
    d.e_rom.resize(n_snaps);
    d.z_fom.resize(n_snaps);
    d.z_rom.resize(n_snaps);
    for (int k = 0; k < n_snaps; ++k) {
        const CellVectorField uf{d.u_fom.columns[k]};
        const CellVectorField ur{u_rom[k]};
        d.e_fom[k] = kinetic_energy(d.mesh, uf);
        d.e_rom[k] = kinetic_energy(d.mesh, ur);
        d.z_fom[k] = enstrophy(d.mesh, uf, d.u_b);
        d.z_rom[k] = enstrophy(d.mesh, ur, d.u_b);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Criterion 6: reduced-order accuracy and mode convergence on the cavity.

Result criterion_cavity_accuracy(const DeskCase& d) {
    const double eu = time_mean(d.err_u);
    const double ep = time_mean(d.err_p);

    std::vector<double> sweep;
    for (int n = 2; n <= std::min({d.model.n_u, d.model.n_p, d.model.n_c}); ++n) {
        const ReducedModel sub =
            d.model.truncated(n, n, n, std::min(n, d.model.n_nut));
        const RomTrajectory traj = pipeline::run_online_case(
            d.cfg, sub, d.hist, pipeline::OnlineMode::OracleD, nullptr);
        const int stride = d.cfg.snapshot_stride;
        const int n_snaps = static_cast<int>(d.u_fom.times.size());
        const PodBasis phi = d.bases.phi.truncated(n);
        std::vector<std::vector<double>> u_rom(n_snaps);
        for (int k = 0; k < n_snaps; ++k)
            u_rom[k] = reconstruct_field(phi, traj.a[k * stride]);
        sweep.push_back(relative_error_spacetime(d.u_fom.columns, u_rom,
                                                 cell_weights(d.mesh, 3)));
    }
    bool decreasing = sweep.back() < sweep.front();
    double worst_ratio = 0.0;
    for (size_t i = 1; i < sweep.size(); ++i)
        worst_ratio = std::max(worst_ratio, sweep[i] / sweep[i - 1]);
    decreasing = decreasing && worst_ratio <= 1.05;

    std::ostringstream sweep_str;
    for (double v : sweep) sweep_str << " " << fmt(v);
    return {eu <= 0.03 && ep <= 0.10 && decreasing,
            "velocity " + fmt(eu) + " (tol 0.03), pressure " + fmt(ep) +
                " (tol 0.10), mode sweep" + sweep_str.str()};
}

// ---------------------------------------------------------------------------
// Criterion 7: the learned closure.

Result criterion_closure(const DeskCase& d) {
    // (a) Held-out viscosity coefficients from the trained recurrent model.
    const ClosureBundle bundle = load_closure(pipeline::closure_path(d.cfg, "lstm"));
    const DenseMatrix features = pipeline::feature_rows(d.hist.a, d.hist.b);
    const int lookback = bundle.model->lookback();
    const int n_windows = features.rows - lookback + 1;
    const int n_val = std::max(1, static_cast<int>(
                                      std::lround(d.cfg.val_fraction * n_windows)));
    double err_sum = 0.0;
    int err_count = 0;
    for (int wdx = n_windows - n_val; wdx < n_windows; ++wdx) {
        DenseMatrix window(lookback, features.cols);
        for (int t = 0; t < lookback; ++t)
            for (int j = 0; j < features.cols; ++j) window(t, j) = features(wdx + t, j);
        const std::vector<double> got = bundle.predict(window);
        const int target_row = wdx + lookback - 1;
        double num = 0.0, den = 0.0;
        for (int j = 0; j < d.hist.d.cols; ++j) {
            num += std::abs(got[j] - d.hist.d(target_row, j));
            den += std::abs(d.hist.d(target_row, j));
        }
        if (den > 0.0) {
            err_sum += num / den;
            ++err_count;
        }
    }
    const double held_out = err_sum / std::max(1, err_count);

    // (b) A memory-limited benchmark: the target is the penultimate input row,
    // which a net that only sees the last row cannot recover.
    const int n_rows = 400, ar_lookback = 4;
    DenseMatrix x(n_rows, 1), y(n_rows, 1);
    Rng noise(303);
    double x1 = 0.0, x2 = 0.0;
    for (int t = 0; t < n_rows; ++t) {
        const double xt = 0.3 * x1 - 0.85 * x2 + 0.1 * noise.uniform(-1.0, 1.0);
        x(t, 0) = xt;
        y(t, 0) = x1;
        x2 = x1;
        x1 = xt;
    }
    const WindowDataset ar_data = build_windows(x, y, ar_lookback);
    TrainConfig tc;
    tc.epochs = 200;
    tc.batch_size = 32;
    tc.learning_rate = 2e-3;
    tc.val_fraction = 0.25;
    tc.seed = 3;
    auto lstm = make_lstm(1, 1, ar_lookback, 11);
    auto mlp = make_mlp(1, 1, 11, 0.0);
    const double lstm_val = train_closure(*lstm, ar_data, tc).back().val_loss;
    const double mlp_val = train_closure(*mlp, ar_data, tc).back().val_loss;

    // (c) The hybrid run, fed by its own history, stays close to the run that
    // uses the recorded viscosity.
    const RomTrajectory hybrid = pipeline::run_online_case(
        d.cfg, d.model, d.hist, pipeline::OnlineMode::Hybrid, &bundle);
    ErrorSeries err_u_hybrid;
    trajectory_errors(d, hybrid, &err_u_hybrid, nullptr, nullptr);
    const double eu_hybrid = time_mean(err_u_hybrid);
    const double eu_oracle = time_mean(d.err_u);

    // The factor-of-two comparison degenerates when the oracle run sits at
    // the numerical noise floor, so an absolute 1 % velocity error also
    // counts as matching it.
    const bool hybrid_ok = eu_hybrid <= std::max(2.0 * eu_oracle, 0.01);
    const bool pass = held_out <= 0.10 && lstm_val < mlp_val && hybrid_ok;
    return {pass, "held-out viscosity " + fmt(held_out) +
                      " (tol 0.10), recurrent val " + fmt(lstm_val) +
                      " < feed-forward val " + fmt(mlp_val) + ", hybrid velocity " +
                      fmt(eu_hybrid) + " vs " + fmt(eu_oracle) +
                      " (<= max(2x, 0.01))"};
}

// ---------------------------------------------------------------------------
// Criterion 8: numerical hygiene of the building blocks.

double gradient_check(ClosureModel& model, const WindowDataset& data) {
    const std::vector<int> batch = {0, 1, 2};
    std::vector<double> grad(model.parameters().size(), 0.0);
    model.loss_and_gradient(data, batch, grad, nullptr);
    Rng pick(71);
    double worst = 0.0;
    const double eps = 1e-6;
    std::vector<double>& p = model.parameters();
    std::vector<double> scratch(p.size());
    for (int trial = 0; trial < 30; ++trial) {
        const size_t i = pick.below(static_cast<std::uint64_t>(p.size()));
        const double saved = p[i];
        p[i] = saved + eps;
        const double lp = model.loss_and_gradient(data, batch, scratch, nullptr);
        p[i] = saved - eps;
        const double lm = model.loss_and_gradient(data, batch, scratch, nullptr);
        p[i] = saved;
        worst = std::max(worst, std::abs((lp - lm) / (2.0 * eps) - grad[i]));
    }
    return worst;
}

WindowDataset synthetic_dataset(int in, int out, int lookback, int n_rows,
                                std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix f(n_rows, in), t(n_rows, out);
    for (double& v : f.data) v = rng.uniform(-1.0, 1.0);
    for (int r = 0; r < n_rows; ++r)
        for (int j = 0; j < out; ++j) {
            double s = 0.05 * rng.uniform(-1.0, 1.0);
            for (int k = 0; k < in; ++k) s += 0.4 * std::sin(f(r, k) + j);
            t(r, j) = s;
        }
    return build_windows(f, t, lookback);
}

double laplacian_interior_error(int n, bool quadratic) {
    const StructuredMesh mesh = build_structured_mesh(n, n, n, 1.0, 1.0, 1.0);
    const int h = mesh.n_cells();
    const double pi = std::acos(-1.0);
    auto field = [&](const Vec3& p) {
        if (quadratic) return p.x * p.x + 2.0 * p.y * p.y + 3.0 * p.z * p.z;
        return std::sin(pi * p.x) * std::sin(pi * p.y) * std::sin(pi * p.z);
    };
    auto exact = [&](const Vec3& p) {
        if (quadratic) return 12.0;
        return -3.0 * pi * pi * field(p);
    };
    std::vector<double> u(3 * h, 0.0);
    for (int c = 0; c < h; ++c) {
        const double v = field(mesh.cell_center(c));
        u[3 * c] = u[3 * c + 1] = u[3 * c + 2] = v;
    }
    const std::vector<double> nu_f(mesh.n_faces(), 1.0);
    const std::vector<double> r = assemble_laplacian(mesh, nu_f).apply(u);
    double worst = 0.0;
    for (int k = 1; k < n - 1; ++k)
        for (int j = 1; j < n - 1; ++j)
            for (int i = 1; i < n - 1; ++i) {
                const int c = mesh.cell_index(i, j, k);
                const double want = exact(mesh.cell_center(c));
                for (int comp = 0; comp < 3; ++comp)
                    worst = std::max(worst, std::abs(r[3 * c + comp] - want));
            }
    return worst;
}

Result criterion_numerics() {
    // (a) Analytic gradients against central differences.
    auto mlp = make_mlp(3, 2, 17, 0.0);
    auto lstm = make_lstm(3, 2, 4, 19);
    const double g_mlp = gradient_check(*mlp, synthetic_dataset(3, 2, 1, 12, 23));
    const double g_lstm = gradient_check(*lstm, synthetic_dataset(3, 2, 4, 16, 29));

    // (b) Scaler round trip.
    Rng rng(31);
    DenseMatrix rows(30, 5);
    for (double& v : rows.data) v = rng.uniform(-3.0, 3.0);
    StandardScaler sc;
    sc.fit(rows);
    double sc_err = 0.0;
    for (int r = 0; r < rows.rows; ++r) {
        std::vector<double> row(5);
        for (int j = 0; j < 5; ++j) row[j] = rows(r, j);
        const std::vector<double> back = sc.inverse(sc.transform(row));
        for (int j = 0; j < 5; ++j)
            sc_err = std::max(sc_err, std::abs(back[j] - rows(r, j)));
    }

    // (c) Diffusion stencil: exact on quadratics at two resolutions, or
    // second-order on a smooth field.
    const double q8 = laplacian_interior_error(8, true) / 12.0;
    const double q12 = laplacian_interior_error(12, true) / 12.0;
    const double s8 = laplacian_interior_error(8, false);
    const double s16 = laplacian_interior_error(16, false);
    const double order = std::log2(s8 / s16);
    const bool laplacian_ok = (q8 < 1e-12 && q12 < 1e-12) || order >= 1.9;

    // (d) Bit-identical training for a fixed seed.
    const WindowDataset data = synthetic_dataset(2, 1, 1, 40, 37);
    TrainConfig tc;
    tc.epochs = 20;
    tc.batch_size = 8;
    tc.learning_rate = 1e-3;
    tc.seed = 7;
    auto m1 = make_mlp(2, 1, 41, 0.2);
    auto m2 = make_mlp(2, 1, 41, 0.2);
    train_closure(*m1, data, tc);
    train_closure(*m2, data, tc);
    const bool deterministic = m1->parameters() == m2->parameters();

    const bool grad_ok = g_mlp <= 1e-6 && g_lstm <= 1e-6;
    return {grad_ok && sc_err <= 1e-12 && laplacian_ok && deterministic,
            "gradients " + fmt(std::max(g_mlp, g_lstm)) + " (tol 1e-06), scaler " +
                fmt(sc_err) + " (tol 1e-12), quadratic residual " +
                fmt(std::max(q8, q12)) + ", smooth-field order " + fmt(order) +
                ", deterministic " + (deterministic ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// Criterion 9: integral quantities of the reduced run.

Result criterion_integrals(const DeskCase& d) {
    auto scalar_series = [](const std::vector<double>& v) {
        std::vector<std::vector<double>> cols;
        for (double x : v) cols.push_back({x});
        return cols;
    };
    const std::vector<double> w{1.0};
    const double e_err =
        relative_error_spacetime(scalar_series(d.e_fom), scalar_series(d.e_rom), w);
    const double z_err =
        relative_error_spacetime(scalar_series(d.z_fom), scalar_series(d.z_rom), w);
    return {e_err <= 0.03 && z_err <= 0.08,
            "energy " + fmt(e_err) + " (tol 0.03), enstrophy " + fmt(z_err) +
                " (tol 0.08)"};
}

}  // namespace

int main() {
    // Cheap structural criteria first; the cavity case is built once and
    // shared by the last three.
    std::vector<std::pair<std::string, Result>> results;
    auto record = [&](const std::string& name, std::function<Result()> run) {
        Result r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        results.emplace_back(name, r);
    };

    record("C1 divergence-free face flux", criterion_divergence);
    record("C2 operator identities", criterion_operator_identities);
    record("C3 checkerboard coupling", criterion_checkerboard);
    record("C4 basis extraction", criterion_pod);
    record("C5 Galerkin consistency", criterion_galerkin);
    record("C8 numerical hygiene", criterion_numerics);

    bool desk_ok = false;
    DeskCase desk;
    try {
        desk = build_desk_case();
        desk_ok = true;
    } catch (const std::exception& e) {
        const std::string msg = std::string("reference case failed: ") + e.what();
        results.emplace_back("C6 cavity accuracy", Result{false, msg});
        results.emplace_back("C7 learned closure", Result{false, msg});
        results.emplace_back("C9 integral quantities", Result{false, msg});
    }
    if (desk_ok) {
        record("C6 cavity accuracy", [&] { return criterion_cavity_accuracy(desk); });
        record("C7 learned closure", [&] { return criterion_closure(desk); });
        record("C9 integral quantities", [&] { return criterion_integrals(desk); });
    }

    std::sort(results.begin(), results.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    bool all = true;
    for (const auto& [name, r] : results) {
        std::printf("[%s] %s — %s\n", r.pass ? "PASS" : "FAIL", name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
