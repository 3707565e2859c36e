#include "romflux/rom.hpp"

namespace romflux {

namespace {

/// Apply a sparse operator to every column of a dense mode matrix.
DenseMatrix apply_columns(const SparseOperator& op, const DenseMatrix& in) {
    require(op.cols() == in.rows, "apply_columns: dimension mismatch");
    DenseMatrix out(op.rows(), in.cols);
    std::vector<double> x(in.rows), y;
    for (int j = 0; j < in.cols; ++j) {
        for (int k = 0; k < in.rows; ++k) x[k] = in(k, j);
        y = op.apply(x);
        for (int k = 0; k < out.rows; ++k) out(k, j) = y[k];
    }
    return out;
}

/// out(i, j) = sum_k modes(k, i) w_k cols(k, j): weighted projection of the
/// columns onto the basis.
DenseMatrix project_rows(const PodBasis& basis, const DenseMatrix& cols) {
    require(basis.dof() == cols.rows, "project_rows: dof mismatch");
    DenseMatrix out(basis.n_modes(), cols.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < basis.n_modes(); ++i)
        for (int j = 0; j < cols.cols; ++j) {
            double s = 0.0;
            for (int k = 0; k < cols.rows; ++k)
                s += basis.modes(k, i) * basis.weights[k] * cols(k, j);
            out(i, j) = s;
        }
    return out;
}

std::vector<double> column_of(const DenseMatrix& m, int j) {
    std::vector<double> v(m.rows);
    for (int k = 0; k < m.rows; ++k) v[k] = m(k, j);
    return v;
}

DenseMatrix top_left(const DenseMatrix& m, int r, int c) {
    require(r <= m.rows && c <= m.cols, "truncated: mode count exceeds model size");
    DenseMatrix out(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out(i, j) = m(i, j);
    return out;
}

std::vector<double> head(const std::vector<double>& v, int n) {
    require(n <= static_cast<int>(v.size()), "truncated: mode count exceeds model size");
    return std::vector<double>(v.begin(), v.begin() + n);
}

/// y += alpha * M x for reduced matrices.
void axpy_apply(std::vector<double>& y, double alpha, const DenseMatrix& m,
                const std::vector<double>& x) {
    if (alpha == 0.0) return;
    for (int r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (int c = 0; c < m.cols; ++c) s += m(r, c) * x[c];
        y[r] += alpha * s;
    }
}

void axpy_vec(std::vector<double>& y, double alpha, const std::vector<double>& x) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

ReducedModel assemble_reduced_model(const StructuredMesh& mesh, const Operators& ops,
                                    const FaceVectorField& u_b, const RomBases& bases,
                                    double nu) {
    require(bases.phi.dof() == 3 * mesh.n_cells(), "assemble_reduced_model: phi dof mismatch");
    require(bases.chi.dof() == mesh.n_cells(), "assemble_reduced_model: chi dof mismatch");
    require(bases.psi.dof() == 3 * mesh.n_faces(), "assemble_reduced_model: psi dof mismatch");
    require(bases.xi.dof() == mesh.n_cells(), "assemble_reduced_model: xi dof mismatch");
    require(nu >= 0.0, "assemble_reduced_model: nu must be non-negative");

    ReducedModel m;
    m.n_u = bases.phi.n_modes();
    m.n_p = bases.chi.n_modes();
    m.n_c = bases.psi.n_modes();
    m.n_nut = bases.xi.n_modes();
    m.nu = nu;

    const DenseMatrix& Phi = bases.phi.modes;

    // Laminar building blocks shared by several reduced operators.
    const DenseMatrix DPhi = apply_columns(ops.D_lam, Phi);
    const DenseMatrix MpPhi = apply_columns(ops.M_p, Phi);
    const DenseMatrix IPhi = apply_columns(ops.I_pf, Phi);

    m.L_r = project_rows(bases.chi, apply_columns(ops.L_f, bases.chi.modes));
    m.M_r = project_rows(bases.chi, MpPhi);
    m.B_r = project_rows(bases.chi, apply_columns(ops.M_p, DPhi));
    m.D_r = project_rows(bases.phi, DPhi);
    m.Ghat_r = project_rows(bases.phi, apply_columns(ops.G_p, bases.chi.modes));
    m.W_r = project_rows(bases.psi, bases.psi.modes);
    m.N_r = project_rows(bases.psi, IPhi);
    m.P_r = project_rows(bases.psi, apply_columns(ops.I_pf, DPhi));
    m.G_r = project_rows(bases.psi, apply_columns(ops.G_f, bases.chi.modes));

    // Boundary data.
    const std::vector<double> r_M = continuity_boundary(mesh, u_b);
    const std::vector<double> r_C_full = convection_boundary(mesh, u_b);
    const std::vector<double> ones(mesh.n_faces(), 1.0);
    const std::vector<double> r_D_full = laplacian_boundary(mesh, ones, u_b);

    auto reduce_boundary = [&](const std::vector<double>& full, std::vector<double>& q,
                               std::vector<double>& r, std::vector<double>& s) {
        q = project_coefficients(ops.M_p.apply(full), bases.chi);
        r = project_coefficients(full, bases.phi);
        s = project_coefficients(ops.I_pf.apply(full), bases.psi);
    };
    reduce_boundary(r_C_full, m.q_C, m.r_C, m.s_C);
    reduce_boundary(r_D_full, m.q_D, m.r_D, m.s_D);
    m.q_M = project_coefficients(r_M, bases.chi);
    m.t_b = project_coefficients(u_b.v, bases.psi);

    // Convection slices: one linearized operator per face-velocity mode.
    m.A_r.resize(m.n_c);
    m.C_r.resize(m.n_c);
    m.K_r.resize(m.n_c);
    for (int i = 0; i < m.n_c; ++i) {
        FaceVectorField psi_i{column_of(bases.psi.modes, i)};
        const SparseOperator conv = assemble_convection(mesh, psi_i);
        const DenseMatrix CPhi = apply_columns(conv, Phi);
        m.A_r[i] = project_rows(bases.chi, apply_columns(ops.M_p, CPhi));
        m.C_r[i] = project_rows(bases.phi, CPhi);
        m.K_r[i] = project_rows(bases.psi, apply_columns(ops.I_pf, CPhi));
    }

    // Eddy-viscosity slices: diffusion is linear in the face viscosity, so a
    // viscosity field xi * d reduces to these per-mode contributions.
    m.Bt_r.resize(m.n_nut);
    m.Dt_r.resize(m.n_nut);
    m.Pt_r.resize(m.n_nut);
    m.q_T.resize(m.n_nut);
    m.r_T.resize(m.n_nut);
    m.s_T.resize(m.n_nut);
    for (int i = 0; i < m.n_nut; ++i) {
        const std::vector<double> nu_f =
            face_interpolate_scalar(mesh, column_of(bases.xi.modes, i));
        const SparseOperator diff = assemble_laplacian(mesh, nu_f, /*allow_signed=*/true);
        const DenseMatrix DtPhi = apply_columns(diff, Phi);
        m.Bt_r[i] = project_rows(bases.chi, apply_columns(ops.M_p, DtPhi));
        m.Dt_r[i] = project_rows(bases.phi, DtPhi);
        m.Pt_r[i] = project_rows(bases.psi, apply_columns(ops.I_pf, DtPhi));
        const std::vector<double> rt = laplacian_boundary(mesh, nu_f, u_b);
        reduce_boundary(rt, m.q_T[i], m.r_T[i], m.s_T[i]);
    }
    return m;
}

ReducedModel ReducedModel::truncated(int nu_modes, int np_modes, int nc_modes,
                                     int nnut_modes) const {
    require(nu_modes >= 1 && np_modes >= 1 && nc_modes >= 1 && nnut_modes >= 0,
            "ReducedModel::truncated: invalid mode counts");
    ReducedModel m;
    m.n_u = nu_modes;
    m.n_p = np_modes;
    m.n_c = nc_modes;
    m.n_nut = nnut_modes;
    m.nu = nu;

    m.L_r = top_left(L_r, np_modes, np_modes);
    m.M_r = top_left(M_r, np_modes, nu_modes);
    m.B_r = top_left(B_r, np_modes, nu_modes);
    m.D_r = top_left(D_r, nu_modes, nu_modes);
    m.Ghat_r = top_left(Ghat_r, nu_modes, np_modes);
    m.W_r = top_left(W_r, nc_modes, nc_modes);
    m.N_r = top_left(N_r, nc_modes, nu_modes);
    m.P_r = top_left(P_r, nc_modes, nu_modes);
    m.G_r = top_left(G_r, nc_modes, np_modes);

    require(nc_modes <= static_cast<int>(A_r.size()),
            "ReducedModel::truncated: mode count exceeds model size");
    for (int i = 0; i < nc_modes; ++i) {
        m.A_r.push_back(top_left(A_r[i], np_modes, nu_modes));
        m.C_r.push_back(top_left(C_r[i], nu_modes, nu_modes));
        m.K_r.push_back(top_left(K_r[i], nc_modes, nu_modes));
    }
    require(nnut_modes <= static_cast<int>(Bt_r.size()),
            "ReducedModel::truncated: mode count exceeds model size");
    for (int i = 0; i < nnut_modes; ++i) {
        m.Bt_r.push_back(top_left(Bt_r[i], np_modes, nu_modes));
        m.Dt_r.push_back(top_left(Dt_r[i], nu_modes, nu_modes));
        m.Pt_r.push_back(top_left(Pt_r[i], nc_modes, nu_modes));
        m.q_T.push_back(head(q_T[i], np_modes));
        m.r_T.push_back(head(r_T[i], nu_modes));
        m.s_T.push_back(head(s_T[i], nc_modes));
    }

    m.q_M = head(q_M, np_modes);
    m.q_C = head(q_C, np_modes);
    m.q_D = head(q_D, np_modes);
    m.r_C = head(r_C, nu_modes);
    m.r_D = head(r_D, nu_modes);
    m.s_C = head(s_C, nc_modes);
    m.s_D = head(s_D, nc_modes);
    m.t_b = head(t_b, nc_modes);
    return m;
}

RomState project_state(const RomBases& bases, const std::vector<double>& u_p,
                       const std::vector<double>& p_p, const std::vector<double>& u_f,
                       const std::vector<double>& nu_t) {
    RomState s;
    s.a = project_coefficients(u_p, bases.phi);
    s.b = project_coefficients(p_p, bases.chi);
    s.c = project_coefficients(u_f, bases.psi);
    s.d = project_coefficients(nu_t, bases.xi);
    return s;
}

OnlineRom::OnlineRom(const ReducedModel& model, double dt)
    : model_(model), dt_(dt), lu_pressure_(model.L_r), lu_face_(model.W_r) {
    require(dt > 0.0, "OnlineRom: dt must be positive");
}

RomState OnlineRom::step(const RomState& state, const std::vector<double>& d_next) const {
    const ReducedModel& m = model_;
    require(static_cast<int>(state.a.size()) == m.n_u &&
                static_cast<int>(state.b.size()) == m.n_p &&
                static_cast<int>(state.c.size()) == m.n_c,
            "OnlineRom::step: state size mismatch");
    std::vector<double> d = d_next;
    if (d.empty()) d.assign(static_cast<size_t>(m.n_nut), 0.0);
    require(static_cast<int>(d.size()) == m.n_nut, "OnlineRom::step: d size mismatch");
    require(all_finite(state.a) && all_finite(d), "OnlineRom::step: non-finite input");

    // Reduced momentum forcing projected three ways: onto the pressure rows
    // (fb), the cell-velocity rows (fa), and the face rows (fc).
    std::vector<double> fb(static_cast<size_t>(m.n_p), 0.0);
    std::vector<double> fa(static_cast<size_t>(m.n_u), 0.0);
    std::vector<double> fc(static_cast<size_t>(m.n_c), 0.0);
    for (int i = 0; i < m.n_c; ++i) {
        axpy_apply(fb, -state.c[i], m.A_r[i], state.a);
        axpy_apply(fa, -state.c[i], m.C_r[i], state.a);
        axpy_apply(fc, -state.c[i], m.K_r[i], state.a);
    }
    axpy_apply(fb, m.nu, m.B_r, state.a);
    axpy_apply(fa, m.nu, m.D_r, state.a);
    axpy_apply(fc, m.nu, m.P_r, state.a);
    for (int i = 0; i < m.n_nut; ++i) {
        axpy_apply(fb, d[i], m.Bt_r[i], state.a);
        axpy_apply(fa, d[i], m.Dt_r[i], state.a);
        axpy_apply(fc, d[i], m.Pt_r[i], state.a);
        axpy_vec(fb, d[i], m.q_T[i]);
        axpy_vec(fa, d[i], m.r_T[i]);
        axpy_vec(fc, d[i], m.s_T[i]);
    }
    axpy_vec(fb, -1.0, m.q_C);
    axpy_vec(fa, -1.0, m.r_C);
    axpy_vec(fc, -1.0, m.s_C);
    axpy_vec(fb, m.nu, m.q_D);
    axpy_vec(fa, m.nu, m.r_D);
    axpy_vec(fc, m.nu, m.s_D);

    // Pressure solve.
    std::vector<double> rhs_b = fb;
    axpy_apply(rhs_b, 1.0 / dt_, m.M_r, state.a);
    axpy_vec(rhs_b, 1.0 / dt_, m.q_M);
    RomState next;
    next.b = lu_pressure_.solve(rhs_b);

    // Cell velocity update.
    next.a = state.a;
    axpy_vec(next.a, dt_, fa);
    axpy_apply(next.a, -dt_, m.Ghat_r, next.b);

    // Face velocity update through the reduced face mass matrix.
    std::vector<double> rhs_c = m.t_b;
    axpy_apply(rhs_c, 1.0, m.N_r, state.a);
    axpy_vec(rhs_c, dt_, fc);
    axpy_apply(rhs_c, -dt_, m.G_r, next.b);
    next.c = lu_face_.solve(rhs_c);

    next.d = std::move(d);
    next.time = state.time + dt_;
    next.step = state.step + 1;
    if (!all_finite(next.a) || !all_finite(next.b) || !all_finite(next.c))
        throw NumericalError("OnlineRom::step: NaN detected at step " +
                             std::to_string(next.step));
    return next;
}

RomTrajectory run_rom_online(const ReducedModel& model, const RomState& init, double dt,
                             int n_steps, const DProvider& d_provider) {
    OnlineRom rom(model, dt);
    RomTrajectory traj;
    auto record = [&](const RomState& s) {
        traj.times.push_back(s.time);
        traj.a.push_back(s.a);
        traj.b.push_back(s.b);
        traj.c.push_back(s.c);
        traj.d.push_back(s.d);
    };
    RomState state = init;
    record(state);
    for (int n = 0; n < n_steps; ++n) {
        const std::vector<double> d =
            d_provider ? d_provider(n, state) : std::vector<double>();
        state = rom.step(state, d);
        record(state);
    }
    return traj;
}

namespace {

void write_dense(SnapshotSet& out, const std::string& name, const DenseMatrix& m) {
    out.write_matrix(name, m.rows, m.cols, m.data);
}

void write_vec(SnapshotSet& out, const std::string& name, const std::vector<double>& v) {
    out.write_matrix(name, 1, static_cast<int>(v.size()), v);
}

DenseMatrix read_dense(const SnapshotSet& in, const std::string& name) {
    const SnapshotRecord& rec = in.find_matrix(name);
    DenseMatrix m(rec.rows, rec.cols);
    m.data = in.read_record(rec);
    return m;
}

std::vector<double> read_vec(const SnapshotSet& in, const std::string& name) {
    return in.read_record(in.find_matrix(name));
}

}  // namespace

void save_reduced_model(SnapshotSet& out, const ReducedModel& m) {
    write_vec(out, "rom_meta",
              {static_cast<double>(m.n_u), static_cast<double>(m.n_p),
               static_cast<double>(m.n_c), static_cast<double>(m.n_nut), m.nu});
    write_dense(out, "rom_L", m.L_r);
    write_dense(out, "rom_M", m.M_r);
    write_dense(out, "rom_B", m.B_r);
    write_dense(out, "rom_D", m.D_r);
    write_dense(out, "rom_Ghat", m.Ghat_r);
    write_dense(out, "rom_W", m.W_r);
    write_dense(out, "rom_N", m.N_r);
    write_dense(out, "rom_P", m.P_r);
    write_dense(out, "rom_G", m.G_r);
    for (int i = 0; i < m.n_c; ++i) {
        const std::string k = std::to_string(i);
        write_dense(out, "rom_A_" + k, m.A_r[i]);
        write_dense(out, "rom_C_" + k, m.C_r[i]);
        write_dense(out, "rom_K_" + k, m.K_r[i]);
    }
    for (int i = 0; i < m.n_nut; ++i) {
        const std::string k = std::to_string(i);
        write_dense(out, "rom_Bt_" + k, m.Bt_r[i]);
        write_dense(out, "rom_Dt_" + k, m.Dt_r[i]);
        write_dense(out, "rom_Pt_" + k, m.Pt_r[i]);
        write_vec(out, "rom_qT_" + k, m.q_T[i]);
        write_vec(out, "rom_rT_" + k, m.r_T[i]);
        write_vec(out, "rom_sT_" + k, m.s_T[i]);
    }
    write_vec(out, "rom_qM", m.q_M);
    write_vec(out, "rom_qC", m.q_C);
    write_vec(out, "rom_qD", m.q_D);
    write_vec(out, "rom_rC", m.r_C);
    write_vec(out, "rom_rD", m.r_D);
    write_vec(out, "rom_sC", m.s_C);
    write_vec(out, "rom_sD", m.s_D);
    write_vec(out, "rom_tb", m.t_b);
}

ReducedModel load_reduced_model(const SnapshotSet& in) {
    const std::vector<double> meta = read_vec(in, "rom_meta");
    require(meta.size() == 5, "load_reduced_model: malformed metadata record");
    ReducedModel m;
    m.n_u = static_cast<int>(meta[0]);
    m.n_p = static_cast<int>(meta[1]);
    m.n_c = static_cast<int>(meta[2]);
    m.n_nut = static_cast<int>(meta[3]);
    m.nu = meta[4];
    m.L_r = read_dense(in, "rom_L");
    m.M_r = read_dense(in, "rom_M");
    m.B_r = read_dense(in, "rom_B");
    m.D_r = read_dense(in, "rom_D");
    m.Ghat_r = read_dense(in, "rom_Ghat");
    m.W_r = read_dense(in, "rom_W");
    m.N_r = read_dense(in, "rom_N");
    m.P_r = read_dense(in, "rom_P");
    m.G_r = read_dense(in, "rom_G");
    for (int i = 0; i < m.n_c; ++i) {
        const std::string k = std::to_string(i);
        m.A_r.push_back(read_dense(in, "rom_A_" + k));
        m.C_r.push_back(read_dense(in, "rom_C_" + k));
        m.K_r.push_back(read_dense(in, "rom_K_" + k));
    }
    for (int i = 0; i < m.n_nut; ++i) {
        const std::string k = std::to_string(i);
        m.Bt_r.push_back(read_dense(in, "rom_Bt_" + k));
        m.Dt_r.push_back(read_dense(in, "rom_Dt_" + k));
        m.Pt_r.push_back(read_dense(in, "rom_Pt_" + k));
        m.q_T.push_back(read_vec(in, "rom_qT_" + k));
        m.r_T.push_back(read_vec(in, "rom_rT_" + k));
        m.s_T.push_back(read_vec(in, "rom_sT_" + k));
    }
    m.q_M = read_vec(in, "rom_qM");
    m.q_C = read_vec(in, "rom_qC");
    m.q_D = read_vec(in, "rom_qD");
    m.r_C = read_vec(in, "rom_rC");
    m.r_D = read_vec(in, "rom_rD");
    m.s_C = read_vec(in, "rom_sC");
    m.s_D = read_vec(in, "rom_sD");
    m.t_b = read_vec(in, "rom_tb");
    return m;
}

}  // namespace romflux
