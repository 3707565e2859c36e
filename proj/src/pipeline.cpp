#include "romflux/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace romflux::pipeline {

OnlineMode parse_online_mode(const std::string& name) {
    if (name == "hybrid") return OnlineMode::Hybrid;
    if (name == "oracle-d") return OnlineMode::OracleD;
    if (name == "frozen-nu") return OnlineMode::FrozenNu;
    throw ValidationError("unknown online mode '" + name +
                          "', expected hybrid, oracle-d, or frozen-nu");
}

std::string online_mode_name(OnlineMode mode) {
    switch (mode) {
        case OnlineMode::Hybrid: return "hybrid";
        case OnlineMode::OracleD: return "oracle-d";
        case OnlineMode::FrozenNu: return "frozen-nu";
    }
    return "unknown";
}

StructuredMesh case_mesh(const CaseConfig& cfg) {
    return build_structured_mesh(cfg.nx, cfg.ny, cfg.nz, cfg.lx, cfg.ly, cfg.lz);
}

FomConfig fom_config(const CaseConfig& cfg) {
    FomConfig f;
    f.nu = cfg.nu;
    f.C_s = cfg.c_s;
    f.dt = cfg.dt;
    f.n_steps = cfg.n_steps;
    f.spinup_steps = cfg.spinup_steps;
    f.snapshot_stride = cfg.snapshot_stride;
    f.ref_cell = cfg.ref_cell;
    f.p_ref = cfg.p_ref;
    f.ppe_tol = cfg.ppe_tol;
    return f;
}

namespace {

/// Project each column of a snapshot series onto a basis; rows are times.
DenseMatrix project_series(const FieldSeries& series, const PodBasis& basis) {
    DenseMatrix out(static_cast<int>(series.columns.size()), basis.n_modes());
    for (int k = 0; k < out.rows; ++k) {
        const std::vector<double> c = project_coefficients(series.columns[k], basis);
        for (int j = 0; j < out.cols; ++j) out(k, j) = c[j];
    }
    return out;
}

std::vector<double> row_of(const DenseMatrix& m, int r, int n) {
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = m(r, j);
    return v;
}

void require_artifact(const SnapshotSet& snaps, const std::string& name,
                      const std::string& producer) {
    if (!snaps.has(name))
        throw ValidationError("missing artifact '" + name + "' in " +
                              snaps.dir().string() + "; run `romflux " + producer +
                              "` first");
}

}  // namespace

ModalHistory project_history(const SnapshotSet& snaps, const RomBases& bases) {
    require_artifact(snaps, "u_p", "fom-run");
    const FieldSeries u_p = snaps.read_series("u_p");
    const FieldSeries p_p = snaps.read_series("p_p");
    const FieldSeries u_f = snaps.read_series("u_f");
    const FieldSeries nu_t = snaps.read_series("nu_t");
    require(u_p.times.size() == p_p.times.size() && u_p.times.size() == u_f.times.size() &&
                u_p.times.size() == nu_t.times.size(),
            "project_history: snapshot families have different lengths");
    ModalHistory h;
    h.times = u_p.times;
    h.a = project_series(u_p, bases.phi);
    h.b = project_series(p_p, bases.chi);
    h.c = project_series(u_f, bases.psi);
    h.d = project_series(nu_t, bases.xi);
    return h;
}

RomBases load_case_bases(const CaseConfig& cfg, const StructuredMesh& mesh) {
    SnapshotSet snaps(cfg.snapshots_dir());
    require_artifact(snaps, "phi_modes", "pod");
    RomBases bases;
    bases.phi = load_basis(snaps, "phi", cell_weights(mesh, 3), "cell-vector");
    bases.chi = load_basis(snaps, "chi", cell_weights(mesh, 1), "cell-scalar");
    bases.psi = load_basis(snaps, "psi", face_weights(mesh), "face-vector");
    bases.xi = load_basis(snaps, "xi", cell_weights(mesh, 1), "cell-scalar");
    return bases;
}

DenseMatrix feature_rows(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows == b.rows, "feature_rows: row count mismatch");
    DenseMatrix f(a.rows, a.cols + b.cols);
    for (int r = 0; r < a.rows; ++r) {
        for (int j = 0; j < a.cols; ++j) f(r, j) = a(r, j);
        for (int j = 0; j < b.cols; ++j) f(r, a.cols + j) = b(r, j);
    }
    return f;
}

RomTrajectory run_online_case(const CaseConfig& cfg, const ReducedModel& model,
                              const ModalHistory& oracle, OnlineMode mode,
                              const ClosureBundle* closure) {
    require(oracle.a.rows >= 1, "run_online_case: empty modal history");
    require(oracle.a.cols >= model.n_u && oracle.b.cols >= model.n_p &&
                oracle.c.cols >= model.n_c && oracle.d.cols >= model.n_nut,
            "run_online_case: modal history has fewer modes than the model");
    const int stride = cfg.snapshot_stride;
    const int n_steps = cfg.n_steps;
    const int n_snaps = oracle.a.rows;

    RomState init;
    init.a = row_of(oracle.a, 0, model.n_u);
    init.b = row_of(oracle.b, 0, model.n_p);
    init.c = row_of(oracle.c, 0, model.n_c);
    init.d = row_of(oracle.d, 0, model.n_nut);
    init.time = oracle.times.empty() ? 0.0 : oracle.times.front();

    auto oracle_d = [&](int step) {
        const int idx = std::min(step / stride, n_snaps - 1);
        return row_of(oracle.d, idx, model.n_nut);
    };

    if (mode == OnlineMode::FrozenNu) {
        DProvider zeros = [&](int, const RomState&) {
            return std::vector<double>(static_cast<size_t>(model.n_nut), 0.0);
        };
        return run_rom_online(model, init, cfg.dt, n_steps, zeros);
    }
    if (mode == OnlineMode::OracleD) {
        DProvider provider = [&](int step, const RomState&) { return oracle_d(step); };
        return run_rom_online(model, init, cfg.dt, n_steps, provider);
    }

    // Hybrid: the network consumes the reduced model's own (a, b) history at
    // snapshot cadence; its prediction is held until the next snapshot time.
    require(closure != nullptr, "run_online_case: hybrid mode needs a trained closure");
    const int lookback = closure->model->lookback();
    require(closure->model->input_dim() == model.n_u + model.n_p,
            "run_online_case: closure input size does not match the model");
    require(closure->model->output_dim() == model.n_nut,
            "run_online_case: closure output size does not match the model");

    std::vector<std::vector<double>> history;  // snapshot-cadence feature rows
    std::vector<double> current_d = init.d;
    DProvider provider = [&](int step, const RomState& state) {
        if (step % stride == 0) {
            std::vector<double> row = state.a;
            row.insert(row.end(), state.b.begin(), state.b.end());
            history.push_back(std::move(row));
            if (static_cast<int>(history.size()) >= lookback) {
                DenseMatrix window(lookback, model.n_u + model.n_p);
                const size_t first = history.size() - lookback;
                for (int t = 0; t < lookback; ++t)
                    for (int j = 0; j < window.cols; ++j)
                        window(t, j) = history[first + t][j];
                current_d = closure->predict(window);
            } else {
                current_d = oracle_d(step);  // warm-up from the recorded data
            }
        }
        return current_d;
    };
    return run_rom_online(model, init, cfg.dt, n_steps, provider);
}

std::filesystem::path closure_path(const CaseConfig& cfg, const std::string& kind) {
    return cfg.case_dir / ("closure_" + kind + ".model");
}

void cmd_fom_run(const CaseConfig& cfg) {
    StructuredMesh mesh = case_mesh(cfg);
    const BoundaryPatchSet patches = classify_boundary(mesh, cfg.lid_velocity);
    // A fresh run replaces the snapshot store: the format is append-only, so
    // stale records cannot be overwritten in place.
    std::filesystem::remove_all(cfg.snapshots_dir());
    SnapshotSet out(cfg.snapshots_dir());
    run_fom(mesh, patches, fom_config(cfg), &out);
}

void cmd_pod(const CaseConfig& cfg) {
    const StructuredMesh mesh = case_mesh(cfg);
    SnapshotSet snaps(cfg.snapshots_dir());
    require_artifact(snaps, "u_p", "fom-run");

    struct Family {
        const char* series;
        const char* basis;
        std::vector<double> weights;
        std::string kind;
        int modes;
    };
    const std::vector<Family> families = {
        {"u_p", "phi", cell_weights(mesh, 3), "cell-vector", cfg.modes_u},
        {"p_p", "chi", cell_weights(mesh, 1), "cell-scalar", cfg.modes_p},
        {"u_f", "psi", face_weights(mesh), "face-vector", cfg.modes_f},
        {"nu_t", "xi", cell_weights(mesh, 1), "cell-scalar", cfg.modes_nut},
    };
    for (const Family& f : families) {
        const DenseMatrix snapshots = series_to_matrix(snaps.read_series(f.series));
        const PodBasis basis = pod_from_snapshots(snapshots, f.modes, f.weights, f.kind);
        save_basis(snaps, f.basis, basis);
        std::printf("pod: %s -> %d modes, leading eigenvalue %.6e\n", f.basis,
                    basis.n_modes(), basis.eigenvalues.empty() ? 0.0 : basis.eigenvalues[0]);
    }
}

void cmd_rom_offline(const CaseConfig& cfg) {
    StructuredMesh mesh = case_mesh(cfg);
    const BoundaryPatchSet patches = classify_boundary(mesh, cfg.lid_velocity);
    const RomBases bases = load_case_bases(cfg, mesh);
    const Operators ops = assemble_operators(mesh);
    const FaceVectorField u_b = boundary_velocity_field(mesh, patches);
    const ReducedModel model = assemble_reduced_model(mesh, ops, u_b, bases, cfg.nu);
    SnapshotSet snaps(cfg.snapshots_dir());
    save_reduced_model(snaps, model);
    std::printf("rom-offline: reduced model with %d/%d/%d/%d modes saved\n", model.n_u,
                model.n_p, model.n_c, model.n_nut);
}

void cmd_closure_train(const CaseConfig& cfg, const std::string& closure_kind,
                       std::uint64_t seed) {
    require(closure_kind == "mlp" || closure_kind == "lstm",
            "closure-train: closure must be 'mlp' or 'lstm'");
    const StructuredMesh mesh = case_mesh(cfg);
    const RomBases bases = load_case_bases(cfg, mesh);
    SnapshotSet snaps(cfg.snapshots_dir());
    const ModalHistory hist = project_history(snaps, bases);

    const DenseMatrix features = feature_rows(hist.a, hist.b);
    const DenseMatrix& targets = hist.d;
    const int lookback = closure_kind == "lstm" ? cfg.lookback : 1;
    require(features.rows >= lookback + 1,
            "closure-train: not enough snapshots for the lookback window");

    // Scalers see only rows that appear in training windows so the
    // validation tail cannot leak into the normalization.
    const int n_windows = features.rows - lookback + 1;
    int n_val = static_cast<int>(std::lround(cfg.val_fraction * n_windows));
    if (cfg.val_fraction > 0.0 && n_val < 1) n_val = 1;
    if (n_val > n_windows - 1) n_val = n_windows - 1;
    const int n_fit_rows = (n_windows - n_val) + lookback - 1;
    DenseMatrix fit_features(n_fit_rows, features.cols);
    DenseMatrix fit_targets(n_fit_rows, targets.cols);
    for (int r = 0; r < n_fit_rows; ++r) {
        for (int j = 0; j < features.cols; ++j) fit_features(r, j) = features(r, j);
        for (int j = 0; j < targets.cols; ++j) fit_targets(r, j) = targets(r, j);
    }

    ClosureBundle bundle;
    bundle.input_scaler.fit(fit_features);
    bundle.target_scaler.fit(fit_targets);
    const WindowDataset data = build_windows(bundle.input_scaler.transform_all(features),
                                             bundle.target_scaler.transform_all(targets),
                                             lookback);

    if (closure_kind == "lstm")
        bundle.model = make_lstm(features.cols, targets.cols, lookback, seed);
    else
        bundle.model = make_mlp(features.cols, targets.cols, seed, cfg.dropout);

    TrainConfig tc;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.learning_rate = cfg.learning_rate;
    tc.val_fraction = cfg.val_fraction;
    tc.seed = seed;
    const std::vector<EpochStats> history = train_closure(*bundle.model, data, tc);

    save_closure(bundle, closure_path(cfg, closure_kind));
    std::filesystem::create_directories(cfg.results_dir());
    std::vector<double> epochs, train_loss, val_loss;
    for (const EpochStats& e : history) {
        epochs.push_back(e.epoch);
        train_loss.push_back(e.train_loss);
        val_loss.push_back(e.val_loss);
    }
    write_csv(cfg.results_dir() / ("training_history_" + closure_kind + ".csv"),
              {"epoch", "train_loss", "val_loss"}, {epochs, train_loss, val_loss});
    std::printf("closure-train: %s final train %.6e val %.6e\n", closure_kind.c_str(),
                history.back().train_loss, history.back().val_loss);
}

namespace {

ReducedModel load_case_model(const CaseConfig& cfg, const SnapshotSet& snaps,
                             int modes_override) {
    require_artifact(snaps, "rom_meta", "rom-offline");
    ReducedModel model = load_reduced_model(snaps);
    if (modes_override > 0) {
        require(modes_override <= model.n_u && modes_override <= model.n_p &&
                    modes_override <= model.n_c,
                "requested mode count exceeds the stored reduced model");
        model = model.truncated(modes_override, modes_override, modes_override,
                                std::min(modes_override, model.n_nut));
    }
    return model;
}

void store_trajectory(SnapshotSet& snaps, const std::string& prefix,
                      const RomTrajectory& traj) {
    auto flat = [](const std::vector<std::vector<double>>& rows) {
        std::vector<double> out;
        for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
        return out;
    };
    const int n = static_cast<int>(traj.times.size());
    snaps.write_matrix(prefix + "_times", 1, n, traj.times);
    snaps.write_matrix(prefix + "_a", n, static_cast<int>(traj.a[0].size()), flat(traj.a));
    snaps.write_matrix(prefix + "_b", n, static_cast<int>(traj.b[0].size()), flat(traj.b));
    snaps.write_matrix(prefix + "_c", n, static_cast<int>(traj.c[0].size()), flat(traj.c));
    if (!traj.d[0].empty())
        snaps.write_matrix(prefix + "_d", n, static_cast<int>(traj.d[0].size()),
                           flat(traj.d));
}

RomTrajectory load_trajectory(const SnapshotSet& snaps, const std::string& prefix) {
    RomTrajectory traj;
    traj.times = snaps.read_record(snaps.find_matrix(prefix + "_times"));
    auto unflat = [&](const std::string& name, std::vector<std::vector<double>>& rows,
                      bool required) {
        if (!required && !snaps.has(name)) {
            rows.assign(traj.times.size(), {});
            return;
        }
        const SnapshotRecord& rec = snaps.find_matrix(name);
        const std::vector<double> data = snaps.read_record(rec);
        rows.resize(rec.rows);
        for (int r = 0; r < rec.rows; ++r)
            rows[r].assign(data.begin() + static_cast<long>(r) * rec.cols,
                           data.begin() + static_cast<long>(r + 1) * rec.cols);
    };
    unflat(prefix + "_a", traj.a, true);
    unflat(prefix + "_b", traj.b, true);
    unflat(prefix + "_c", traj.c, true);
    unflat(prefix + "_d", traj.d, false);
    return traj;
}

}  // namespace

void cmd_rom_online(const CaseConfig& cfg, OnlineMode mode, const std::string& closure_kind,
                    int modes_override) {
    const StructuredMesh mesh = case_mesh(cfg);
    const RomBases bases = load_case_bases(cfg, mesh);
    SnapshotSet snaps(cfg.snapshots_dir());
    const ReducedModel model = load_case_model(cfg, snaps, modes_override);
    const ModalHistory hist = project_history(snaps, bases);

    ClosureBundle bundle;
    const ClosureBundle* closure = nullptr;
    if (mode == OnlineMode::Hybrid) {
        const std::filesystem::path path = closure_path(cfg, closure_kind);
        if (!std::filesystem::exists(path))
            throw ValidationError("missing closure model " + path.string() +
                                  "; run `romflux closure-train` first");
        bundle = load_closure(path);
        closure = &bundle;
    }
    const RomTrajectory traj = run_online_case(cfg, model, hist, mode, closure);
    store_trajectory(snaps, "traj_" + online_mode_name(mode), traj);
    std::printf("rom-online: %s advanced %d steps with %d/%d/%d/%d modes\n",
                online_mode_name(mode).c_str(), cfg.n_steps, model.n_u, model.n_p,
                model.n_c, model.n_nut);
}

void cmd_evaluate(const CaseConfig& cfg, OnlineMode mode) {
    StructuredMesh mesh = case_mesh(cfg);
    const BoundaryPatchSet patches = classify_boundary(mesh, cfg.lid_velocity);
    const FaceVectorField u_b = boundary_velocity_field(mesh, patches);
    const RomBases bases = load_case_bases(cfg, mesh);
    SnapshotSet snaps(cfg.snapshots_dir());
    const std::string prefix = "traj_" + online_mode_name(mode);
    if (!snaps.has(prefix + "_times"))
        throw ValidationError("missing trajectory '" + prefix + "' in " +
                              snaps.dir().string() + "; run `romflux rom-online` first");
    const RomTrajectory traj = load_trajectory(snaps, prefix);

    const FieldSeries u_fom = snaps.read_series("u_p");
    const FieldSeries p_fom = snaps.read_series("p_p");
    const FieldSeries nut_fom = snaps.read_series("nu_t");
    const int n_snaps = static_cast<int>(u_fom.times.size());
    const int stride = cfg.snapshot_stride;
    require((n_snaps - 1) * stride < static_cast<int>(traj.times.size()),
            "evaluate: trajectory shorter than the snapshot horizon");

    const int n_u = static_cast<int>(traj.a[0].size());
    const int n_p = static_cast<int>(traj.b[0].size());
    const int n_nut = traj.d.empty() ? 0 : static_cast<int>(traj.d[0].size());
    const PodBasis phi = bases.phi.truncated(n_u);
    const PodBasis chi = bases.chi.truncated(n_p);
    const std::vector<double> wv = cell_weights(mesh, 3);
    const std::vector<double> ws = cell_weights(mesh, 1);

    std::vector<std::vector<double>> u_rom(n_snaps), p_rom(n_snaps), nut_rom(n_snaps);
    std::vector<std::vector<double>> p_ref(n_snaps), nut_ref(n_snaps);
    std::vector<double> e_fom(n_snaps), e_rom(n_snaps), z_fom(n_snaps), z_rom(n_snaps);
    for (int k = 0; k < n_snaps; ++k) {
        const int r = k * stride;
        u_rom[k] = reconstruct_field(phi, traj.a[r]);
        p_rom[k] = reconstruct_field(chi, traj.b[r]);
        // Pressure carries an arbitrary constant; compare in the zero-mean
        // gauge on both sides.
        p_ref[k] = p_fom.columns[k];
        remove_weighted_mean(p_ref[k], ws);
        remove_weighted_mean(p_rom[k], ws);
        if (n_nut > 0)
            nut_rom[k] = reconstruct_field(bases.xi.truncated(n_nut), traj.d[r]);
        else
            nut_rom[k].assign(static_cast<size_t>(mesh.n_cells()), 0.0);
        nut_ref[k] = nut_fom.columns[k];

        const CellVectorField uf{u_fom.columns[k]};
        const CellVectorField ur{u_rom[k]};
        e_fom[k] = kinetic_energy(mesh, uf);
        e_rom[k] = kinetic_energy(mesh, ur);
        z_fom[k] = enstrophy(mesh, uf, u_b);
        z_rom[k] = enstrophy(mesh, ur, u_b);
    }

    const ErrorSeries err_u = relative_error_series(u_fom.times, u_fom.columns, u_rom, wv);
    const ErrorSeries err_p = relative_error_series(u_fom.times, p_ref, p_rom, ws);
    const ErrorSeries err_nut =
        relative_error_series(u_fom.times, nut_ref, nut_rom, ws);

    std::filesystem::create_directories(cfg.results_dir());
    auto dump = [&](const std::string& name, const ErrorSeries& e) {
        std::vector<double> defined(e.defined.begin(), e.defined.end());
        write_csv(cfg.results_dir() / name, {"time", "error", "defined"},
                  {e.times, e.values, defined});
    };
    dump("error_time_u.csv", err_u);
    dump("error_time_p.csv", err_p);
    dump("error_time_nut.csv", err_nut);
    write_csv(cfg.results_dir() / "energy.csv", {"time", "fom", "rom"},
              {u_fom.times, e_fom, e_rom});
    write_csv(cfg.results_dir() / "enstrophy.csv", {"time", "fom", "rom"},
              {u_fom.times, z_fom, z_rom});

    auto scalar_series = [](const std::vector<double>& v) {
        std::vector<std::vector<double>> cols;
        for (double x : v) cols.push_back({x});
        return cols;
    };
    const std::vector<double> unit_weight{1.0};
    const double energy_err =
        relative_error_spacetime(scalar_series(e_fom), scalar_series(e_rom), unit_weight);
    const double enstrophy_err =
        relative_error_spacetime(scalar_series(z_fom), scalar_series(z_rom), unit_weight);

    std::ofstream summary(cfg.results_dir() / "summary.csv");
    if (!summary) throw ValidationError("evaluate: cannot write summary.csv");
    char buf[64];
    auto row = [&](const std::string& metric, double value) {
        std::snprintf(buf, sizeof buf, "%.12g", value);
        summary << metric << "," << buf << "\n";
    };
    summary << "metric,value\n";
    summary << "mode," << online_mode_name(mode) << "\n";
    row("modes_u", n_u);
    row("modes_p", n_p);
    row("modes_nut", n_nut);
    row("error_time_u_mean", time_mean(err_u));
    row("error_time_p_mean", time_mean(err_p));
    row("error_time_nut_mean", time_mean(err_nut));
    row("error_spacetime_u", relative_error_spacetime(u_fom.columns, u_rom, wv));
    row("error_spacetime_p", relative_error_spacetime(p_ref, p_rom, ws));
    row("error_spacetime_nut", relative_error_spacetime(nut_ref, nut_rom, ws));
    row("energy_error", energy_err);
    row("enstrophy_error", enstrophy_err);
    std::printf("evaluate: %s mean errors u %.4e p %.4e nut %.4e\n",
                online_mode_name(mode).c_str(), time_mean(err_u), time_mean(err_p),
                time_mean(err_nut));
}

void cmd_emit_plots(const CaseConfig& cfg) {
    const StructuredMesh mesh = case_mesh(cfg);
    const RomBases bases = load_case_bases(cfg, mesh);
    SnapshotSet snaps(cfg.snapshots_dir());
    const ReducedModel full = load_case_model(cfg, snaps, 0);
    const ModalHistory hist = project_history(snaps, bases);

    const FieldSeries u_fom = snaps.read_series("u_p");
    const FieldSeries p_fom = snaps.read_series("p_p");
    const FieldSeries nut_fom = snaps.read_series("nu_t");
    const std::vector<double> wv = cell_weights(mesh, 3);
    const std::vector<double> ws = cell_weights(mesh, 1);
    const int stride = cfg.snapshot_stride;
    const int n_snaps = static_cast<int>(u_fom.times.size());

    std::vector<std::vector<double>> p_ref(n_snaps);
    for (int k = 0; k < n_snaps; ++k) {
        p_ref[k] = p_fom.columns[k];
        remove_weighted_mean(p_ref[k], ws);
    }

    const int max_modes = std::min({full.n_u, full.n_p, full.n_c});
    std::vector<double> mode_counts, err_u, err_p, err_nut;
    for (int n = 2; n <= max_modes; ++n) {
        const ReducedModel model =
            full.truncated(n, n, n, std::min(n, full.n_nut));
        const RomTrajectory traj =
            run_online_case(cfg, model, hist, OnlineMode::OracleD, nullptr);
        const PodBasis phi = bases.phi.truncated(n);
        const PodBasis chi = bases.chi.truncated(n);
        const PodBasis xi = bases.xi.truncated(model.n_nut);
        std::vector<std::vector<double>> u_rom(n_snaps), p_rom(n_snaps), nut_rom(n_snaps);
        for (int k = 0; k < n_snaps; ++k) {
            const int r = k * stride;
            u_rom[k] = reconstruct_field(phi, traj.a[r]);
            p_rom[k] = reconstruct_field(chi, traj.b[r]);
            remove_weighted_mean(p_rom[k], ws);
            nut_rom[k] = reconstruct_field(xi, traj.d[r]);
        }
        mode_counts.push_back(n);
        err_u.push_back(relative_error_spacetime(u_fom.columns, u_rom, wv));
        err_p.push_back(relative_error_spacetime(p_ref, p_rom, ws));
        err_nut.push_back(relative_error_spacetime(nut_fom.columns, nut_rom, ws));
        std::printf("emit-plots: %d modes, errors u %.4e p %.4e nut %.4e\n", n,
                    err_u.back(), err_p.back(), err_nut.back());
    }

    std::filesystem::create_directories(cfg.results_dir());
    write_csv(cfg.results_dir() / "error_modes_u.csv", {"modes", "error"},
              {mode_counts, err_u});
    write_csv(cfg.results_dir() / "error_modes_p.csv", {"modes", "error"},
              {mode_counts, err_p});
    write_csv(cfg.results_dir() / "error_modes_nut.csv", {"modes", "error"},
              {mode_counts, err_nut});
}

}  // namespace romflux::pipeline
