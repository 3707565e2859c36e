#pragma once

#include "romflux/closure.hpp"
#include "romflux/config.hpp"
#include "romflux/metrics.hpp"
#include "romflux/rom.hpp"

namespace romflux::pipeline {

enum class OnlineMode { Hybrid, OracleD, FrozenNu };

OnlineMode parse_online_mode(const std::string& name);
std::string online_mode_name(OnlineMode mode);

StructuredMesh case_mesh(const CaseConfig& cfg);
FomConfig fom_config(const CaseConfig& cfg);

/// Snapshot-cadence modal coefficients of the stored full-order trajectory.
struct ModalHistory {
    std::vector<double> times;
    DenseMatrix a;  // n_snapshots x n_u (cell velocity)
    DenseMatrix b;  // n_snapshots x n_p (pressure)
    DenseMatrix c;  // n_snapshots x n_c (face velocity)
    DenseMatrix d;  // n_snapshots x n_nut (eddy viscosity)
};

ModalHistory project_history(const SnapshotSet& snaps, const RomBases& bases);

RomBases load_case_bases(const CaseConfig& cfg, const StructuredMesh& mesh);

/// Concatenated [a | b] rows, the closure network's feature layout.
DenseMatrix feature_rows(const DenseMatrix& a, const DenseMatrix& b);

/// Run the online reduced model over the recorded horizon. The closure (or
/// the projected full-order viscosity for oracle-d and for the warm-up of
/// hybrid runs) is queried at snapshot cadence and held between snapshots.
RomTrajectory run_online_case(const CaseConfig& cfg, const ReducedModel& model,
                              const ModalHistory& oracle, OnlineMode mode,
                              const ClosureBundle* closure);

std::filesystem::path closure_path(const CaseConfig& cfg, const std::string& kind);

// Subcommand bodies; each validates its prerequisites and throws
// ValidationError with an actionable message when an input artifact is
// missing.
void cmd_fom_run(const CaseConfig& cfg);
void cmd_pod(const CaseConfig& cfg);
void cmd_rom_offline(const CaseConfig& cfg);
void cmd_closure_train(const CaseConfig& cfg, const std::string& closure_kind,
                       std::uint64_t seed);
void cmd_rom_online(const CaseConfig& cfg, OnlineMode mode, const std::string& closure_kind,
                    int modes_override);
void cmd_evaluate(const CaseConfig& cfg, OnlineMode mode);
void cmd_emit_plots(const CaseConfig& cfg);

}  // namespace romflux::pipeline
