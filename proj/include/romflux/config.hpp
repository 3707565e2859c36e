#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "romflux/core.hpp"

namespace romflux {

/// Case description parsed from a sectioned key-value file. Unknown sections,
/// unknown keys, duplicates, and malformed lines are reported with their line
/// number.
struct CaseConfig {
    // [mesh]
    int nx = 0, ny = 0, nz = 0;
    double lx = 1.0, ly = 1.0, lz = 1.0;

    // [physics]
    double nu = 0.0;
    double c_s = 0.2;
    Vec3 lid_velocity{1.0, 0.0, 0.0};

    // [time]
    double dt = 0.0;
    int n_steps = 0;
    int spinup_steps = 0;
    int snapshot_stride = 1;

    // [rom]
    int modes_u = 10, modes_p = 10, modes_f = 10, modes_nut = 10;
    double ppe_tol = 1e-10;
    int ref_cell = 0;
    double p_ref = 0.0;

    // [closure]
    std::string closure_model = "lstm";
    int lookback = 15;
    int epochs = 1200;
    int batch_size = 64;
    double learning_rate = 2e-5;
    double dropout = 0.2;
    double val_fraction = 0.2;
    std::uint64_t seed = 1;

    // [paths] — defaults to the directory containing the config file.
    std::filesystem::path case_dir;

    std::filesystem::path snapshots_dir() const { return case_dir / "snapshots"; }
    std::filesystem::path results_dir() const { return case_dir / "results"; }
};

CaseConfig load_case_config(const std::filesystem::path& path);

}  // namespace romflux
