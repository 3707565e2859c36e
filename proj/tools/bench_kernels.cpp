#include <benchmark/benchmark.h>

#include "romflux/fom.hpp"
#include "romflux/rng.hpp"
#include "romflux/rom.hpp"

namespace {

using namespace romflux;

SparseOperator cavity_laplacian(int n) {
    const StructuredMesh mesh = build_structured_mesh(n, n, n, 1.0, 1.0, 1.0);
    return assemble_ppe_operators(mesh).L_f;
}

std::vector<double> random_vector(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

void BM_spmv_serial(benchmark::State& state) {
    const SparseOperator op = cavity_laplacian(static_cast<int>(state.range(0)));
    const std::vector<double> x = random_vector(op.cols(), 7);
    std::vector<double> y(op.rows());
    for (auto _ : state) {
        serial::spmv(op, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_spmv_serial)->Arg(16)->Arg(32);

void BM_spmv_parallel(benchmark::State& state) {
    const SparseOperator op = cavity_laplacian(static_cast<int>(state.range(0)));
    const std::vector<double> x = random_vector(op.cols(), 7);
    std::vector<double> y(op.rows());
    for (auto _ : state) {
        op.apply(std::span<const double>(x), std::span<double>(y));
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_spmv_parallel)->Arg(16)->Arg(32);

void BM_blocked_dot(benchmark::State& state) {
    const std::vector<double> a = random_vector(static_cast<int>(state.range(0)), 11);
    const std::vector<double> b = random_vector(static_cast<int>(state.range(0)), 13);
    for (auto _ : state) {
        double d = blocked_dot(a, b);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_blocked_dot)->Arg(1 << 14)->Arg(1 << 18);

/// The online step cost depends only on the mode counts; running the same
/// reduced size built from two mesh resolutions should give matching times.
void BM_rom_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StructuredMesh mesh = build_structured_mesh(n, n, n, 1.0, 1.0, 1.0);
    const BoundaryPatchSet patches = classify_boundary(mesh, {1.0, 0.0, 0.0});
    const Operators ops = assemble_operators(mesh);
    const FaceVectorField u_b = boundary_velocity_field(mesh, patches);

    const int n_modes = 6, n_snapshots = 12;
    auto make_basis = [&](int dof, const std::vector<double>& w, const char* kind,
                          std::uint64_t seed) {
        DenseMatrix snaps(dof, n_snapshots);
        Rng rng(seed);
        for (double& x : snaps.data) x = rng.uniform(-1.0, 1.0);
        return pod_from_snapshots(snaps, n_modes, w, kind);
    };
    RomBases bases;
    bases.phi = make_basis(3 * mesh.n_cells(), cell_weights(mesh, 3), "cell-vector", 3);
    bases.chi = make_basis(mesh.n_cells(), cell_weights(mesh, 1), "cell-scalar", 5);
    bases.psi = make_basis(3 * mesh.n_faces(), face_weights(mesh), "face-vector", 7);
    bases.xi = make_basis(mesh.n_cells(), cell_weights(mesh, 1), "cell-scalar", 9);
    const ReducedModel model = assemble_reduced_model(mesh, ops, u_b, bases, 1e-3);
    const OnlineRom rom(model, 1e-4);

    RomState s;
    s.a = random_vector(n_modes, 21);
    s.b = random_vector(n_modes, 23);
    s.c = random_vector(n_modes, 25);
    s.d.assign(n_modes, 0.0);
    const std::vector<double> d = random_vector(n_modes, 27);
    for (double& x : s.a) x *= 0.01;  // keep the quadratic term stable
    for (auto _ : state) {
        RomState next = rom.step(s, d);
        benchmark::DoNotOptimize(next.a.data());
    }
}
BENCHMARK(BM_rom_step)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
