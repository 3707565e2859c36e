#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "romflux/dense.hpp"
#include "romflux/operators.hpp"
#include "romflux/pcg.hpp"
#include "romflux/rng.hpp"

using namespace romflux;

namespace {

/// Dense oracle: pin the reference cell, solve the regularized system by LU,
/// then verify the PCG answer against it.
std::vector<double> dense_neumann_solve(const SparseOperator& L,
                                        std::vector<double> rhs, int ref_cell,
                                        double p_ref) {
    const int n = L.rows();
    double mean = 0.0;
    for (double v : rhs) mean += v;
    mean /= n;
    for (double& v : rhs) v -= mean;

    DenseMatrix a(n, n);
    const auto dense = L.to_dense();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = dense[r][c];
    // Replace the reference row by the pin equation.
    for (int c = 0; c < n; ++c) a(ref_cell, c) = c == ref_cell ? 1.0 : 0.0;
    rhs[ref_cell] = 0.0;
    std::vector<double> p = LuFactorization(a).solve(rhs);
    const double shift = p_ref - p[ref_cell];
    for (double& v : p) v += shift;
    return p;
}

}  // namespace

TEST_CASE("solution matches the dense pinned-system oracle") {
    const StructuredMesh mesh = build_structured_mesh(4, 3, 3, 1.0, 0.7, 0.9);
    const SparseOperator L = assemble_ppe_operators(mesh).L_f;
    Rng rng(5);
    std::vector<double> rhs(mesh.n_cells());
    for (double& v : rhs) v = rng.uniform(-1.0, 1.0);

    const PpeResult got = solve_ppe(L, rhs, 0, 0.25, 1e-13, 10 * mesh.n_cells());
    const std::vector<double> want = dense_neumann_solve(L, rhs, 0, 0.25);
    for (int i = 0; i < mesh.n_cells(); ++i)
        CHECK(got.p[i] == doctest::Approx(want[i]).epsilon(1e-9));
    CHECK(got.p[0] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("zero right-hand side returns the reference constant") {
    const StructuredMesh mesh = build_structured_mesh(3, 3, 3, 1.0, 1.0, 1.0);
    const SparseOperator L = assemble_ppe_operators(mesh).L_f;
    const PpeResult r =
        solve_ppe(L, std::vector<double>(mesh.n_cells(), 0.0), 2, -1.5, 1e-12, 100);
    for (double v : r.p) CHECK(v == doctest::Approx(-1.5).epsilon(1e-13));
}

TEST_CASE("incompatible constant component is projected out") {
    const StructuredMesh mesh = build_structured_mesh(3, 3, 3, 1.0, 1.0, 1.0);
    const SparseOperator L = assemble_ppe_operators(mesh).L_f;
    // rhs = c (pure constant) is incompatible; the solver must see zero.
    const PpeResult r =
        solve_ppe(L, std::vector<double>(mesh.n_cells(), 3.0), 0, 0.0, 1e-12, 100);
    for (double v : r.p) CHECK(v == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("warm start converges in fewer iterations") {
    const StructuredMesh mesh = build_structured_mesh(6, 6, 6, 1.0, 1.0, 1.0);
    const SparseOperator L = assemble_ppe_operators(mesh).L_f;
    Rng rng(17);
    std::vector<double> rhs(mesh.n_cells());
    for (double& v : rhs) v = rng.uniform(-1.0, 1.0);

    const PpeResult cold = solve_ppe(L, rhs, 0, 0.0, 1e-12, 10 * mesh.n_cells());
    const PpeResult warm =
        solve_ppe(L, rhs, 0, 0.0, 1e-12, 10 * mesh.n_cells(), &cold.p);
    CHECK(warm.iterations < cold.iterations);
    for (int i = 0; i < mesh.n_cells(); ++i)
        CHECK(warm.p[i] == doctest::Approx(cold.p[i]).epsilon(1e-8));
}

TEST_CASE("iteration cap raises a numerical error") {
    const StructuredMesh mesh = build_structured_mesh(6, 6, 6, 1.0, 1.0, 1.0);
    const SparseOperator L = assemble_ppe_operators(mesh).L_f;
    Rng rng(23);
    std::vector<double> rhs(mesh.n_cells());
    for (double& v : rhs) v = rng.uniform(-1.0, 1.0);
    CHECK_THROWS_AS(solve_ppe(L, rhs, 0, 0.0, 1e-14, 2), NumericalError);
}
