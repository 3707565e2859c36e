#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "romflux/fields.hpp"
#include "romflux/operators.hpp"
#include "romflux/rng.hpp"

using namespace romflux;

namespace {

std::vector<double> random_vec(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

StructuredMesh small_mesh() { return build_structured_mesh(3, 2, 2, 1.2, 0.8, 0.5); }
StructuredMesh cube_mesh() { return build_structured_mesh(4, 4, 4, 1.0, 1.0, 1.0); }

/// True when the cell and all neighbors within `ring` cells stay inside.
bool is_interior(const StructuredMesh& m, int c, int ring) {
    const int i = c % m.nx, j = (c / m.nx) % m.ny, k = c / (m.nx * m.ny);
    return i >= ring && i < m.nx - ring && j >= ring && j < m.ny - ring && k >= ring &&
           k < m.nz - ring;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("divergence matches a direct face-loop oracle") {
    for (const StructuredMesh& m : {small_mesh(), cube_mesh()}) {
        const SparseOperator M = assemble_divergence(m);
        const std::vector<double> uf = random_vec(3 * m.n_faces(), 42);
        const std::vector<double> got = M.apply(uf);

        std::vector<double> want(m.n_cells(), 0.0);
        const int fi = m.n_interior_faces();
        for (int f = 0; f < fi; ++f) {
            const Vec3 u{uf[3 * f], uf[3 * f + 1], uf[3 * f + 2]};
            const double phi = m.face_areas[f].dot(u);
            want[m.face_owner[f]] += phi;
            want[m.face_neighbor[f]] -= phi;
        }
        for (int b = 0; b < m.n_boundary_faces(); ++b) {
            const int g = fi + b;
            const Vec3 u{uf[3 * g], uf[3 * g + 1], uf[3 * g + 2]};
            want[m.boundary_faces[b].owner] += m.boundary_faces[b].area.dot(u);
        }
        CHECK(max_abs_diff(got, want) < 1e-14);
    }
}

TEST_CASE("cell-to-cell divergence equals divergence of interpolated faces") {
    for (const StructuredMesh& m : {small_mesh(), cube_mesh()}) {
        const SparseOperator M = assemble_divergence(m);
        const SparseOperator I_pf = assemble_interpolation(m).I_pf;
        const SparseOperator M_p = M.multiply(I_pf);
        const std::vector<double> up = random_vec(3 * m.n_cells(), 7);

        // Independent oracle: midpoint flux on interior faces only.
        std::vector<double> want(m.n_cells(), 0.0);
        for (int f = 0; f < m.n_interior_faces(); ++f) {
            const int p = m.face_owner[f], n = m.face_neighbor[f];
            double phi = 0.0;
            for (int c = 0; c < 3; ++c)
                phi += m.face_areas[f][c] * 0.5 * (up[3 * p + c] + up[3 * n + c]);
            want[p] += phi;
            want[n] -= phi;
        }
        CHECK(max_abs_diff(M_p.apply(up), want) < 1e-14);
    }
}

TEST_CASE("face gradient: row formula and the identity M G_f = L_f") {
    for (const StructuredMesh& m : {small_mesh(), cube_mesh()}) {
        const SparseOperator G_f = assemble_gradient_Gf(m);
        const std::vector<double> p = random_vec(m.n_cells(), 11);
        const std::vector<double> g = G_f.apply(p);
        for (int f = 0; f < m.n_interior_faces(); ++f) {
            const Vec3 s = m.face_areas[f];
            const double dmag = m.d_vectors[f].norm();
            const double jump = (p[m.face_neighbor[f]] - p[m.face_owner[f]]) / dmag;
            for (int c = 0; c < 3; ++c)
                CHECK(g[3 * f + c] ==
                      doctest::Approx((s[c] / s.norm()) * jump).epsilon(1e-13));
        }
        // Boundary rows vanish.
        for (int b = 0; b < m.n_boundary_faces(); ++b)
            for (int c = 0; c < 3; ++c)
                CHECK(g[3 * (m.n_interior_faces() + b) + c] == 0.0);

        const SparseOperator M = assemble_divergence(m);
        const SparseOperator L_f = assemble_ppe_operators(m).L_f;
        const auto prod = M.multiply(G_f).to_dense();
        const auto want = L_f.to_dense();
        double worst = 0.0;
        for (int r = 0; r < m.n_cells(); ++r)
            for (int c = 0; c < m.n_cells(); ++c)
                worst = std::max(worst, std::abs(prod[r][c] - want[r][c]));
        CHECK(worst < 1e-14);
    }
}

TEST_CASE("cell gradient annihilates constants and is exact on linear fields") {
    const StructuredMesh m = cube_mesh();
    const SparseOperator G_p = assemble_gradient_Gp(m);
    const std::vector<double> ones(m.n_cells(), 1.0);
    for (double v : G_p.apply(ones)) CHECK(std::abs(v) < 1e-13);

    const Vec3 alpha{0.7, -0.3, 1.1};
    std::vector<double> p(m.n_cells());
    for (int c = 0; c < m.n_cells(); ++c) p[c] = alpha.dot(m.cell_center(c));
    const std::vector<double> g = G_p.apply(p);
    for (int c = 0; c < m.n_cells(); ++c) {
        if (!is_interior(m, c, 1)) continue;
        for (int k = 0; k < 3; ++k)
            CHECK(g[3 * c + k] == doctest::Approx(alpha[k]).epsilon(1e-12));
    }
}

TEST_CASE("variable-viscosity Laplacian matches a face-loop oracle") {
    for (const StructuredMesh& m : {small_mesh(), cube_mesh()}) {
        std::vector<double> nu = random_vec(m.n_faces(), 19);
        for (double& x : nu) x = std::abs(x) + 0.1;
        const SparseOperator D = assemble_laplacian(m, nu);
        const std::vector<double> u = random_vec(3 * m.n_cells(), 23);

        std::vector<double> want(3 * static_cast<size_t>(m.n_cells()), 0.0);
        const int fi = m.n_interior_faces();
        for (int f = 0; f < fi; ++f) {
            const int p = m.face_owner[f], n = m.face_neighbor[f];
            const double w = nu[f] * m.face_areas[f].norm() / m.d_vectors[f].norm();
            for (int c = 0; c < 3; ++c) {
                const double jump = u[3 * n + c] - u[3 * p + c];
                want[3 * p + c] += w * jump / m.cell_volumes[p];
                want[3 * n + c] -= w * jump / m.cell_volumes[n];
            }
        }
        for (int b = 0; b < m.n_boundary_faces(); ++b) {
            const BoundaryFace& bf = m.boundary_faces[b];
            const double w = nu[fi + b] * bf.area.norm() / bf.d_n;
            for (int c = 0; c < 3; ++c)
                want[3 * bf.owner + c] -= w * u[3 * bf.owner + c] / m.cell_volumes[bf.owner];
        }
        CHECK(max_abs_diff(D.apply(u), want) < 1e-13);
    }
}

TEST_CASE("Laplacian is exact on quadratic fields away from the boundary") {
    const StructuredMesh m = cube_mesh();
    const SparseOperator D = assemble_laplacian(m, std::vector<double>(m.n_faces(), 1.0));
    std::vector<double> u(3 * static_cast<size_t>(m.n_cells()), 0.0);
    for (int c = 0; c < m.n_cells(); ++c) {
        const Vec3 x = m.cell_center(c);
        u[3 * c] = x.x * x.x + 2.0 * x.y * x.y - x.z * x.z;
    }
    const std::vector<double> lap = D.apply(u);
    for (int c = 0; c < m.n_cells(); ++c)
        if (is_interior(m, c, 1))
            CHECK(lap[3 * c] == doctest::Approx(2.0 + 4.0 - 2.0).epsilon(1e-11));
}

TEST_CASE("linearized convection matches a face-loop oracle") {
    for (const StructuredMesh& m : {small_mesh(), cube_mesh()}) {
        FaceVectorField uf{random_vec(3 * m.n_faces(), 29)};
        const SparseOperator C = assemble_convection(m, uf);
        const std::vector<double> u = random_vec(3 * m.n_cells(), 31);

        std::vector<double> want(3 * static_cast<size_t>(m.n_cells()), 0.0);
        for (int f = 0; f < m.n_interior_faces(); ++f) {
            const int p = m.face_owner[f], n = m.face_neighbor[f];
            const double phi = m.face_areas[f].dot(uf.at(f));
            for (int c = 0; c < 3; ++c) {
                const double face_u = 0.5 * (u[3 * p + c] + u[3 * n + c]);
                want[3 * p + c] += phi * face_u / m.cell_volumes[p];
                want[3 * n + c] -= phi * face_u / m.cell_volumes[n];
            }
        }
        CHECK(max_abs_diff(C.apply(u), want) < 1e-13);
    }
}

TEST_CASE("checkerboard mode: invisible to the wide stencil, seen by the compact one") {
    const StructuredMesh m = build_structured_mesh(6, 6, 6, 1.0, 1.0, 1.0);
    const PpeOperators ppe = assemble_ppe_operators(m);
    std::vector<double> parity(m.n_cells());
    for (int c = 0; c < m.n_cells(); ++c) {
        const int i = c % 6, j = (c / 6) % 6, k = c / 36;
        parity[c] = ((i + j + k) % 2 == 0) ? 1.0 : -1.0;
    }
    const std::vector<double> wide = ppe.L_p.apply(parity);
    const std::vector<double> compact = ppe.L_f.apply(parity);
    const double w_ref = m.face_areas[0].norm() / m.d_vectors[0].norm();
    int tested = 0;
    for (int c = 0; c < m.n_cells(); ++c) {
        if (!is_interior(m, c, 2)) continue;  // outside the wide stencil's reach
        CHECK(std::abs(wide[c]) < 1e-12);
        CHECK(std::abs(compact[c]) >= 4.0 * w_ref);
        ++tested;
    }
    CHECK(tested == 8);
}

TEST_CASE("boundary source vectors") {
    StructuredMesh m = small_mesh();
    // A lid velocity with a wall-normal component produces net boundary flux.
    const BoundaryPatchSet patches = classify_boundary(m, {1.0, 0.0, 0.25});
    const FaceVectorField u_b = boundary_velocity_field(m, patches);
    const std::vector<double> r_M = continuity_boundary(m, u_b);
    double total = 0.0;
    for (double v : r_M) total += v;
    // Net volumetric inflow through the lid: 0.25 * lid area.
    CHECK(total == doctest::Approx(0.25 * 1.2 * 0.8).epsilon(1e-13));

    const std::vector<double> r_C = convection_boundary(m, u_b);
    // Only lid owners receive the flux (S.u_b) u_b / V.
    const int fi = m.n_interior_faces();
    std::vector<double> want(3 * static_cast<size_t>(m.n_cells()), 0.0);
    for (int b = 0; b < m.n_boundary_faces(); ++b) {
        const BoundaryFace& bf = m.boundary_faces[b];
        const double phi = bf.area.dot(u_b.at(fi + b));
        for (int c = 0; c < 3; ++c)
            want[3 * bf.owner + c] += phi * u_b.at(fi + b)[c] / m.cell_volumes[bf.owner];
    }
    CHECK(max_abs_diff(r_C, want) < 1e-14);
}

TEST_CASE("face viscosity: interpolation rules and rejection of negatives") {
    const StructuredMesh m = small_mesh();
    CellScalarField nu = CellScalarField::zeros(m);
    for (int c = 0; c < m.n_cells(); ++c) nu.v[c] = 0.1 * (c + 1);
    const std::vector<double> nu_f = face_viscosity(m, nu);
    for (int f = 0; f < m.n_interior_faces(); ++f)
        CHECK(nu_f[f] ==
              doctest::Approx(0.5 * (nu.v[m.face_owner[f]] + nu.v[m.face_neighbor[f]])));
    for (int b = 0; b < m.n_boundary_faces(); ++b)
        CHECK(nu_f[m.n_interior_faces() + b] ==
              doctest::Approx(nu.v[m.boundary_faces[b].owner]));

    nu.v[0] = -1.0;
    CHECK_THROWS_AS(face_viscosity(m, nu), ValidationError);
    CHECK_THROWS_AS(assemble_laplacian(m, std::vector<double>(m.n_faces(), -1.0)),
                    ValidationError);
    CHECK_NOTHROW(assemble_laplacian(m, std::vector<double>(m.n_faces(), -1.0), true));
}
