#include "fracpow/fem.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fracpow/mesh.hpp"

using namespace fracpow;

namespace {
constexpr double kPi = std::numbers::pi;

Field random_field(const StructuredMesh& mesh, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Field f{mesh.n, std::vector<double>(mesh.num_interior())};
    for (double& v : f.values) v = gauss(rng);
    return f;
}
}  // namespace

TEST_CASE("mesh counting and areas") {
    const StructuredMesh m2 = build_mesh(2);
    CHECK(m2.num_vertices() == 9);
    CHECK(m2.num_triangles() == 8);
    CHECK(m2.num_interior() == 1);

    const StructuredMesh m4 = build_mesh(4);
    CHECK(m4.num_interior() == 9);
    CHECK(m4.h == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-15));

    double total = 0.0;
    for (int t = 0; t < m4.num_triangles(); ++t) {
        const double a = triangle_area(m4, t);
        CHECK(a == doctest::Approx(1.0 / 32).epsilon(1e-14));
        total += a;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(build_mesh(1), std::invalid_argument);
}

TEST_CASE("element mass sums to the domain area (partition of unity)") {
    const StructuredMesh mesh = build_mesh(4);
    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto me = element_mass(mesh, t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) total += me[i][j];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("assembly: five-point stencil and mass row sums") {
    const StructuredMesh mesh = build_mesh(4);
    const SparseOperatorPair pair = assemble(mesh, 1.0);
    const int side = 5;
    const int center = mesh.interior_index[2 * side + 2];
    REQUIRE(center >= 0);
    CHECK(pair.stiffness.value_at(center, center) == doctest::Approx(4.0).epsilon(1e-14));
    for (int neighbor : {2 * side + 1, 2 * side + 3, 1 * side + 2, 3 * side + 2}) {
        const int dof = mesh.interior_index[neighbor];
        CHECK(pair.stiffness.value_at(center, dof) == doctest::Approx(-1.0).epsilon(1e-14));
    }
    // diagonal couplings cancel on this mesh
    CHECK(pair.stiffness.value_at(center, mesh.interior_index[3 * side + 3]) ==
          doctest::Approx(0.0).epsilon(1e-14));
    double row = 0.0;
    for (int j = 0; j < pair.stiffness.rows(); ++j)
        row += pair.stiffness.value_at(center, j);
    CHECK(row == doctest::Approx(0.0).epsilon(1e-13));

    double mass_row = 0.0;
    for (int j = 0; j < pair.mass.rows(); ++j) mass_row += pair.mass.value_at(center, j);
    CHECK(mass_row == doctest::Approx(1.0 / 16).epsilon(1e-13));

    CHECK_THROWS_AS(assemble(mesh, 0.0), std::invalid_argument);
}

TEST_CASE("assembly symmetry and positive definiteness") {
    const StructuredMesh mesh = build_mesh(8);
    const SparseOperatorPair pair = assemble(mesh, 2.5);
    CHECK(pair.stiffness.symmetry_defect() == 0.0);
    CHECK(pair.mass.symmetry_defect() == 0.0);
    for (double v : pair.mass.values()) CHECK(v >= 0.0);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Field v = random_field(mesh, rng);
        const std::vector<double> av = pair.stiffness.multiply(v.values);
        const std::vector<double> mv = pair.mass.multiply(v.values);
        double vav = 0.0, vmv = 0.0;
        for (std::size_t i = 0; i < av.size(); ++i) {
            vav += v.values[i] * av[i];
            vmv += v.values[i] * mv[i];
        }
        CHECK(vav > 0.0);
        CHECK(vmv > 0.0);
    }
}

TEST_CASE("cg_solve") {
    SUBCASE("identity converges in one iteration") {
        SparseMatrix eye = SparseMatrix::from_triplets(
            3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
        CgStats stats;
        const std::vector<double> x = cg_solve(eye, std::vector<double>{1, 2, 3}, {}, &stats);
        CHECK(stats.iterations == 1);
        CHECK(x[2] == doctest::Approx(3.0).epsilon(1e-13));
    }
    SUBCASE("2x2 system against the direct inverse") {
        SparseMatrix a = SparseMatrix::from_triplets(
            2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
        const std::vector<double> x = cg_solve(a, std::vector<double>{1, 1});
        CHECK(x[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(x[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("stiffness system with diagonal preconditioner") {
        const StructuredMesh mesh = build_mesh(8);
        const SparseOperatorPair pair = assemble(mesh, 1.0);
        std::vector<double> rhs(pair.stiffness.rows(), 1.0);
        CgStats stats;
        const std::vector<double> x = cg_solve(pair.stiffness, rhs, {}, &stats);
        CHECK(stats.residual <= 1e-12);
        CHECK(stats.iterations <= 10 * pair.stiffness.rows());
    }
    SUBCASE("iteration cap failure carries the last residual") {
        const StructuredMesh mesh = build_mesh(16);
        const SparseOperatorPair pair = assemble(mesh, 1.0);
        std::vector<double> rhs(pair.stiffness.rows(), 1.0);
        SolverConfig cfg;
        cfg.max_iterations = 2;
        try {
            cg_solve(pair.stiffness, rhs, cfg);
            FAIL("expected SolveFailure");
        } catch (const SolveFailure& e) {
            CHECK(e.iterations == 2);
            CHECK(e.last_residual > 0.0);
        }
    }
    SUBCASE("zero rhs returns zero without iterating") {
        SparseMatrix eye = SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
        CgStats stats;
        const std::vector<double> x = cg_solve(eye, std::vector<double>{0, 0}, {}, &stats);
        CHECK(stats.iterations == 0);
        CHECK(x[0] == 0.0);
    }
}

TEST_CASE("l2_project") {
    const StructuredMesh mesh = build_mesh(4);
    const SparseOperatorPair pair = assemble(mesh, 1.0);

    SUBCASE("projection of a basis function is the unit vector") {
        const int k = mesh.interior_vertex[4];
        const auto& pk = mesh.vertices[k];
        auto hat = [&](double x, double y) {
            // P1 hat function on this mesh family: linear on each triangle,
            // support = the six triangles around pk
            const double dx = (x - pk[0]) * mesh.n, dy = (y - pk[1]) * mesh.n;
            if (dx * dy >= 0.0)
                return std::max(0.0, 1.0 - std::max(std::abs(dx), std::abs(dy)));
            return std::max(0.0, 1.0 - std::abs(dx) - std::abs(dy));
        };
        const Field c = l2_project(mesh, pair, hat);
        for (int i = 0; i < mesh.num_interior(); ++i) {
            const double expect = mesh.interior_vertex[i] == k ? 1.0 : 0.0;
            CHECK(c.values[i] == doctest::Approx(expect).epsilon(1e-9));
        }
    }
    SUBCASE("projection of zero is zero") {
        const Field c = l2_project(mesh, pair, [](double, double) { return 0.0; });
        for (double v : c.values) CHECK(v == 0.0);
    }
    SUBCASE("checkerboard load vector mass lies in (0, 1/2)") {
        auto cb = [](double x, double y) {
            return (x - 0.5) * (y - 0.5) > 0 ? 1.0 : 0.0;
        };
        const std::vector<double> b = load_vector(mesh, cb);
        double total = 0.0;
        for (double v : b) total += v;
        CHECK(total > 0.0);
        CHECK(total < 0.5);
    }
}

TEST_CASE("shifted solves") {
    const StructuredMesh mesh = build_mesh(8);
    const SparseOperatorPair pair = assemble(mesh, 1.0);
    std::mt19937_64 rng(11);
    const Field f = random_field(mesh, rng);

    SUBCASE("T1 at t=0 is the identity") {
        const Field u = shifted_solve(pair, 0.0, f, ResolventFamily::T1);
        for (std::size_t i = 0; i < u.values.size(); ++i)
            CHECK(u.values[i] == doctest::Approx(f.values[i]).epsilon(1e-10));
    }
    SUBCASE("T1 contraction in the M-norm") {
        for (double t : {0.01, 1.0, 100.0}) {
            const Field u = shifted_solve(pair, t, f, ResolventFamily::T1);
            CHECK(l2_norm(pair, u) <= l2_norm(pair, f) * (1 + 1e-8));
        }
    }
    SUBCASE("T2 at t=0 is the plain solve A u = M f") {
        const Field u = shifted_solve(pair, 0.0, f, ResolventFamily::T2);
        const std::vector<double> direct =
            cg_solve(pair.stiffness, pair.mass.multiply(f.values));
        for (std::size_t i = 0; i < u.values.size(); ++i)
            CHECK(u.values[i] == doctest::Approx(direct[i]).epsilon(1e-9));
    }
    SUBCASE("T2(t) = t^-2 T1(1/t)") {
        for (double t : {0.03, 0.4, 2.5}) {
            const Field u2 = shifted_solve(pair, t, f, ResolventFamily::T2);
            const Field u1 = shifted_solve(pair, 1.0 / t, f, ResolventFamily::T1);
            for (std::size_t i = 0; i < u2.values.size(); ++i)
                CHECK(u2.values[i] ==
                      doctest::Approx(u1.values[i] / (t * t)).epsilon(1e-8));
        }
    }
    SUBCASE("Galerkin residual of the plain solve") {
        const Field u = shifted_solve(pair, 0.0, f, ResolventFamily::T2);
        const std::vector<double> au = pair.stiffness.multiply(u.values);
        const std::vector<double> mf = pair.mass.multiply(f.values);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < au.size(); ++i) {
            num += (au[i] - mf[i]) * (au[i] - mf[i]);
            den += mf[i] * mf[i];
        }
        CHECK(std::sqrt(num) <= 1e-10 * std::sqrt(den));
    }
}

TEST_CASE("l2 norms and errors") {
    SUBCASE("zero field") {
        const StructuredMesh mesh = build_mesh(4);
        const SparseOperatorPair pair = assemble(mesh, 1.0);
        CHECK(l2_norm(pair, Field{4, std::vector<double>(9, 0.0)}) == 0.0);
    }
    SUBCASE("interpolant of sin(pi x) sin(pi y) approaches norm 1/2") {
        const StructuredMesh mesh = build_mesh(32);
        const SparseOperatorPair pair = assemble(mesh, 1.0);
        Field f{32, std::vector<double>(mesh.num_interior())};
        for (int i = 0; i < mesh.num_interior(); ++i) {
            const auto& p = mesh.vertices[mesh.interior_vertex[i]];
            f.values[i] = std::sin(kPi * p[0]) * std::sin(kPi * p[1]);
        }
        CHECK(l2_norm(pair, f) == doctest::Approx(0.5).epsilon(0.01));
    }
    SUBCASE("interpolation error decays at second order") {
        auto exact = [](double x, double y) {
            return std::sin(kPi * x) * std::sin(kPi * y);
        };
        double errs[2];
        int idx = 0;
        for (int n : {16, 32}) {
            const StructuredMesh mesh = build_mesh(n);
            Field f{n, std::vector<double>(mesh.num_interior())};
            for (int i = 0; i < mesh.num_interior(); ++i) {
                const auto& p = mesh.vertices[mesh.interior_vertex[i]];
                f.values[i] = exact(p[0], p[1]);
            }
            errs[idx++] = l2_error(mesh, f, exact);
        }
        const double rate = std::log2(errs[0] / errs[1]);
        CHECK(rate == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("tabulated error path matches the pointwise path") {
        const StructuredMesh mesh = build_mesh(8);
        auto exact = [](double x, double y) { return x * x + 0.5 * y; };
        Field f{8, std::vector<double>(mesh.num_interior(), 0.25)};
        const auto pts = quadrature_points(mesh);
        std::vector<double> tab(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) tab[i] = exact(pts[i][0], pts[i][1]);
        CHECK(l2_error_tabulated(mesh, f, tab) ==
              doctest::Approx(l2_error(mesh, f, exact)).epsilon(1e-14));
    }
}

TEST_CASE("field file round trip is bit exact") {
    const StructuredMesh mesh = build_mesh(6);
    std::mt19937_64 rng(21);
    const Field f = random_field(mesh, rng);
    const std::string path = "test_field_roundtrip.txt";
    write_field(path, mesh, f);
    const Field g = read_field(path);
    REQUIRE(g.mesh_n == 6);
    REQUIRE(g.values.size() == f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(g.values[i] == f.values[i]);
    std::remove(path.c_str());
}
