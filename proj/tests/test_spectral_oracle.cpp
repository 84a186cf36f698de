#include "fracpow/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fracpow/mesh.hpp"

using namespace fracpow;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("decompose: scalar problem and counts") {
    const StructuredMesh mesh = build_mesh(2);
    const SparseOperatorPair pair = assemble(mesh, 1.0);
    const EigenDecomposition dec = decompose(pair);
    REQUIRE(dec.dim() == 1);
    CHECK(dec.eigenvalues()[0] ==
          doctest::Approx(pair.stiffness.value_at(0, 0) / pair.mass.value_at(0, 0))
              .epsilon(1e-12));

    const StructuredMesh mesh8 = build_mesh(8);
    CHECK(decompose(assemble(mesh8, 1.0)).dim() == 49);
    CHECK_THROWS_AS(decompose(assemble(mesh8, 1.0), 10), std::invalid_argument);
}

TEST_CASE("decompose: smallest eigenvalue approaches 2 pi^2") {
    const StructuredMesh mesh = build_mesh(32);
    const SparseOperatorPair pair = assemble(mesh, 1.0);
    const EigenDecomposition dec = decompose(pair);
    const double continuum = 2.0 * kPi * kPi;
    CHECK(std::abs(dec.eigenvalues().front() / continuum - 1.0) < 0.01);
    // conforming elements overshoot
    CHECK(dec.eigenvalues().front() >= continuum);
}

TEST_CASE("decompose: residuals and M-orthonormality") {
    const StructuredMesh mesh = build_mesh(8);
    const SparseOperatorPair pair = assemble(mesh, 1.0);
    const EigenDecomposition dec = decompose(pair);
    const int dim = dec.dim();
    for (int i = 0; i < dim; ++i) {
        const Field psi = dec.eigenfield(8, i);
        const std::vector<double> apsi = pair.stiffness.multiply(psi.values);
        const std::vector<double> mpsi = pair.mass.multiply(psi.values);
        double num = 0.0, den = 0.0;
        for (int r = 0; r < dim; ++r) {
            const double res = apsi[r] - dec.eigenvalues()[i] * mpsi[r];
            num += res * res;
            den += apsi[r] * apsi[r];
        }
        CHECK(std::sqrt(num / den) <= 1e-8);
        for (int j = i; j < dim; ++j) {
            double dot = 0.0;
            for (int r = 0; r < dim; ++r) dot += dec.eigenvector(j)[r] * mpsi[r];
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-10);
        }
    }
}

TEST_CASE("apply_power") {
    const StructuredMesh mesh = build_mesh(8);
    const SparseOperatorPair pair = assemble(mesh, 1.0);
    const EigenDecomposition dec = decompose(pair);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss;
    Field f{8, std::vector<double>(dec.dim())};
    for (double& v : f.values) v = gauss(rng);

    SUBCASE("power zero is the identity") {
        const Field u = apply_power(dec, pair, 0.0, f);
        for (std::size_t i = 0; i < f.values.size(); ++i)
            CHECK(u.values[i] == doctest::Approx(f.values[i]).epsilon(1e-10));
    }
    SUBCASE("power one equals the plain solve") {
        const Field u = apply_power(dec, pair, 1.0, f);
        const std::vector<double> direct =
            cg_solve(pair.stiffness, pair.mass.multiply(f.values));
        for (std::size_t i = 0; i < f.values.size(); ++i)
            CHECK(u.values[i] == doctest::Approx(direct[i]).epsilon(1e-8));
    }
    SUBCASE("semigroup property") {
        const Field a = apply_power(dec, pair, 0.3, apply_power(dec, pair, 0.45, f));
        const Field b = apply_power(dec, pair, 0.75, f);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
            den += b.values[i] * b.values[i];
        }
        CHECK(std::sqrt(num / den) <= 1e-8);
    }
    SUBCASE("Parseval") {
        const std::vector<double> mf = pair.mass.multiply(f.values);
        double sum_sq = 0.0;
        for (int i = 0; i < dec.dim(); ++i) {
            double c = 0.0;
            for (int r = 0; r < dec.dim(); ++r) c += dec.eigenvector(i)[r] * mf[r];
            sum_sq += c * c;
        }
        const double m_norm_sq = m_inner(pair, f, f);
        CHECK(std::abs(sum_sq - m_norm_sq) <= 1e-10 * m_norm_sq);
    }
}

TEST_CASE("dotted_norm") {
    const StructuredMesh mesh = build_mesh(8);
    const SparseOperatorPair pair = assemble(mesh, 1.0);
    const EigenDecomposition dec = decompose(pair);
    std::mt19937_64 rng(29);
    std::normal_distribution<double> gauss;
    Field f{8, std::vector<double>(dec.dim())};
    for (double& v : f.values) v = gauss(rng);

    SUBCASE("s = 0 is the M-norm") {
        CHECK(dotted_norm(dec, pair, 0.0, f) ==
              doctest::Approx(l2_norm(pair, f)).epsilon(1e-10));
    }
    SUBCASE("s = 1 of the first eigenfunction") {
        const Field psi = dec.eigenfield(8, 0);
        CHECK(dotted_norm(dec, pair, 1.0, psi) ==
              doctest::Approx(std::sqrt(dec.eigenvalues()[0])).epsilon(1e-10));
    }
    SUBCASE("monotone in s (lambda_min > 1)") {
        REQUIRE(dec.eigenvalues().front() > 1.0);
        double prev = 0.0;
        bool first = true;
        for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const double v = dotted_norm(dec, pair, s, f);
            if (!first) CHECK(v >= prev);
            prev = v;
            first = false;
        }
    }
}
