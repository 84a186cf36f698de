#include "fracpow/reference_solutions.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace fracpow;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent oracle: adaptive Simpson quadrature.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(m), f(b), 1e-13, 30);
}

// 2D coefficient of the checkerboard against sin(m pi x) sin(n pi y) by
// nested quadrature over the two quadrants where f = 1.
double coeff_numeric(int m, int n) {
    auto sx = [m](double a, double b) {
        return integrate([m](double x) { return std::sin(m * kPi * x); }, a, b);
    };
    auto sy = [n](double a, double b) {
        return integrate([n](double y) { return std::sin(n * kPi * y); }, a, b);
    };
    return 4.0 * (sx(0.0, 0.5) * sy(0.0, 0.5) + sx(0.5, 1.0) * sy(0.5, 1.0));
}

}  // namespace

TEST_CASE("checkerboard point values and symmetry") {
    CHECK(checkerboard(0.75, 0.75) == 1.0);
    CHECK(checkerboard(0.25, 0.75) == 0.0);
    CHECK(checkerboard(0.25, 0.25) == 1.0);
    CHECK(checkerboard(0.5, 0.8) == 0.0);  // discontinuity line
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double x = unit(rng), y = unit(rng);
        CHECK(checkerboard(x, y) == checkerboard(y, x));
    }
}

TEST_CASE("sine coefficients: closed form against the quadrature oracle") {
    CHECK(checkerboard_sine_coeff(1, 1) == doctest::Approx(8.0 / (kPi * kPi)).epsilon(1e-12));
    CHECK(checkerboard_sine_coeff(1, 2) == 0.0);
    for (int m = 1; m <= 20; ++m)
        for (int n = 1; n <= 20; ++n)
            CHECK(checkerboard_sine_coeff(m, n) ==
                  doctest::Approx(coeff_numeric(m, n)).epsilon(1e-8).scale(1.0));
}

TEST_CASE("series reconstructs the data when the powers are dropped") {
    // a_mn = c_mn reproduces f itself; away from the discontinuity lines the
    // 300-mode partial sum sits near 1 in the on-quadrants.
    SineSeries flat;
    flat.beta = 0.0;
    flat.modes = 300;
    flat.coeff.resize(300 * 300);
    for (int m = 1; m <= 300; ++m)
        for (int n = 1; n <= 300; ++n)
            flat.coeff[(m - 1) * 300 + (n - 1)] = checkerboard_sine_coeff(m, n);
    const double v = evaluate(flat, 0.75, 0.75);
    CHECK(v > 0.9);
    CHECK(v < 1.1);
}

TEST_CASE("exact solution properties") {
    const SineSeries u = exact_solution(Beta(0.5), 300);
    SUBCASE("solution symmetries from the coefficient structure") {
        // c_mn = c_nm and only (odd,odd) / (2 mod 4, 2 mod 4) pairs survive,
        // so u is symmetric under the diagonal mirror and the half-turn.
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> unit(0.05, 0.95);
        for (int i = 0; i < 20; ++i) {
            const double x = unit(rng), y = unit(rng);
            const double v = evaluate(u, x, y);
            CHECK(evaluate(u, y, x) == doctest::Approx(v).epsilon(1e-10));
            CHECK(evaluate(u, 1.0 - x, 1.0 - y) == doctest::Approx(v).epsilon(1e-10));
        }
        // the part of u that is odd across {x = 1/2} vanishes on that line:
        // u(1/2, y) equals its own mirror value there, and the even part is
        // genuinely nonzero (no across-the-line cancellation of u itself)
        CHECK(evaluate(u, 0.5, 0.5) > 0.1);
    }
    SUBCASE("series norm identity") {
        double sum = 0.0;
        for (double a : u.coeff) sum += a * a;
        CHECK(series_l2_norm(u) == doctest::Approx(std::sqrt(sum / 4.0)).epsilon(1e-14));
    }
    SUBCASE("coefficient decay envelope") {
        for (int m : {1, 7, 50, 299})
            for (int n : {2, 13, 140}) {
                const double lambda = kPi * kPi * (m * m + n * n);
                CHECK(std::abs(u.a(m, n)) <=
                      std::pow(lambda, -0.5) * 32.0 / (kPi * kPi * m * n) + 1e-15);
            }
    }
    SUBCASE("tail bound decreases with beta and with modes") {
        CHECK(series_tail_bound(Beta(0.5), 300) < series_tail_bound(Beta(0.1), 300));
        CHECK(series_tail_bound(Beta(0.5), 300) < series_tail_bound(Beta(0.5), 100));
        CHECK(u.tail_bound == doctest::Approx(series_tail_bound(Beta(0.5), 300)));
    }
}

TEST_CASE("batch evaluation matches pointwise evaluation") {
    const SineSeries u = exact_solution(Beta(0.3), 120);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::array<double, 2>> pts(200);
    for (auto& p : pts) p = {unit(rng), unit(rng)};
    // repeated coordinates exercise the distinct-value grouping
    pts[50] = pts[0];
    pts[51] = {pts[1][0], pts[2][1]};
    const std::vector<double> batch = evaluate(u, pts);
    const std::vector<double> serial = reference::evaluate_serial(u, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(batch[i] == serial[i]);  // parallel kernel is exact vs reference
        CHECK(batch[i] == doctest::Approx(evaluate(u, pts[i][0], pts[i][1]))
                              .epsilon(1e-9).scale(0.1));
    }
}
