#pragma once

#include <array>
#include <span>
#include <vector>

#include "fracpow/scalar_quad.hpp"

namespace fracpow {

/// Piecewise-constant source: 1 where (x-1/2)(y-1/2) > 0, else 0.
double checkerboard(double x, double y);

/// Coefficient of the checkerboard against sin(m pi x) sin(n pi y), i.e.
/// f = sum c_mn sin sin: c_mn = 4 (sL_m sL_n + sR_m sR_n) in closed form.
double checkerboard_sine_coeff(int m, int n);

/// Truncated double sine series of (-Laplace)^(-beta) f on the unit square:
/// u = sum a_mn sin(m pi x) sin(n pi y), a_mn = (pi^2 (m^2+n^2))^(-beta) c_mn.
struct SineSeries {
    double beta = 0.5;
    int modes = 300;
    std::vector<double> coeff;  // a_mn, row-major (m-1)*modes + (n-1)
    double tail_bound = 0.0;    // L2 bound on the dropped modes

    double a(int m, int n) const { return coeff[(m - 1) * modes + (n - 1)]; }
};

SineSeries exact_solution(Beta beta, int modes = 300);

double evaluate(const SineSeries& series, double x, double y);

/// Batch evaluation via separable sine-table contraction over the distinct
/// x and y coordinates (columns computed independently in parallel; results
/// identical to the pointwise path up to its own rounding, and across
/// thread counts).
std::vector<double> evaluate(const SineSeries& series,
                             std::span<const std::array<double, 2>> points,
                             int threads = 0);

/// sqrt(sum a_mn^2 / 4)
double series_l2_norm(const SineSeries& series);

/// L2 bound on the modes beyond `modes` (sum of exact coefficients up to a
/// large index plus an integral envelope beyond it).
double series_tail_bound(Beta beta, int modes);

namespace reference {
std::vector<double> evaluate_serial(const SineSeries& series,
                                    std::span<const std::array<double, 2>> points);
}

}  // namespace fracpow
