// Benchmark of the OpenMP kernels against their serial reference
// implementations.  Results must agree bitwise; times and speedups are
// reported for the quadrature-node solver pool, the sup-error lambda scan,
// and the sine-series batch evaluation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "fracpow/fem.hpp"
#include "fracpow/frac_apply.hpp"
#include "fracpow/mesh.hpp"
#include "fracpow/parallel.hpp"
#include "fracpow/reference_solutions.hpp"
#include "fracpow/scalar_quad.hpp"

using namespace fracpow;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

int main() {
    const int threads = resolve_threads(0);
    std::printf("threads: %d\n\n", threads);

    {
        const StructuredMesh mesh = build_mesh(48);
        const SparseOperatorPair pair = assemble(mesh, 1.0);
        const Field f = l2_project(mesh, pair, checkerboard);
        const QuadratureScheme scheme = exponential_scheme(Beta(0.5), 0.25);

        double t0 = now();
        const Field up = apply_frac_inverse(pair, scheme, f, {}, threads).first;
        const double t_par = now() - t0;
        t0 = now();
        const Field us = reference::apply_frac_inverse_serial(pair, scheme, f).first;
        const double t_ser = now() - t0;
        std::printf("apply_frac_inverse  n=48 nsys=%d   parallel %.3fs  serial %.3fs  speedup %.2fx  bitwise %s\n",
                    scheme.nsys(), t_par, t_ser, t_ser / t_par,
                    bit_equal(up.values, us.values) ? "equal" : "DIFFER");
    }

    {
        const QuadratureScheme scheme = rectangle_scheme(Beta(0.25), 1023);
        std::vector<double> lambdas;
        for (int i = 0; i < 200000; ++i)
            lambdas.push_back(10.0 * std::pow(10.0, i / 20000.0));
        double t0 = now();
        const std::vector<double> ep = detail::scan_errors(scheme, lambdas, threads);
        const double t_par = now() - t0;
        t0 = now();
        const std::vector<double> es = detail::scan_errors_serial(scheme, lambdas);
        const double t_ser = now() - t0;
        std::printf("sup-error scan      %zu lambdas  parallel %.3fs  serial %.3fs  speedup %.2fx  bitwise %s\n",
                    lambdas.size(), t_par, t_ser, t_ser / t_par,
                    bit_equal(ep, es) ? "equal" : "DIFFER");
    }

    {
        const SineSeries series = exact_solution(Beta(0.5), 300);
        const StructuredMesh mesh = build_mesh(64);
        const auto points = quadrature_points(mesh);
        double t0 = now();
        const std::vector<double> vp = evaluate(series, points, threads);
        const double t_par = now() - t0;
        t0 = now();
        const std::vector<double> vs = reference::evaluate_serial(series, points);
        const double t_ser = now() - t0;
        std::printf("series evaluation   %zu points   parallel %.3fs  serial %.3fs  speedup %.2fx  bitwise %s\n",
                    points.size(), t_par, t_ser, t_ser / t_par,
                    bit_equal(vp, vs) ? "equal" : "DIFFER");
    }
    return 0;
}
