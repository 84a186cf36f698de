#include "fracpow/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "fracpow/fem.hpp"
#include "fracpow/frac_apply.hpp"
#include "fracpow/mesh.hpp"
#include "fracpow/reference_solutions.hpp"

namespace fracpow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

TableRow make_row(const QuadratureScheme& scheme, double param, int threads) {
    const SupErrorReport rep = sup_error(scheme, 10.0, threads);
    return {scheme.label(), scheme.beta.value(), param, rep.sup_error, rep.nsys};
}

}  // namespace

std::vector<TableRow> run_table1(std::span<const double> betas,
                                 std::span<const int> sizes, int threads) {
    std::vector<TableRow> rows;
    for (double b : betas)
        for (int n : sizes)
            rows.push_back(make_row(rectangle_scheme(Beta(b), n), n, threads));
    return rows;
}

std::vector<TableRow> run_table2(std::span<const double> betas,
                                 std::span<const int> sizes, int r, int threads) {
    std::vector<TableRow> rows;
    for (double b : betas)
        for (int n : sizes)
            rows.push_back(make_row(
                dyadic_gauss_scheme(Beta(b), n, r, MChoice::PerIntegralPadded), n,
                threads));
    return rows;
}

std::vector<TableRow> run_table3(std::span<const double> betas,
                                 std::span<const double> ks, int threads) {
    std::vector<TableRow> rows;
    for (double b : betas)
        for (double k : ks)
            rows.push_back(make_row(exponential_scheme(Beta(b), k), k, threads));
    return rows;
}

std::string table_csv(std::span<const TableRow> rows) {
    std::string out = "scheme,beta,param,sup_error,nsys\n";
    for (const TableRow& r : rows) {
        out += r.scheme + ',' + fmt(r.beta) + ',' + fmt(r.param) + ',' +
               fmt(r.sup_error) + ',' + std::to_string(r.nsys) + '\n';
    }
    return out;
}

double observed_rate(double e1, double e2, double h1, double h2) {
    return std::log(e1 / e2) / std::log(h1 / h2);
}

double expected_rate(double beta) {
    return beta > 0.75 ? 2.0 : 2.0 * beta + 0.5;
}

ConvergenceResult run_convergence(Beta beta, std::span<const int> meshes,
                                  const SolverConfig& config, int threads,
                                  int modes) {
    if (meshes.empty()) throw std::invalid_argument("run_convergence: no meshes");
    for (std::size_t i = 0; i < meshes.size(); ++i) {
        if (meshes[i] % 2 != 0)
            throw std::invalid_argument(
                "run_convergence: meshes must be even (checkerboard alignment)");
        if (i > 0 && meshes[i] <= meshes[i - 1])
            throw std::invalid_argument("run_convergence: meshes must ascend");
    }

    const SineSeries series = exact_solution(beta, modes);
    auto solve_on = [&](int n, const QuadratureScheme& scheme) {
        const StructuredMesh mesh = build_mesh(n);
        const SparseOperatorPair pair = assemble(mesh, 1.0);
        const Field fh = l2_project(mesh, pair, checkerboard, config);
        const auto [u, report] = apply_frac_inverse(pair, scheme, fh, config, threads);
        (void)report;
        const auto qp = quadrature_points(mesh);
        const std::vector<double> exact = evaluate(series, qp, threads);
        return l2_error_tabulated(mesh, u, exact);
    };

    // Pilot run on the coarsest mesh to size the quadrature: extrapolate the
    // finest-mesh error at the theoretical rate, then take the largest step k
    // whose operator ceiling sits 100x below it.
    const double pilot_error = solve_on(meshes[0], exponential_scheme(beta, 0.35));
    const double rate = expected_rate(beta.value());
    const double h_ratio =
        static_cast<double>(meshes[0]) / static_cast<double>(meshes.back());
    const double predicted_finest = pilot_error * std::pow(h_ratio, rate);

    const StructuredMesh mesh0 = build_mesh(meshes[0]);
    const SparseOperatorPair pair0 = assemble(mesh0, 1.0);
    const double f_norm = l2_norm(pair0, l2_project(mesh0, pair0, checkerboard, config));
    const double lambda_min = 2.0 * std::numbers::pi * std::numbers::pi;

    double k = 0.15;
    double bound = 0.0;
    for (double cand = 0.60; cand >= 0.15 - 1e-9; cand -= 0.05) {
        bound = theoretical_bound(exponential_scheme(beta, cand), lambda_min) * f_norm;
        if (bound <= 0.01 * predicted_finest) {
            k = cand;
            break;
        }
    }

    ConvergenceResult result;
    result.beta = beta.value();
    result.expected = rate;
    result.quad_k = k;
    result.quad_bound = theoretical_bound(exponential_scheme(beta, k), lambda_min) * f_norm;
    result.tail_bound = series.tail_bound;

    const QuadratureScheme scheme = exponential_scheme(beta, k);
    for (int n : meshes) {
        ConvergenceRow row;
        row.n = n;
        row.h = std::sqrt(2.0) / n;
        row.l2_error = solve_on(n, scheme);
        result.rows.push_back(row);
    }
    double oroc_sum = 0.0;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        auto& cur = result.rows[i];
        const auto& prev = result.rows[i - 1];
        cur.oroc = observed_rate(prev.l2_error, cur.l2_error, prev.h, cur.h);
        cur.has_oroc = true;
        oroc_sum += cur.oroc;
    }
    if (result.rows.size() > 1)
        result.aroc = oroc_sum / static_cast<double>(result.rows.size() - 1);
    return result;
}

std::string convergence_csv(std::span<const ConvergenceResult> results) {
    std::string out = "beta,n,h,l2_error,oroc,aroc,expected_rate\n";
    for (const ConvergenceResult& r : results) {
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            const ConvergenceRow& row = r.rows[i];
            const bool last = i + 1 == r.rows.size();
            out += fmt(r.beta) + ',' + std::to_string(row.n) + ',' + fmt(row.h) +
                   ',' + fmt(row.l2_error) + ',';
            if (row.has_oroc) out += fmt(row.oroc);
            out += ',';
            if (last) out += fmt(r.aroc);
            out += ',';
            if (last) out += fmt(r.expected);
            out += '\n';
        }
    }
    return out;
}

}  // namespace fracpow
