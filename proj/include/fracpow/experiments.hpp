#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracpow/cg.hpp"
#include "fracpow/scalar_quad.hpp"

namespace fracpow {

struct TableRow {
    std::string scheme;
    double beta = 0.0;
    double param = 0.0;  // N or k
    double sup_error = 0.0;
    int nsys = 0;
};

std::vector<TableRow> run_table1(std::span<const double> betas,
                                 std::span<const int> sizes, int threads = 0);
std::vector<TableRow> run_table2(std::span<const double> betas,
                                 std::span<const int> sizes, int r,
                                 int threads = 0);
std::vector<TableRow> run_table3(std::span<const double> betas,
                                 std::span<const double> ks, int threads = 0);

std::string table_csv(std::span<const TableRow> rows);

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    double l2_error = 0.0;
    double oroc = 0.0;  // valid from the second row on
    bool has_oroc = false;
};

struct ConvergenceResult {
    double beta = 0.0;
    std::vector<ConvergenceRow> rows;
    double aroc = 0.0;
    double expected = 0.0;  // theoretical rate
    double quad_k = 0.0;    // exponential step used
    double quad_bound = 0.0;  // operator quadrature ceiling at that step
    double tail_bound = 0.0;  // series truncation ceiling
};

/// OROC between two meshes: ln(e1/e2) / ln(h1/h2).
double observed_rate(double e1, double e2, double h1, double h2);

/// Predicted L2 rate for the checkerboard data: 2 for beta > 3/4, else
/// 2 beta + 1/2.
double expected_rate(double beta);

/// Checkerboard convergence study: L2 errors against the 300-mode series on
/// the given meshes, using the exponential scheme with k chosen so the
/// quadrature ceiling sits 100x below the extrapolated finest-mesh error.
ConvergenceResult run_convergence(Beta beta, std::span<const int> meshes,
                                  const SolverConfig& config = {},
                                  int threads = 0, int modes = 300);

std::string convergence_csv(std::span<const ConvergenceResult> results);

}  // namespace fracpow
