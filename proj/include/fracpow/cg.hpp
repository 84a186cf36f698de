#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpow/sparse.hpp"

namespace fracpow {

enum class Preconditioner { None, Diagonal };

struct SolverConfig {
    double rel_tolerance = 1e-12;
    int max_iterations = 0;  // 0: 10 * dimension
    Preconditioner preconditioner = Preconditioner::Diagonal;
};

struct SolveFailure : std::runtime_error {
    SolveFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), last_residual(residual), iterations(iterations) {}
    double last_residual;
    int iterations;
};

struct CgStats {
    int iterations = 0;
    double residual = 0.0;  // relative to ||rhs||
};

/// Preconditioned conjugate gradients for an SPD matrix, zero initial guess.
/// Stops at ||b - Ax|| <= rel_tolerance * ||b||; throws SolveFailure (with
/// the last residual) when max_iterations is exceeded.  Deterministic for
/// fixed inputs.
std::vector<double> cg_solve(const SparseMatrix& a, std::span<const double> rhs,
                             const SolverConfig& config = {},
                             CgStats* stats = nullptr);

}  // namespace fracpow
