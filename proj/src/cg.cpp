#include "fracpow/cg.hpp"

#include <cmath>

namespace fracpow {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

std::vector<double> cg_solve(const SparseMatrix& a, std::span<const double> rhs,
                             const SolverConfig& config, CgStats* stats) {
    const int n = a.rows();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("cg_solve: rhs size mismatch");
    if (!(config.rel_tolerance > 0.0 && config.rel_tolerance < 1.0))
        throw std::invalid_argument("cg_solve: tolerance must lie in (0,1)");
    const int max_iter = config.max_iterations > 0 ? config.max_iterations : 10 * n;

    std::vector<double> x(n, 0.0);
    const double rhs_norm = norm2(rhs);
    if (stats) *stats = {0, 0.0};
    if (rhs_norm == 0.0) return x;
    const double target = config.rel_tolerance * rhs_norm;

    std::vector<double> inv_diag;
    if (config.preconditioner == Preconditioner::Diagonal) {
        inv_diag = a.diagonal();
        for (double& d : inv_diag) {
            if (!(d > 0.0)) throw std::invalid_argument("cg_solve: nonpositive diagonal");
            d = 1.0 / d;
        }
    }

    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> z(n), p(n), ap(n);
    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (inv_diag.empty())
            out = in;
        else
            for (int i = 0; i < n; ++i) out[i] = inv_diag[i] * in[i];
    };

    precondition(r, z);
    p = z;
    double rz = dot(r, z);
    double res = norm2(r);

    for (int it = 1; it <= max_iter; ++it) {
        a.multiply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0))
            throw SolveFailure("cg_solve: matrix not positive definite", res / rhs_norm, it);
        const double alpha = rz / pap;
        for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (int i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        res = norm2(r);
        if (stats) {
            stats->iterations = it;
            stats->residual = res / rhs_norm;
        }
        if (res <= target) return x;
        precondition(r, z);
        const double rz_next = dot(r, z);
        const double omega = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + omega * p[i];
    }
    throw SolveFailure("cg_solve: no convergence within max_iterations",
                       res / rhs_norm, max_iter);
}

}  // namespace fracpow
