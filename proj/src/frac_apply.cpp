#include "fracpow/frac_apply.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace fracpow {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FRACPOW_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return omp_get_max_threads();
}

namespace {

struct Node {
    // T1/T2 resolvent node for the t-kinds, or a log-grid node y for the
    // exponential kind.
    enum class Kind { T1, T2, LogT1 } kind = Kind::T1;
    double arg = 0.0;     // t, or y
    double weight = 1.0;  // quadrature weight (1 when folded into the solve)

    std::string describe() const {
        const char* label = kind == Kind::T1 ? "T1 t=" : kind == Kind::T2 ? "T2 t=" : "T1 ln(t)=";
        return label + std::to_string(arg);
    }
};

std::vector<Node> node_list(const QuadratureScheme& scheme) {
    std::vector<Node> nodes;
    if (scheme.kind == SchemeKind::Exponential) {
        nodes.reserve(scheme.exp_nodes.size());
        for (double y : scheme.exp_nodes) nodes.push_back({Node::Kind::LogT1, y, 1.0});
        return nodes;
    }
    nodes.reserve(scheme.t1_nodes.size() + scheme.t2_nodes.size());
    for (std::size_t j = 0; j < scheme.t1_nodes.size(); ++j)
        nodes.push_back({Node::Kind::T1, scheme.t1_nodes[j], scheme.t1_weights[j]});
    for (std::size_t j = 0; j < scheme.t2_nodes.size(); ++j)
        nodes.push_back({Node::Kind::T2, scheme.t2_nodes[j], scheme.t2_weights[j]});
    return nodes;
}

// Weighted contribution of one node: weight * T(node) f, with the weight
// folded into the right-hand side where it would otherwise overflow.
std::vector<double> node_contribution(const SparseOperatorPair& pair,
                                      const Node& node, double beta,
                                      const std::vector<double>& mass_rhs,
                                      const SolverConfig& config, CgStats* stats) {
    std::vector<double> rhs = mass_rhs;
    SparseMatrix op;
    double post_weight = node.weight;
    switch (node.kind) {
        case Node::Kind::T1:
            op = SparseMatrix::combine(1.0, pair.mass, node.arg * node.arg,
                                       pair.stiffness);
            break;
        case Node::Kind::T2:
            op = SparseMatrix::combine(node.arg * node.arg, pair.mass, 1.0,
                                       pair.stiffness);
            break;
        case Node::Kind::LogT1: {
            const double y = node.arg;
            if (y <= 0.0) {
                op = SparseMatrix::combine(1.0, pair.mass, std::exp(2.0 * y),
                                           pair.stiffness);
                post_weight = std::exp(2.0 * beta * y);
            } else {
                // (e^{-2y} M + A) u = e^{(2b-2)y} M f  gives  e^{2by} T1(e^y) f
                op = SparseMatrix::combine(std::exp(-2.0 * y), pair.mass, 1.0,
                                           pair.stiffness);
                const double scale = std::exp(2.0 * (beta - 1.0) * y);
                for (double& v : rhs) v *= scale;
                post_weight = 1.0;
            }
            break;
        }
    }
    std::vector<double> u = cg_solve(op, rhs, config, stats);
    for (double& v : u) v *= post_weight;
    return u;
}

std::pair<Field, ApplyReport> apply_impl(const SparseOperatorPair& pair,
                                         const QuadratureScheme& scheme,
                                         const Field& f, const SolverConfig& config,
                                         int threads, bool parallel) {
    if (static_cast<int>(f.values.size()) != pair.mass.rows())
        throw std::invalid_argument("apply_frac_inverse: field size mismatch");
    const auto t_start = std::chrono::steady_clock::now();
    const double beta = scheme.beta.value();
    const std::vector<Node> nodes = node_list(scheme);
    const int nsys = static_cast<int>(nodes.size());
    const std::vector<double> mass_rhs = pair.mass.multiply(f.values);

    const double scale = scheme.kind == SchemeKind::Exponential
                             ? scheme.step / c_beta(scheme.beta)
                             : 1.0 / c_beta(scheme.beta);

    std::vector<double> acc(f.values.size(), 0.0);
    std::vector<int> iterations(nsys, 0);

    if (parallel) {
        std::vector<std::vector<double>> contribs(nsys);
        std::vector<std::string> failures(nsys);
        const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
        for (int i = 0; i < nsys; ++i) {
            try {
                CgStats stats;
                contribs[i] = node_contribution(pair, nodes[i], beta, mass_rhs,
                                                config, &stats);
                iterations[i] = stats.iterations;
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
        for (int i = 0; i < nsys; ++i)
            if (!failures[i].empty())
                throw SolveFailure("apply_frac_inverse: solve failed at node " +
                                       nodes[i].describe() + ": " + failures[i],
                                   0.0, 0);
        // Fixed-order reduction: ascending node index, independent of the
        // execution order above.
        for (int i = 0; i < nsys; ++i)
            for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += contribs[i][j];
    } else {
        for (int i = 0; i < nsys; ++i) {
            CgStats stats;
            std::vector<double> c;
            try {
                c = node_contribution(pair, nodes[i], beta, mass_rhs, config, &stats);
            } catch (const std::exception& e) {
                throw SolveFailure("apply_frac_inverse: solve failed at node " +
                                       nodes[i].describe() + ": " + e.what(),
                                   0.0, 0);
            }
            iterations[i] = stats.iterations;
            for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += c[j];
        }
    }

    Field out{f.mesh_n, std::move(acc)};
    for (double& v : out.values) v *= scale;

    ApplyReport report;
    report.nsys_executed = nsys;
    report.max_cg_iterations =
        nsys > 0 ? *std::max_element(iterations.begin(), iterations.end()) : 0;
    report.kind = scheme.kind;
    report.beta = beta;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return {std::move(out), report};
}

}  // namespace

std::pair<Field, ApplyReport> apply_frac_inverse(const SparseOperatorPair& pair,
                                                 const QuadratureScheme& scheme,
                                                 const Field& f,
                                                 const SolverConfig& config,
                                                 int threads) {
    return apply_impl(pair, scheme, f, config, threads, true);
}

namespace reference {
std::pair<Field, ApplyReport> apply_frac_inverse_serial(const SparseOperatorPair& pair,
                                                        const QuadratureScheme& scheme,
                                                        const Field& f,
                                                        const SolverConfig& config) {
    return apply_impl(pair, scheme, f, config, 1, false);
}
}  // namespace reference

}  // namespace fracpow
