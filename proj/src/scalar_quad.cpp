#include "fracpow/scalar_quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "fracpow/parallel.hpp"

namespace fracpow {

namespace {

constexpr double kPi = std::numbers::pi;
// Scheme constructors reject exponents this close to the endpoints; the
// error ceilings blow up like 1/beta and 1/(1-beta) there.
constexpr double kBetaMargin = 1e-3;

void require_scheme_beta(Beta beta) {
    const double b = beta.value();
    if (b < kBetaMargin || b > 1.0 - kBetaMargin)
        throw std::invalid_argument("scheme beta outside [1e-3, 1-1e-3]");
}

int ceil_snapped(double x) {
    return static_cast<int>(std::ceil(x - 1e-9));
}

}  // namespace

Beta::Beta(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0))
        throw std::invalid_argument("beta must lie in (0,1)");
}

double c_beta(Beta beta) { return kPi / (2.0 * std::sin(kPi * beta.value())); }

double mesh_ratio_bound(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    return theta > 1.0 ? std::exp2(theta) - 1.0 : 1.0;
}

GradedPartition graded_nodes(int n, double theta) {
    if (n < 1) throw std::invalid_argument("graded partition needs n >= 1");
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    GradedPartition p;
    p.theta = theta;
    p.n = n;
    p.nodes.resize(n + 1);
    for (int i = 0; i <= n; ++i)
        p.nodes[i] = std::pow(static_cast<double>(i) / n, theta);
    p.nodes[0] = 0.0;
    p.nodes[n] = 1.0;
    const double rho = mesh_ratio_bound(theta);
    for (int i = 1; i + 1 <= n; ++i) {
        const double left = p.nodes[i] - p.nodes[i - 1];
        const double right = p.nodes[i + 1] - p.nodes[i];
        if (!(right <= rho * left * (1.0 + 1e-12)))
            throw std::logic_error("graded partition violates its ratio bound");
    }
    return p;
}

WeightedGaussRule weighted_gauss_rule(double a, double b, double gamma, int r) {
    if (r < 1) throw std::invalid_argument("weighted Gauss rule needs r >= 1");
    if (!(a >= 0.0 && b > a)) throw std::invalid_argument("need 0 <= a < b");
    if (!(gamma > -1.0)) throw std::invalid_argument("need gamma > -1");

    // Work on u = t/b in (a/b, 1]: moments stay O(1) for any interval scale.
    const long double ua = static_cast<long double>(a) / b;
    const long double g = gamma;
    std::vector<long double> mom(2 * r);
    for (int l = 0; l < 2 * r; ++l) {
        const long double e = g + l + 1;
        mom[l] = (1.0L - std::pow(ua, e)) / e;
    }

    // Chebyshev recurrence for the three-term coefficients from moments.
    std::vector<long double> alpha(r), betac(r);
    std::vector<std::vector<long double>> sig(r + 1,
                                              std::vector<long double>(2 * r, 0.0L));
    for (int l = 0; l < 2 * r; ++l) sig[1][l] = mom[l];
    alpha[0] = mom[1] / mom[0];
    betac[0] = mom[0];
    for (int k = 1; k < r; ++k) {
        for (int l = k; l < 2 * r - k; ++l)
            sig[k + 1][l] = sig[k][l + 1] - alpha[k - 1] * sig[k][l] -
                            betac[k - 1] * sig[k - 1][l];
        const long double num = sig[k + 1][k];
        const long double den = sig[k][k - 1];
        if (!(num > 0.0L) || !std::isfinite(static_cast<double>(num)))
            throw std::runtime_error("weighted Gauss rule: ill-conditioned moments");
        alpha[k] = sig[k + 1][k + 1] / num - sig[k][k] / den;
        betac[k] = num / den;
        if (!(betac[k] > 0.0L))
            throw std::runtime_error("weighted Gauss rule: ill-conditioned moments");
    }

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < r; ++k) {
        jac(k, k) = static_cast<double>(alpha[k]);
        if (k + 1 < r) {
            const double off = std::sqrt(static_cast<double>(betac[k + 1]));
            jac(k, k + 1) = off;
            jac(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("weighted Gauss rule: eigensolver failure");

    WeightedGaussRule rule;
    rule.a = a;
    rule.b = b;
    rule.gamma = gamma;
    rule.nodes.resize(r);
    rule.weights.resize(r);
    const double scale = std::pow(b, gamma + 1.0);  // du -> dt
    for (int i = 0; i < r; ++i) {
        rule.nodes[i] = b * es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = scale * static_cast<double>(betac[0]) * v0 * v0;
        if (!(rule.nodes[i] > a && rule.nodes[i] < b) || !(rule.weights[i] > 0.0))
            throw std::runtime_error("weighted Gauss rule: ill-conditioned moments");
    }
    return rule;
}

int QuadratureScheme::nsys() const {
    if (kind == SchemeKind::Exponential)
        return static_cast<int>(exp_nodes.size());
    return static_cast<int>(t1_nodes.size() + t2_nodes.size());
}

std::string QuadratureScheme::label() const {
    switch (kind) {
        case SchemeKind::Rectangle: return "rect";
        case SchemeKind::GaussDyadic: return "gauss";
        case SchemeKind::Exponential: return "exp";
    }
    return "?";
}

namespace {

// One-point weighted-Gauss node on (ta,tb) for weight t^g: the weighted
// centroid m1/m0, with m_k the closed-form moments.
double one_point_node(double ta, double tb, double g) {
    const double e0 = g + 1.0, e1 = g + 2.0;
    const double m0 = (std::pow(tb, e0) - std::pow(ta, e0)) / e0;
    const double m1 = (std::pow(tb, e1) - std::pow(ta, e1)) / e1;
    return m1 / m0;
}

}  // namespace

QuadratureScheme rectangle_scheme(Beta beta, int n) {
    require_scheme_beta(beta);
    if (n < 1) throw std::invalid_argument("rectangle scheme needs N >= 1");
    const double b = beta.value();
    QuadratureScheme s{SchemeKind::Rectangle, beta};
    s.param_n = n;

    // f1 family: case (i) grading when the weight t^(2b-1) is singular.
    const double theta1 = (2.0 * b - 1.0 < 0.0) ? 1.0 / (2.0 * b) : 1.0;
    const double theta2 = (1.0 - 2.0 * b < 0.0) ? 1.0 / (2.0 - 2.0 * b) : 1.0;
    const GradedPartition p1 = graded_nodes(n, theta1);
    const GradedPartition p2 = graded_nodes(n, theta2);

    const double e1 = 2.0 * b, e2 = 2.0 - 2.0 * b;
    s.t1_nodes.reserve(n);
    s.t1_weights.reserve(n);
    s.t2_nodes.reserve(n);
    s.t2_weights.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double ta = p1.nodes[i], tb = p1.nodes[i + 1];
        s.t1_weights.push_back((std::pow(tb, e1) - std::pow(ta, e1)) / e1);
        s.t1_nodes.push_back(one_point_node(ta, tb, 2.0 * b - 1.0));
    }
    for (int i = 0; i < n; ++i) {
        const double ta = p2.nodes[i], tb = p2.nodes[i + 1];
        s.t2_weights.push_back((std::pow(tb, e2) - std::pow(ta, e2)) / e2);
        s.t2_nodes.push_back(one_point_node(ta, tb, 1.0 - 2.0 * b));
    }
    return s;
}

namespace {

void append_dyadic_family(std::vector<double>& nodes, std::vector<double>& weights,
                          int m, int n, int r, double gamma) {
    // Ascending t: innermost dyadic interval first.
    for (int i = m; i >= 1; --i) {
        const double lo = std::exp2(static_cast<double>(-i));
        const double len = lo / n;
        for (int j = 0; j < n; ++j) {
            const double sa = lo + j * len;
            const double sb = (j + 1 == n) ? 2.0 * lo : lo + (j + 1) * len;
            const WeightedGaussRule rule = weighted_gauss_rule(sa, sb, gamma, r);
            nodes.insert(nodes.end(), rule.nodes.begin(), rule.nodes.end());
            weights.insert(weights.end(), rule.weights.begin(), rule.weights.end());
        }
    }
}

}  // namespace

QuadratureScheme dyadic_gauss_scheme(Beta beta, int n, int r, MChoice m_choice) {
    require_scheme_beta(beta);
    if (n < 2) throw std::invalid_argument("dyadic Gauss scheme needs N >= 2");
    if (r < 1) throw std::invalid_argument("dyadic Gauss scheme needs r >= 1");
    const double b = beta.value();
    const double log2n = std::log2(static_cast<double>(n));

    int m1 = 0, m2 = 0;
    switch (m_choice) {
        case MChoice::Combined:
            m1 = m2 = ceil_snapped(r * log2n / std::min(b, 1.0 - b));
            break;
        case MChoice::PerIntegral:
            m1 = ceil_snapped(r * log2n / b);
            m2 = ceil_snapped(r * log2n / (1.0 - b));
            break;
        case MChoice::PerIntegralPadded:
            // Extra dyadic intervals so the truncated head decays past the
            // per-subinterval Gauss error instead of matching it.
            m1 = static_cast<int>(std::floor(r * (log2n + 1.0) / b + 1e-9)) + 1;
            m2 = static_cast<int>(std::floor(r * (log2n + 1.0) / (1.0 - b) + 1e-9)) + 1;
            break;
    }

    QuadratureScheme s{SchemeKind::GaussDyadic, beta};
    s.param_n = n;
    s.gauss_r = r;
    s.m1 = m1;
    s.m2 = m2;
    append_dyadic_family(s.t1_nodes, s.t1_weights, m1, n, r, 2.0 * b - 1.0);
    append_dyadic_family(s.t2_nodes, s.t2_weights, m2, n, r, 1.0 - 2.0 * b);
    return s;
}

QuadratureScheme exponential_scheme(Beta beta, double k, bool equalize) {
    require_scheme_beta(beta);
    if (!(k > 0.0)) throw std::invalid_argument("exponential scheme needs k > 0");
    const double b = beta.value();

    QuadratureScheme s{SchemeKind::Exponential, beta};
    s.step = k;
    if (equalize) {
        s.m_left = ceil_snapped(kPi * kPi / (4.0 * b * k * k));
        s.n_right = ceil_snapped(kPi * kPi / (4.0 * (1.0 - b) * k * k));
    } else {
        s.n_right = ceil_snapped(1.0 / (k * k));
        s.m_left = s.n_right;
    }
    s.exp_nodes.reserve(s.m_left + s.n_right + 1);
    for (int l = -s.m_left; l <= s.n_right; ++l)
        s.exp_nodes.push_back(l * k);
    return s;
}

namespace {

// e^{2 b y} (1 + e^{2y} lambda)^{-1}, arranged so no intermediate overflows
// for large |y|.
double exp_integrand(double y, double b, double lambda) {
    if (y <= 0.0)
        return std::exp(2.0 * b * y) / (1.0 + std::exp(2.0 * y) * lambda);
    return std::exp(2.0 * (b - 1.0) * y) / (std::exp(-2.0 * y) + lambda);
}

// Unscaled quadrature value of I(lambda) for the node/weight kinds.
double unscaled_sum(const QuadratureScheme& s, double lambda) {
    double s1 = 0.0;
    for (std::size_t j = 0; j < s.t1_nodes.size(); ++j) {
        const double t = s.t1_nodes[j];
        s1 += s.t1_weights[j] / (1.0 + lambda * t * t);
    }
    double s2 = 0.0;
    for (std::size_t j = 0; j < s.t2_nodes.size(); ++j) {
        const double t = s.t2_nodes[j];
        s2 += s.t2_weights[j] / (t * t + lambda);
    }
    return s1 + s2;
}

}  // namespace

double eval_scheme(const QuadratureScheme& scheme, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double b = scheme.beta.value();
    if (scheme.kind == SchemeKind::Exponential) {
        double sum = 0.0;
        for (double y : scheme.exp_nodes) sum += exp_integrand(y, b, lambda);
        return scheme.step / c_beta(scheme.beta) * sum;
    }
    return unscaled_sum(scheme, lambda) / c_beta(scheme.beta);
}

double scalar_error(const QuadratureScheme& scheme, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double b = scheme.beta.value();
    return std::abs(std::pow(lambda, -b) - eval_scheme(scheme, lambda));
}

double integral_error(const QuadratureScheme& scheme, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double b = scheme.beta.value();
    if (scheme.kind == SchemeKind::Exponential)
        return scalar_error(scheme, lambda);
    const double exact = c_beta(scheme.beta) * std::pow(lambda, -b);
    return std::abs(exact - unscaled_sum(scheme, lambda));
}

namespace detail {

std::vector<double> scan_errors_serial(const QuadratureScheme& scheme,
                                       const std::vector<double>& lambdas) {
    std::vector<double> out(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        out[i] = scalar_error(scheme, lambdas[i]);
    return out;
}

std::vector<double> scan_errors(const QuadratureScheme& scheme,
                                const std::vector<double>& lambdas, int threads) {
    std::vector<double> out(lambdas.size());
    const int nt = resolve_threads(threads);
    const long count = static_cast<long>(lambdas.size());
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long i = 0; i < count; ++i)
        out[i] = scalar_error(scheme, lambdas[i]);
    return out;
}

}  // namespace detail

namespace {

using ScanFn = std::vector<double> (*)(const QuadratureScheme&,
                                       const std::vector<double>&, int);

SupErrorReport sup_error_impl(const QuadratureScheme& scheme, double lambda0,
                              int threads, ScanFn scan) {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("lambda0 must be positive");
    const double mu = std::pow(10.0, 1.0 / 20.0);  // 20 points per decade

    SupErrorReport report;
    report.kind = scheme.kind;
    report.beta = scheme.beta.value();
    report.nsys = scheme.nsys();

    double best = -1.0;
    long best_i = 0;
    long scanned = 0;

    // Coarse geometric scan, in blocks so grid evaluations can run in
    // parallel while the stop rule stays sequential.  Stop once lambda has
    // passed 1e8 and the running max has been stationary for 40 points
    // (hard cap at 1e12).
    constexpr int kBlock = 64;
    long i0 = 0;
    bool done = false;
    while (!done) {
        std::vector<double> lambdas(kBlock);
        for (int j = 0; j < kBlock; ++j)
            lambdas[j] = lambda0 * std::pow(10.0, static_cast<double>(i0 + j) / 20.0);
        const std::vector<double> errs = scan(scheme, lambdas, threads);
        for (int j = 0; j < kBlock; ++j) {
            const long i = i0 + j;
            ++scanned;
            if (errs[j] > best) {
                best = errs[j];
                best_i = i;
                report.argmax_lambda = lambdas[j];
            }
            if ((lambdas[j] >= 1e8 && i - best_i > 40) || lambdas[j] > 1e16) {
                done = true;
                break;
            }
        }
        i0 += kBlock;
    }

    // Local refinement: three levels of 21-point grids shrinking 10x around
    // the incumbent argmax.
    double center = report.argmax_lambda;
    double half = center * (mu - 1.0 / mu) / 2.0;
    for (int level = 0; level < 3; ++level) {
        std::vector<double> lambdas;
        lambdas.reserve(21);
        for (int j = 0; j <= 20; ++j) {
            const double lam = center - half + j * (half / 10.0);
            if (lam >= lambda0) lambdas.push_back(lam);
        }
        const std::vector<double> errs = scan(scheme, lambdas, threads);
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            ++scanned;
            if (errs[j] > best) {
                best = errs[j];
                report.argmax_lambda = lambdas[j];
            }
        }
        center = report.argmax_lambda;
        half /= 10.0;
    }

    report.sup_error = best;
    report.lambdas_scanned = scanned;
    return report;
}

}  // namespace

SupErrorReport sup_error(const QuadratureScheme& scheme, double lambda0,
                         int threads) {
    return sup_error_impl(scheme, lambda0, threads, &detail::scan_errors);
}

namespace reference {
SupErrorReport sup_error_serial(const QuadratureScheme& scheme, double lambda0) {
    return sup_error_impl(
        scheme, lambda0, 1,
        [](const QuadratureScheme& s, const std::vector<double>& l, int) {
            return detail::scan_errors_serial(s, l);
        });
}
}  // namespace reference

namespace {

double rect_bound(const QuadratureScheme& s, double lambda) {
    const double b = s.beta.value();
    const double a_const = (2.0 * b - 1.0 < 0.0) ? 2.0 * b : 1.0;
    const double b_const = (1.0 - 2.0 * b < 0.0) ? 2.0 - 2.0 * b : 1.0;
    const double rho_a = mesh_ratio_bound(1.0 / a_const);
    const double rho_b = mesh_ratio_bound(1.0 / b_const);
    const int n = s.param_n;
    return (2.0 + rho_a * kPi) / (n * a_const) +
           (2.0 + rho_b * kPi) / (lambda * n * b_const);
}

double gauss_bound(const QuadratureScheme& s, double lambda) {
    const double b = s.beta.value();
    // Up to the constant C_G, which depends only on r and is not available
    // in closed form; only the N^(-2r) rate is certified.
    return (1.0 / (2.0 * b) + 1.0 / (2.0 * (1.0 - b) * lambda)) *
           std::pow(static_cast<double>(s.param_n), -2.0 * s.gauss_r);
}

double exp_bound(const QuadratureScheme& s, double lambda) {
    const double b = s.beta.value();
    const double k = s.step;
    const double q = kPi * kPi / (4.0 * k);
    const double nds = 1.0 / b + 1.0 / ((1.0 - b) * lambda);
    const double discretization = nds / (2.0 * std::sinh(q)) * std::exp(-q);
    const double left = std::exp(-2.0 * b * k * s.m_left) / (2.0 * b);
    const double right = std::exp(-(2.0 - 2.0 * b) * k * s.n_right) /
                         ((2.0 - 2.0 * b) * lambda);
    return (discretization + left + right) / c_beta(s.beta);
}

}  // namespace

double theoretical_bound(const QuadratureScheme& scheme, double lambda0) {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("lambda0 must be positive");
    switch (scheme.kind) {
        case SchemeKind::Rectangle: return rect_bound(scheme, lambda0);
        case SchemeKind::GaussDyadic: return gauss_bound(scheme, lambda0);
        case SchemeKind::Exponential: return exp_bound(scheme, lambda0);
    }
    throw std::logic_error("unknown scheme kind");
}

double theoretical_bound(const QuadratureScheme& scheme, double lambda0,
                         double mu_max) {
    if (!(mu_max > 0.0)) throw std::invalid_argument("mu_max must be positive");
    const double lambda = std::min(lambda0, 1.0 / mu_max);
    if (scheme.kind == SchemeKind::Exponential) return exp_bound(scheme, lambda);
    return theoretical_bound(scheme, lambda) / c_beta(scheme.beta);
}

}  // namespace fracpow
