#pragma once

#include <string>
#include <vector>

namespace fracpow {

/// Fractional exponent, restricted to the open interval (0,1).
class Beta {
public:
    explicit Beta(double value);
    double value() const { return value_; }

private:
    double value_;
};

/// Normalization constant of the resolvent representation,
/// c_beta(b) = pi / (2 sin(pi b)).  Symmetric under b -> 1-b.
double c_beta(Beta beta);

/// Upper bound rho(theta) on the ratio of consecutive interval lengths of
/// the graded partition t_i = (i/N)^theta: 1 for theta <= 1, 2^theta - 1
/// otherwise.
double mesh_ratio_bound(double theta);

struct GradedPartition {
    double theta = 1.0;
    int n = 0;
    std::vector<double> nodes;  // size n+1, t_0 = 0, t_n = 1, increasing
};

/// Graded partition of [0,1] with nodes t_i = (i/N)^theta.
GradedPartition graded_nodes(int n, double theta);

struct WeightedGaussRule {
    double a = 0.0;
    double b = 1.0;
    double gamma = 0.0;
    std::vector<double> nodes;    // interior to (a,b), ascending
    std::vector<double> weights;  // positive, sum = integral of t^gamma
};

/// r-point Gaussian rule on (a,b) for the weight w(t) = t^gamma, gamma > -1.
/// Exact for polynomials of degree <= 2r-1 against the weight.  Built from
/// closed-form moments via the Chebyshev recurrence and the Jacobi-matrix
/// eigenproblem.  Throws on an ill-conditioned moment problem instead of
/// returning garbage.
WeightedGaussRule weighted_gauss_rule(double a, double b, double gamma, int r);

enum class SchemeKind { Rectangle, GaussDyadic, Exponential };

enum class MChoice {
    Combined,           // one M for both integrals
    PerIntegral,        // M1, M2 chosen per integral
    PerIntegralPadded,  // per integral with extra margin, M = floor(r*log2(2N)/b) + 1,
                        // pushing the dropped head [0, 2^-M] well below the
                        // per-subinterval error instead of level with it
};

/// A fully materialized quadrature rule for lambda^(-beta).
///
/// Rectangle/GaussDyadic store node/weight lists for the two integral
/// families (arguments of f1 and f2).  Exponential stores the y_l grid of
/// the log-transformed integral together with the step k and the one-sided
/// counts.
struct QuadratureScheme {
    QuadratureScheme(SchemeKind k, Beta b) : kind(k), beta(b) {}

    SchemeKind kind;
    Beta beta;

    std::vector<double> t1_nodes, t1_weights;
    std::vector<double> t2_nodes, t2_weights;

    std::vector<double> exp_nodes;  // y_l = l*k, l = -m_left..n_right
    double step = 0.0;              // k
    int m_left = 0;
    int n_right = 0;

    int param_n = 0;  // N (Rectangle: intervals per family; Gauss: uniform
                      // subintervals per dyadic interval)
    int gauss_r = 0;  // points per subinterval (GaussDyadic)
    int m1 = 0, m2 = 0;  // dyadic interval counts (GaussDyadic)

    int nsys() const;
    std::string label() const;  // "rect" / "gauss" / "exp"
};

/// Graded one-point rule of 2N resolvent nodes.  The in-interval node is the
/// one-point weighted-Gauss node of the subinterval.
QuadratureScheme rectangle_scheme(Beta beta, int n);

/// Dyadic partition, N uniform subintervals per dyadic interval, r-point
/// weighted Gauss per subinterval; the interval [0, 2^-M] is dropped.
QuadratureScheme dyadic_gauss_scheme(Beta beta, int n, int r,
                                     MChoice m_choice = MChoice::PerIntegral);

/// Trapezoid rule in y = ln t.  equalize=true uses the one-sided counts
/// M = ceil(pi^2/(4 b k^2)), N = ceil(pi^2/(4 (1-b) k^2)); otherwise the
/// symmetric grid l = -N..N with N = ceil(1/k^2).
QuadratureScheme exponential_scheme(Beta beta, double k, bool equalize = true);

/// Scheme approximation of lambda^(-beta) (all kinds include their
/// normalization).
double eval_scheme(const QuadratureScheme& scheme, double lambda);

/// Quadrature error |lambda^(-beta) - eval_scheme(lambda)|, the quantity the
/// error-sweep tables report for all three kinds.
double scalar_error(const QuadratureScheme& scheme, double lambda);

/// Quadrature error of the unnormalized integral I(lambda), the quantity the
/// closed-form ceilings bound for the node/weight kinds; coincides with
/// scalar_error for the exponential kind (whose ceiling is already
/// normalized).
double integral_error(const QuadratureScheme& scheme, double lambda);

struct SupErrorReport {
    double sup_error = 0.0;
    double argmax_lambda = 0.0;
    long lambdas_scanned = 0;
    SchemeKind kind = SchemeKind::Rectangle;
    double beta = 0.0;
    int nsys = 0;
};

/// Approximates sup_{lambda >= lambda0} scalar_error by a geometric coarse
/// scan (20 points per decade, continued until lambda >= 1e8 and the running
/// max has been stationary for 40 points) followed by three levels of local
/// 21-point grid refinement around the incumbent argmax.  Grid evaluations
/// run in parallel; the reduction is order-independent.
SupErrorReport sup_error(const QuadratureScheme& scheme, double lambda0 = 10.0,
                         int threads = 0);

/// Closed-form error ceiling at lambda0 (the bounds are decreasing in
/// lambda), in the same normalization as scalar_error.  For GaussDyadic the
/// bound is reported up to its implicit constant C_G.
double theoretical_bound(const QuadratureScheme& scheme, double lambda0);

/// Operator-level ceiling on ||T_h^beta - Q_h^beta||: mu_max is the largest
/// eigenvalue of T_h, i.e. 1/lambda_min(L_h).  GaussDyadic again up to C_G.
double theoretical_bound(const QuadratureScheme& scheme, double lambda0,
                         double mu_max);

namespace reference {
/// Straight-loop implementation of sup_error, kept as the serial reference;
/// bit-identical to the parallel version.
SupErrorReport sup_error_serial(const QuadratureScheme& scheme,
                                double lambda0 = 10.0);
}  // namespace reference

namespace detail {
/// Error values on an explicit lambda grid (the parallel kernel behind
/// sup_error; exposed for the benchmark).
std::vector<double> scan_errors(const QuadratureScheme& scheme,
                                const std::vector<double>& lambdas,
                                int threads);
std::vector<double> scan_errors_serial(const QuadratureScheme& scheme,
                                       const std::vector<double>& lambdas);
}  // namespace detail

}  // namespace fracpow
