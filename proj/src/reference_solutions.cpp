#include "fracpow/reference_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracpow/parallel.hpp"

namespace fracpow {

namespace {
constexpr double kPi = std::numbers::pi;

// cos(m pi / 2) for integer m, exactly.
int cos_half_pi(int m) {
    switch (m & 3) {
        case 0: return 1;
        case 2: return -1;
        default: return 0;
    }
}

// Integrals of sin(m pi x) over the left and right half of [0,1].
double sine_half_left(int m) {
    return (1.0 - cos_half_pi(m)) / (m * kPi);
}
double sine_half_right(int m) {
    const int cos_pi = (m & 1) ? -1 : 1;
    return (cos_half_pi(m) - cos_pi) / (m * kPi);
}

}  // namespace

double checkerboard(double x, double y) {
    return (x - 0.5) * (y - 0.5) > 0.0 ? 1.0 : 0.0;
}

double checkerboard_sine_coeff(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("sine coefficient needs m,n >= 1");
    return 4.0 * (sine_half_left(m) * sine_half_left(n) +
                  sine_half_right(m) * sine_half_right(n));
}

SineSeries exact_solution(Beta beta, int modes) {
    if (modes < 1) throw std::invalid_argument("exact_solution needs modes >= 1");
    SineSeries s;
    s.beta = beta.value();
    s.modes = modes;
    s.coeff.resize(static_cast<std::size_t>(modes) * modes);
    for (int m = 1; m <= modes; ++m) {
        for (int n = 1; n <= modes; ++n) {
            const double lambda = kPi * kPi * (static_cast<double>(m) * m +
                                               static_cast<double>(n) * n);
            s.coeff[static_cast<std::size_t>(m - 1) * modes + (n - 1)] =
                std::pow(lambda, -s.beta) * checkerboard_sine_coeff(m, n);
        }
    }
    s.tail_bound = series_tail_bound(beta, modes);
    return s;
}

double evaluate(const SineSeries& series, double x, double y) {
    const int modes = series.modes;
    // sin(m pi x) by the stable two-term recurrence.
    std::vector<double> sx(modes + 1), sy(modes + 1);
    const double cx = 2.0 * std::cos(kPi * x), cy = 2.0 * std::cos(kPi * y);
    sx[0] = 0.0;
    sy[0] = 0.0;
    if (modes >= 1) {
        sx[1] = std::sin(kPi * x);
        sy[1] = std::sin(kPi * y);
    }
    for (int m = 2; m <= modes; ++m) {
        sx[m] = cx * sx[m - 1] - sx[m - 2];
        sy[m] = cy * sy[m - 1] - sy[m - 2];
    }
    double sum = 0.0;
    for (int m = 1; m <= modes; ++m) {
        const double* row = &series.coeff[static_cast<std::size_t>(m - 1) * modes];
        double inner = 0.0;
        for (int n = 1; n <= modes; ++n) inner += row[n - 1] * sy[n];
        sum += sx[m] * inner;
    }
    return sum;
}

namespace {

std::vector<double> distinct_sorted(std::span<const std::array<double, 2>> points,
                                    int axis) {
    std::vector<double> vals(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) vals[i] = points[i][axis];
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double v : vals)
        if (out.empty() || v - out.back() > 1e-12) out.push_back(v);
    return out;
}

std::size_t lookup(const std::vector<double>& sorted, double v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v - 1e-12);
    return static_cast<std::size_t>(it - sorted.begin());
}

std::vector<double> evaluate_impl(const SineSeries& series,
                                  std::span<const std::array<double, 2>> points,
                                  int threads, bool parallel) {
    const int modes = series.modes;
    const std::vector<double> xs = distinct_sorted(points, 0);
    const std::vector<double> ys = distinct_sorted(points, 1);
    const long ny = static_cast<long>(ys.size());

    // Contract the coefficient matrix against the distinct y values:
    // g[m][j] = sum_n a_mn sin(n pi y_j).
    std::vector<double> g(static_cast<std::size_t>(modes) * ys.size());
    const int nt = parallel ? resolve_threads(threads) : 1;
#pragma omp parallel for schedule(static) num_threads(nt) if (parallel)
    for (long j = 0; j < ny; ++j) {
        std::vector<double> sy(modes + 1);
        const double cy = 2.0 * std::cos(kPi * ys[j]);
        sy[0] = 0.0;
        sy[1] = std::sin(kPi * ys[j]);
        for (int n = 2; n <= modes; ++n) sy[n] = cy * sy[n - 1] - sy[n - 2];
        for (int m = 1; m <= modes; ++m) {
            const double* row = &series.coeff[static_cast<std::size_t>(m - 1) * modes];
            double inner = 0.0;
            for (int n = 1; n <= modes; ++n) inner += row[n - 1] * sy[n];
            g[static_cast<std::size_t>(m - 1) * ys.size() + j] = inner;
        }
    }

    std::vector<double> out(points.size());
    const long npts = static_cast<long>(points.size());
#pragma omp parallel for schedule(static) num_threads(nt) if (parallel)
    for (long i = 0; i < npts; ++i) {
        const double x = xs[std::min(lookup(xs, points[i][0]), xs.size() - 1)];
        const std::size_t yj = std::min(lookup(ys, points[i][1]), ys.size() - 1);
        double s_prev = 0.0, s_cur = std::sin(kPi * x);
        const double cx = 2.0 * std::cos(kPi * x);
        double sum = 0.0;
        for (int m = 1; m <= modes; ++m) {
            sum += s_cur * g[static_cast<std::size_t>(m - 1) * ys.size() + yj];
            const double s_next = cx * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = s_next;
        }
        out[i] = sum;
    }
    return out;
}

}  // namespace

std::vector<double> evaluate(const SineSeries& series,
                             std::span<const std::array<double, 2>> points,
                             int threads) {
    return evaluate_impl(series, points, threads, true);
}

namespace reference {
std::vector<double> evaluate_serial(const SineSeries& series,
                                    std::span<const std::array<double, 2>> points) {
    return evaluate_impl(series, points, 1, false);
}
}  // namespace reference

double series_l2_norm(const SineSeries& series) {
    double s = 0.0;
    for (double a : series.coeff) s += a * a;
    return std::sqrt(s / 4.0);
}

double series_tail_bound(Beta beta, int modes) {
    const double b = beta.value();
    const int big = std::max(8 * modes, 2048);
    // Exact coefficients out to `big` in each direction...
    double tail_sq = 0.0;
    for (int m = 1; m <= big; ++m) {
        const bool m_out = m > modes;
        for (int n = 1; n <= big; ++n) {
            if (!m_out && n <= modes) continue;
            if ((m & 1) != (n & 1)) continue;  // mixed parity coefficients vanish
            const double c = checkerboard_sine_coeff(m, n);
            if (c == 0.0) continue;
            const double lambda = kPi * kPi * (static_cast<double>(m) * m +
                                               static_cast<double>(n) * n);
            const double a = std::pow(lambda, -b) * c;
            tail_sq += a * a / 4.0;
        }
    }
    // ...plus an integral envelope for everything beyond: |c_mn| <= 32/(pi^2 m n)
    // and lambda^(-2b) <= (pi m)^(-4b).
    const double p = 1.0 + 4.0 * b;
    const double remainder = 2.0 * (512.0 / (6.0 * kPi * kPi)) * std::pow(kPi, -4.0 * b) *
                             std::pow(static_cast<double>(big), -p) / p;
    return std::sqrt(tail_sq + remainder);
}

}  // namespace fracpow
