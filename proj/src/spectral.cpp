#include "fracpow/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace fracpow {

std::span<const double> EigenDecomposition::eigenvector(int i) const {
    return {vectors_.data() + static_cast<std::size_t>(i) * dim_,
            static_cast<std::size_t>(dim_)};
}

Field EigenDecomposition::eigenfield(int mesh_n, int i) const {
    const auto v = eigenvector(i);
    return Field{mesh_n, {v.begin(), v.end()}};
}

EigenDecomposition decompose(const SparseOperatorPair& pair, int dof_cap) {
    const int n = pair.stiffness.rows();
    if (n > dof_cap)
        throw std::invalid_argument("decompose: dof count exceeds the dense cap");

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r) {
        for (int k = pair.stiffness.row_ptr()[r]; k < pair.stiffness.row_ptr()[r + 1]; ++k)
            a(r, pair.stiffness.cols()[k]) = pair.stiffness.values()[k];
        for (int k = pair.mass.row_ptr()[r]; k < pair.mass.row_ptr()[r + 1]; ++k)
            m(r, pair.mass.cols()[k]) = pair.mass.values()[k];
    }

    // Cholesky reduction M = R'R to a standard symmetric problem; Eigen's
    // generalized solver does exactly this and returns M-orthonormal vectors.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        a, m, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("decompose: eigensolver failed");

    EigenDecomposition d;
    d.dim_ = n;
    d.eigenvalues_.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    d.vectors_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < n; ++r)
            d.vectors_[static_cast<std::size_t>(i) * n + r] = es.eigenvectors()(r, i);
    return d;
}

namespace {

std::vector<double> m_coefficients(const EigenDecomposition& d,
                                   const SparseOperatorPair& pair, const Field& f) {
    if (static_cast<int>(f.values.size()) != d.dim())
        throw std::invalid_argument("spectral: field size mismatch");
    const std::vector<double> mf = pair.mass.multiply(f.values);
    std::vector<double> c(d.dim());
    for (int i = 0; i < d.dim(); ++i) {
        const auto psi = d.eigenvector(i);
        double s = 0.0;
        for (int r = 0; r < d.dim(); ++r) s += psi[r] * mf[r];
        c[i] = s;
    }
    return c;
}

}  // namespace

Field apply_power(const EigenDecomposition& decomp, const SparseOperatorPair& pair,
                  double beta_signed, const Field& f) {
    const std::vector<double> c = m_coefficients(decomp, pair, f);
    Field out{f.mesh_n, std::vector<double>(decomp.dim(), 0.0)};
    for (int i = 0; i < decomp.dim(); ++i) {
        const double w = std::pow(decomp.eigenvalues()[i], -beta_signed) * c[i];
        const auto psi = decomp.eigenvector(i);
        for (int r = 0; r < decomp.dim(); ++r) out.values[r] += w * psi[r];
    }
    return out;
}

double dotted_norm(const EigenDecomposition& decomp, const SparseOperatorPair& pair,
                   double s, const Field& f) {
    const std::vector<double> c = m_coefficients(decomp, pair, f);
    double sum = 0.0;
    for (int i = 0; i < decomp.dim(); ++i)
        sum += std::pow(decomp.eigenvalues()[i], s) * c[i] * c[i];
    return std::sqrt(sum);
}

}  // namespace fracpow
