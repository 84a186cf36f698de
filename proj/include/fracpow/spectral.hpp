#pragma once

#include <span>
#include <vector>

#include "fracpow/fem.hpp"

namespace fracpow {

/// Generalized eigenpairs A psi = lambda M psi over interior dofs,
/// M-orthonormal eigenvectors, eigenvalues ascending (eigenvalues of L_h;
/// the eigenvalues of T_h are their inverses).  Dense verification path
/// with a dof cap; not meant for production sizes.
class EigenDecomposition {
public:
    int dim() const { return dim_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    /// Column i of the eigenvector matrix.
    std::span<const double> eigenvector(int i) const;
    Field eigenfield(int mesh_n, int i) const;

    std::vector<double> eigenvalues_;
    std::vector<double> vectors_;  // column-major dim x dim
    int dim_ = 0;
};

EigenDecomposition decompose(const SparseOperatorPair& pair, int dof_cap = 5000);

/// T_h^beta f = sum_i lambda_i^(-beta) <f,psi_i>_M psi_i; negative exponents
/// give positive powers of L_h.
Field apply_power(const EigenDecomposition& decomp, const SparseOperatorPair& pair,
                  double beta_signed, const Field& f);

/// Discrete dotted norm (sum_i lambda_i^s <f,psi_i>_M^2)^(1/2).
double dotted_norm(const EigenDecomposition& decomp, const SparseOperatorPair& pair,
                   double s, const Field& f);

}  // namespace fracpow
