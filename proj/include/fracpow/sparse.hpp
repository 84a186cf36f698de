#pragma once

#include <span>
#include <vector>

namespace fracpow {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Square CSR matrix.  Duplicate triplets are summed on construction.
class SparseMatrix {
public:
    SparseMatrix() = default;
    static SparseMatrix from_triplets(int n, std::vector<Triplet> triplets);

    int rows() const { return n_; }
    long nnz() const { return static_cast<long>(values_.size()); }

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    std::vector<double> diagonal() const;
    double value_at(int i, int j) const;  // 0 if not stored

    bool same_pattern(const SparseMatrix& other) const;
    /// ca*A + cb*B for matrices with identical patterns.
    static SparseMatrix combine(double ca, const SparseMatrix& a, double cb,
                                const SparseMatrix& b);

    /// max_ij |A_ij - A_ji| over the stored pattern.
    double symmetry_defect() const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& cols() const { return cols_; }
    const std::vector<double>& values() const { return values_; }

private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> cols_;
    std::vector<double> values_;
};

}  // namespace fracpow
