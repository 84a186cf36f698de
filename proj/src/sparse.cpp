#include "fracpow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracpow {

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& x, const Triplet& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    SparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col) {
            sum += triplets[j].value;
            ++j;
        }
        m.cols_.push_back(triplets[i].col);
        m.values_.push_back(sum);
        ++m.row_ptr_[triplets[i].row + 1];
        i = j;
    }
    for (int r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < n_; ++r) {
        double acc = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += values_[k] * x[cols_[k]];
        y[r] = acc;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (int r = 0; r < n_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            if (cols_[k] == r) d[r] = values_[k];
    return d;
}

double SparseMatrix::value_at(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (cols_[k] == j) return values_[k];
    return 0.0;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
    return n_ == other.n_ && row_ptr_ == other.row_ptr_ && cols_ == other.cols_;
}

SparseMatrix SparseMatrix::combine(double ca, const SparseMatrix& a, double cb,
                                   const SparseMatrix& b) {
    if (!a.same_pattern(b))
        throw std::invalid_argument("combine requires identical sparsity patterns");
    SparseMatrix m = a;
    for (std::size_t k = 0; k < m.values_.size(); ++k)
        m.values_[k] = ca * a.values_[k] + cb * b.values_[k];
    return m;
}

double SparseMatrix::symmetry_defect() const {
    double defect = 0.0;
    for (int r = 0; r < n_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            defect = std::max(defect, std::abs(values_[k] - value_at(cols_[k], r)));
    return defect;
}

}  // namespace fracpow
