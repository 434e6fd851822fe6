#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cms2/scalar.hpp"

namespace cms2 {

// Dense matrix of Scalars with exact elimination helpers.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Scalar& at(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    std::vector<Scalar> mul(const std::vector<Scalar>& v) const;

    // exact determinant by field Gaussian elimination
    Scalar det_gauss() const;
    // exact determinant by Bareiss fraction-free elimination (independent route)
    Scalar det_bareiss() const;

    std::size_t rank() const;
    // basis of the right nullspace
    std::vector<std::vector<Scalar>> nullspace() const;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Scalar> a_;
};

// Sparse exact solver: rows are maps column->Scalar. Solves A x = b; returns
// nullopt when inconsistent. Free variables are set to zero. Column order
// controls pivoting preference (lower index preferred).
struct SparseRow {
    std::vector<std::pair<std::size_t, Scalar>> entries; // sorted by column
    Scalar rhs;
};

std::optional<std::vector<Scalar>> sparse_solve(std::vector<SparseRow> rows,
                                                std::size_t ncols);

} // namespace cms2
