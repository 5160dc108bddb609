#pragma once

#include <optional>
#include <vector>

#include "opkern/field.hpp"

namespace opk {

/* Dense row-major matrix over an exact field, for small eliminations. */
class DenseMatrix {
public:
    DenseMatrix(Field field, int rows, int cols)
        : field_(field), rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                Scalar::of(field, 0)) {}

    const Field& field() const { return field_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Scalar& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Scalar& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

private:
    Field field_;
    int rows_, cols_;
    std::vector<Scalar> data_;
};

/* In-place reduced row echelon form; returns the pivot columns in order. */
std::vector<int> rref(DenseMatrix& m);

int rank(DenseMatrix m);

/* Canonical nullspace basis: one vector per free column, with value 1 at its
 * free column and 0 at the other free columns. */
std::vector<std::vector<Scalar>> nullspace(const DenseMatrix& m);

/* One solution of A x = b, if any. */
std::optional<std::vector<Scalar>> solve_linear(const DenseMatrix& a, const std::vector<Scalar>& b);

/* Dimension of the affine solution set of A x = b: -1 if empty, otherwise
 * the number of free columns. */
int solution_space_dim(const DenseMatrix& a, const std::vector<Scalar>& b);

/* Inverse of a square matrix, if invertible. */
std::optional<DenseMatrix> inverse(const DenseMatrix& m);

}  // namespace opk
