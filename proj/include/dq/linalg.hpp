#pragma once
// Exact linear algebra over Gaussian rationals: dense inverse and sparse nullspace.

#include "dq/scalar.hpp"

#include <map>
#include <vector>

namespace dq {

using Matrix = std::vector<std::vector<Scalar>>;

Matrix identity_matrix(int n);
Matrix transpose(const Matrix &a);
Matrix matmul(const Matrix &a, const Matrix &b);
Matrix inverse(const Matrix &a); // throws std::domain_error when singular

using SparseRow = std::map<int, Scalar>;

// reduced row echelon form of the span of the rows; returns pivot columns
std::vector<SparseRow> row_reduce(std::vector<SparseRow> rows, std::vector<int> *pivots = nullptr);
// basis of {x : row . x = 0 for all rows} on columns 0..ncols-1, one vector per free column
std::vector<SparseRow> nullspace(const std::vector<SparseRow> &rows, int ncols);

} // namespace dq
