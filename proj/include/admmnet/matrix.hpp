#pragma once

#include <Eigen/Dense>

#include <string>

namespace admmnet {

// Dense double-precision matrix: the one value type shared by data blocks,
// weights, slack variables and multipliers.
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

std::string shape_str(const Matrix& a);

bool all_finite(const Matrix& a);

// A * B. Throws std::invalid_argument when inner dimensions disagree.
Matrix matmul(const Matrix& a, const Matrix& b);

// Solves A X = B for symmetric positive definite A via Cholesky.
// Throws std::invalid_argument on shape or symmetry violations and
// std::runtime_error naming the failing pivot when A is not positive
// definite.
Matrix spd_solve(const Matrix& a, const Matrix& b);

// alpha * x + y.
Matrix axpy(double alpha, const Matrix& x, const Matrix& y);

Matrix transpose(const Matrix& a);

// Frobenius inner product sum_ij a_ij * b_ij.
double frob_inner(const Matrix& a, const Matrix& b);

double frob_norm(const Matrix& a);

// Element-wise min(max(a, lo), hi); hi may be +infinity.
Matrix clamp(const Matrix& a, double lo, double hi);

// Adds the 1 x n row vector b to every row of the m x n matrix a
// (the usual "e * b" rank-one bias term, kept implicit).
Matrix row_broadcast_add(const Matrix& a, const Matrix& b);

}  // namespace admmnet
