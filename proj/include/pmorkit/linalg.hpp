#pragma once

#include <Eigen/Dense>

namespace pmk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin singular value decomposition a = left * diag(singular_values) * right^T
/// with r = min(rows, cols) retained triplets.
struct ThinSvd {
  Matrix left;             // rows x r, orthonormal columns
  Vector singular_values;  // length r, sorted descending, >= 0
  Matrix right;            // cols x r, orthonormal columns
};

/// Deterministic thin SVD. The largest-magnitude entry of every left singular
/// vector is made positive so bases are reproducible across platforms.
ThinSvd thin_svd(const Matrix& a);

/// Direct dense solve of a*x = b for square, numerically nonsingular a.
Vector solve_dense(const Matrix& a, const Vector& b);

/// SVD-based orthonormalization. Result spans the same columns as the input;
/// the input must have full column rank to tolerance.
Matrix orthonormalize(const Matrix& a);

/// Largest principal angle (rad) between the column spans of two matrices
/// with orthonormal columns and equal column counts. Uses the sine-based
/// formulation so angles near zero are resolved to machine precision.
double max_principal_angle(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& a);

}  // namespace pmk
