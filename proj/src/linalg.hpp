#pragma once

#include <Eigen/Dense>

namespace flip {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Largest singular value (operator norm of the coordinate matrix).
double operator_norm(const Matrix& a);

/// Sum of singular values. Equals the trace for symmetric PSD input.
double nuclear_norm(const Matrix& a);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& a);

/// Inverse of a symmetric matrix via eigendecomposition, together with the
/// eigenvalue range used for the pivot check.
struct SymmetricInverse {
  Matrix inverse;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Inverts a symmetric matrix, failing when min_eig <= pivot_tol * max_eig.
/// `context` names the step for the error message.
SymmetricInverse invert_symmetric(const Matrix& a, double pivot_tol,
                                  const char* context);

/// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& a);

/// Smallest eigenvalue of a Hermitian complex matrix.
double min_hermitian_eigenvalue(const ComplexMatrix& a);

/// Enforces symmetry lost to rounding: (a + a^T)/2.
Matrix symmetrize(const Matrix& a);

}  // namespace flip
