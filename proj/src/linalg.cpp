#include "linalg.hpp"

#include <string>

#include "errors.hpp"

namespace flip {

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double nuclear_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

SymmetricInverse invert_symmetric(const Matrix& a, double pivot_tol,
                                  const char* context) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  if (es.info() != Eigen::Success)
    throw numeric_error(std::string(context) + ": eigendecomposition failed");
  const Vector& ev = es.eigenvalues();
  SymmetricInverse out;
  out.min_eigenvalue = ev(0);
  out.max_eigenvalue = ev(ev.size() - 1);
  if (out.max_eigenvalue <= 0.0 ||
      out.min_eigenvalue <= pivot_tol * out.max_eigenvalue)
    throw numeric_error(std::string(context) +
                        ": matrix numerically singular (min eigenvalue " +
                        std::to_string(out.min_eigenvalue) + ")");
  out.inverse = es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
                es.eigenvectors().transpose();
  return out;
}

Vector symmetric_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_hermitian_eigenvalue(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace flip
