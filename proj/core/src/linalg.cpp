#include "mfgcanon/linalg.hpp"

#include <sstream>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {

Matrix symmetric_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double lambda_min(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double lambda_max(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(symmetric.rows() - 1);
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix inverse_sqrt(const Matrix& symmetric, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  const Vector& ev = solver.eigenvalues();
  if (ev(0) < floor) {
    std::ostringstream msg;
    msg << "matrix is not positive definite: smallest eigenvalue " << ev(0)
        << " below floor " << floor;
    throw ValidationError(msg.str());
  }
  const Matrix& q = solver.eigenvectors();
  return q * ev.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace mfgcanon
