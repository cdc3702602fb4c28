#pragma once

#include <Eigen/Dense>

namespace mfgcanon {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// (A + A^T) / 2
Matrix symmetric_part(const Matrix& a);

double lambda_min(const Matrix& symmetric);
double lambda_max(const Matrix& symmetric);

/// Largest singular value.
double spectral_norm(const Matrix& a);

/// S^{-1/2} for symmetric positive definite S. Throws ValidationError when
/// the smallest eigenvalue is below `floor`.
Matrix inverse_sqrt(const Matrix& symmetric, double floor);

bool all_finite(const Matrix& a);

}  // namespace mfgcanon
