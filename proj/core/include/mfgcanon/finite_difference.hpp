#pragma once

#include "mfgcanon/models.hpp"

namespace mfgcanon {

/// Default base step. The step actually used for a coordinate with value a is
/// h * (1 + |a|).
inline constexpr double kDefaultFdStep = 1e-5;

/// Derivative bundle of H computed from value evaluations only.
///
/// Central differences in x and p. Wasserstein kernels use the particle
/// representation d_mu F(mu, x_j) ~ N [F(x_j + s e_k) - F(x_j - s e_k)] / (2 s),
/// and the mixed kernels difference that once more in x or p. Throws
/// NumericalError if any evaluation is non-finite.
HamiltonianJet fd_derivatives(const HamiltonianModel& model, const Vector& x,
                              const EmpiricalMeasure& mu, const Vector& p,
                              double h = kDefaultFdStep);

CostJet fd_derivatives(const CostModel& model, const Vector& x, const EmpiricalMeasure& mu,
                       double h = kDefaultFdStep);

}  // namespace mfgcanon
