#pragma once

#include <cstddef>

#include "mfgcanon/models.hpp"

namespace mfgcanon {

/// Parameters of the linear canonical change (x, mu, p) -> (x, mu, p - alpha x).
/// The noise intensities only enter the value shift.
struct TransformTag {
  double alpha = 0.0;
  double beta = 0.0;
  double beta0 = 0.0;

  /// Throws ValidationError unless alpha is finite and beta, beta0 >= 0.
  void validate() const;
};

/// H_alpha(x, mu, p) = H(x, mu, p - alpha x), with every derivative block
/// pushed through analytically (all evaluated at p - alpha x):
///   grad_x   = H_x - alpha H_p
///   hess_xx  = H_xx - 2 alpha sym(H_xp) + alpha^2 H_pp
///   hess_xp  = H_xp - alpha H_pp
///   hess_xmu = H_xmu - alpha H_pmu
/// grad_p, grad_mu, hess_pp and hess_pmu are the base blocks at the shifted
/// momentum. No additive noise constant is included.
HamiltonianPtr transform_hamiltonian(HamiltonianPtr h, double alpha);

/// G_alpha(x, mu) = G(x, mu) + alpha/2 |x|^2. Measure derivatives unchanged.
CostPtr transform_cost(CostPtr g, double alpha);

/// V_alpha - V at (t, x):
///   alpha/2 |x|^2 - (beta0^2 + beta^2) alpha d / 2 (t - T).
/// Throws ValidationError when t lies outside [0, T].
double value_shift(double alpha, double beta, double beta0, std::size_t d, double t, double T,
                   const Vector& x);

}  // namespace mfgcanon
