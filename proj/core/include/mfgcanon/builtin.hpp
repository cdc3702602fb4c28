#pragma once

#include <cstddef>

#include "mfgcanon/models.hpp"

namespace mfgcanon {

/// H = 1/2 <P p, p> + 1/2 <Q x, x> + <R x, p>.
/// Only the symmetric parts of P and Q enter. When `declare_convexity` is set,
/// P must be positive definite and c0 = 1 / lambda_min(P) is declared.
HamiltonianPtr make_h_lq(const Matrix& P, const Matrix& Q, const Matrix& R,
                         bool declare_convexity = true);

/// H = 1/2 |p|^2 + c p . m(mu) + q/2 |x - m(mu)|^2, with m the mean of mu.
HamiltonianPtr make_h_mf(std::size_t d, double c, double q);

/// H = base + alpha p . x
HamiltonianPtr make_h_pxc(HamiltonianPtr base, double alpha);

/// G = a/2 |x|^2 + b x . m(mu) + e/2 |x - m(mu)|^2
CostPtr make_g_quad(std::size_t d, double a, double b, double e);

/// G = -a/2 |x|^2 with a > 0.
CostPtr make_g_anti(std::size_t d, double a);

}  // namespace mfgcanon
