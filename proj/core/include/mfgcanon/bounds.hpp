#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "mfgcanon/models.hpp"
#include "mfgcanon/sampling.hpp"

namespace mfgcanon {

enum class Provenance { kDeclared, kSampled };

std::string to_string(Provenance p);

/// Scalar bounds on the second derivatives of H used by the certificates.
/// Norms are suprema of matrix 2-norms; kappa_xp_lower is the infimum of
/// lambda_min(sym(d_xp H)).
struct DerivativeBounds {
  double c0 = 1.0;
  double kappa_xp_lower = 0.0;
  double norm_pp = 1.0;
  double norm_xx = 0.0;
  double norm_pmu = 0.0;
  double norm_xmu = 0.0;
  std::optional<double> norm_xp;
  /// Uniform bound on |d_xp H0|, |d_pp H0|, |d_xmu H0|, |d_pmu H0|.
  std::optional<double> L2;
  Provenance provenance = Provenance::kDeclared;

  /// Throws ValidationError on c0 <= 0, negative or non-finite norms, or
  /// norm_pp < 1/c0. Whether L2 dominates the norms is reported by the
  /// certificate that uses it, not enforced here.
  void validate() const;
};

struct EvaluationPoint {
  Vector x;
  EmpiricalMeasure mu;
  Vector p;
};

using PointSampler = std::function<EvaluationPoint()>;

/// Draws x, p in R^d and an n-point measure from `sampler`.
PointSampler point_sampler(InstanceSampler& sampler, std::size_t n_points, std::size_t d);

/// Sampled (heuristic) estimate of the bounds: minima and maxima over the
/// drawn points, including every support point of each drawn measure for
/// the kernels. A declared c0 is checked on every sample and kept; otherwise
/// c0 = 1 / min lambda_min(d_pp H).
DerivativeBounds estimate_bounds(const HamiltonianModel& model, const PointSampler& sampler,
                                 std::size_t n_samples);

/// min over samples of d_p H . p - H. Optional growth check, not enforced.
double sampled_legendre_gap(const HamiltonianModel& model, const PointSampler& sampler,
                            std::size_t n_samples);

}  // namespace mfgcanon
