#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mfgcanon/measures.hpp"
#include "mfgcanon/models.hpp"

namespace mfgcanon {

// Quadratic forms over test directions xi (or v) sampled at the N support
// points of an empirical measure. A direction is a d x N matrix whose column
// i is xi(x_i); it is flattened column-major into a vector of length N d, so
// entry i*d + k is component k at point i. Integrals against mu carry weight
// 1/N per point, double integrals 1/N^2 per pair. All assembled matrices are
// symmetrized before being returned.
//
// A kernel block K(x_i, x_j) = d_x [d_mu F](x_i, x_j) always acts on the
// direction at x_j and is paired with the direction at x_i. This is the
// orientation in which the second-order forms are the second variations of
// the first-order conditions, and in which the anti-monotonicity form and its
// completed square coincide for every model, not only symmetric kernels.

enum class FormKind { kDispG2nd, kDispH2nd, kAlphaDispH, kAntiG, kDispG1st, kDispH1st };

std::string to_string(FormKind kind);

/// lambda = (lambda0, lambda1, lambda2, lambda3) of the anti-monotonicity
/// condition.
struct LambdaParams {
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 1.0;
  double l3 = 0.0;

  /// Throws ValidationError unless all finite, l2 > 0 and l3 >= 0.
  /// A non-positive l0 is accepted.
  void validate() const;
  bool lambda0_nonpositive() const { return !(l0 > 0.0); }
};

struct MonotonicityReport {
  FormKind kind = FormKind::kDispG2nd;
  /// lambda_min for ">= 0" forms, lambda_max for "<= 0" forms; for the
  /// first-order kinds, the worst sampled value of the expression.
  double extremal_eigenvalue = 0.0;
  /// Signed distance to the threshold; positive is on the admissible side.
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Extremal direction (d x N) when failing.
  std::optional<Matrix> witness;
  std::size_t sampled_instances = 1;
  std::vector<std::string> flags;
};

/// 1e-9 * (1 + ||M||_2)
double default_tolerance(const Matrix& form);

/// Second-order displacement form of G: xi^T M xi equals
///   int <d_xx G xi, xi> dmu + int int <d_xmu G(x, x~) xi(x~), xi(x)> dmu dmu.
Matrix assemble_disp_form_G(const CostModel& g, const EmpiricalMeasure& mu);

/// Passes iff lambda_min(M) >= -tol.
MonotonicityReport check_disp_monotone_G(const CostModel& g, const EmpiricalMeasure& mu,
                                         std::optional<double> tol = std::nullopt);

/// Smallest alpha such that G + alpha/2 |x|^2 passes on mu: -N lambda_min(M).
double semi_monotonicity_constant(const CostModel& g, const EmpiricalMeasure& mu);

/// Second-order displacement form of H along the momentum field p (d x N):
///   int int [d_xmu H v(x~) + d_xx H v(x)] . v(x)
///   + 1/4 int |(d_pp H)^{-1/2} int d_pmu H v(x~) dmu(x~)|^2 dmu(x)
/// with every block evaluated at p(x_i). H is displacement monotone when the
/// form is <= 0. Throws ValidationError naming the support point where d_pp H
/// is not positive definite.
Matrix assemble_disp_form_H(const HamiltonianModel& h, const EmpiricalMeasure& mu,
                            const Matrix& p_field);

MonotonicityReport check_disp_monotone_H(const HamiltonianModel& h, const EmpiricalMeasure& mu,
                                         const Matrix& p_field,
                                         std::optional<double> tol = std::nullopt);

/// Form of H_alpha expressed through the blocks of H at p(x_i):
///   int int (d_xmu H - alpha d_pmu H) v(x~) . v(x)
///   + int (d_xx H - 2 alpha d_xp H + alpha^2 d_pp H) v . v
///   + 1/4 int |(d_pp H)^{-1/2} int d_pmu H v dmu|^2.
Matrix assemble_alpha_disp_form(const HamiltonianModel& h, const EmpiricalMeasure& mu,
                                const Matrix& p_field, double alpha);

struct AlphaFormRoutes {
  Matrix direct;       // assemble_alpha_disp_form on H
  Matrix transformed;  // assemble_disp_form_H on H_alpha at p + alpha x
  double max_deviation = 0.0;
};

/// Entrywise agreement threshold between the two routes, relative to
/// max(1, largest entry).
inline constexpr double kRouteTolerance = 1e-10;

/// Both assemblies of the alpha form. Throws ConsistencyError when they differ
/// by more than kRouteTolerance.
AlphaFormRoutes alpha_disp_routes(const HamiltonianPtr& h, const EmpiricalMeasure& mu,
                                  const Matrix& p_field, double alpha);

/// Passes iff lambda_max of the alpha form <= tol (after the route check).
MonotonicityReport check_alpha_disp_H(const HamiltonianPtr& h, const EmpiricalMeasure& mu,
                                      const Matrix& p_field, double alpha,
                                      std::optional<double> tol = std::nullopt);

/// Anti-monotonicity form, term by term:
///   l0 int <d_xx G xi, xi> + l1 int int <d_xmu G(x, x~) xi(x~), xi(x)>
///   + int |d_xx G xi|^2 + l2 int |int d_xmu G xi(x~) dmu(x~)|^2 - l3 int |xi|^2.
Matrix assemble_anti_form(const CostModel& g, const EmpiricalMeasure& mu, const LambdaParams& lambda);

/// Same form after completing both squares:
///   int |d_xx G xi + l0/2 xi|^2 + l2 |int d_xmu G xi dmu + l1/(2 l2) xi|^2
///   - (l3 + (l0/2)^2 + l2 (l1/(2 l2))^2) int |xi|^2.
Matrix assemble_anti_form_completed_square(const CostModel& g, const EmpiricalMeasure& mu,
                                           const LambdaParams& lambda);

/// Passes iff lambda_max <= tol. Also assembles the completed-square form and
/// throws ConsistencyError if the two disagree beyond kRouteTolerance.
MonotonicityReport check_anti_monotone(const CostModel& g, const EmpiricalMeasure& mu,
                                       const LambdaParams& lambda,
                                       std::optional<double> tol = std::nullopt);

/// (1/N) sum_i [d_x G(x_i, mu) - d_x G(y_sigma(i), nu)] . (x_i - y_sigma(i)).
/// Displacement monotonicity requires >= 0.
double check_first_order_G(const CostModel& g, const Coupling& coupling);

/// First-order expression for H with momentum fields p1 on the left support
/// and p2 on the right support (both d x N, indexed by their own measure):
///   -(1/N) sum [d_x H(x, mu, p1(x)) - d_x H(y, nu, p2(y))] . (x - y)
///   +(1/N) sum [d_p H(x, mu, p1(x)) - d_p H(y, nu, p2(y))] . (p1(x) - p2(y)).
/// Requirement: >= 0.
double check_first_order_H(const HamiltonianModel& h, const Coupling& coupling,
                           const Matrix& p1_field, const Matrix& p2_field);

/// Flatten a d x N direction into the N d vector used by the forms.
Vector flatten(const Matrix& direction);
Matrix unflatten(const Vector& v, std::size_t d);

}  // namespace mfgcanon
