#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfgcanon/bounds.hpp"
#include "mfgcanon/monotonicity.hpp"

namespace mfgcanon {

/// Range of alpha for which H_alpha is certified displacement monotone.
struct AlphaInterval {
  double alpha_minus = 0.0;
  double alpha_plus = 0.0;
  double alpha_mid = 0.0;
  Provenance source = Provenance::kDeclared;
};

/// One evaluated inequality `lhs relation rhs`.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  std::string relation = ">=";
  double rhs = 0.0;
  bool holds = false;
  /// Holds with equality up to rounding.
  bool boundary = false;
};

InequalityCheck make_check(std::string name, double lhs, std::string relation, double rhs);

enum class Verdict { kGranted, kRefused };

std::string to_string(Verdict v);

struct Certificate {
  Verdict verdict = Verdict::kRefused;
  std::optional<double> chosen_alpha;
  std::optional<AlphaInterval> interval;
  std::vector<InequalityCheck> reasons;
  std::vector<std::string> notes;
  Provenance provenance = Provenance::kDeclared;
  /// Some deciding inequality held only with equality.
  bool boundary = false;

  bool granted() const { return verdict == Verdict::kGranted; }
};

/// |d_xmu H| + c0/4 |d_pmu H|^2 + |d_xx H|
double l_our(const DerivativeBounds& bounds);

struct AlphaIntervalOutcome {
  std::optional<AlphaInterval> interval;
  InequalityCheck hypothesis;
  double l_our = 0.0;
};

/// Evaluates kappa >= |d_pmu H|/2 + sqrt(|d_pp H| L_our). When it holds,
///   alpha_pm = [s +- sqrt(s^2 - |d_pp H| L_our)] / |d_pp H|,  s = kappa - |d_pmu H|/2,
/// and alpha_mid = s / |d_pp H|. A failed hypothesis is reported, not thrown.
AlphaIntervalOutcome alpha_interval(const DerivativeBounds& bounds);

/// |d_pp H| a^2 - 2 (kappa - |d_pmu H|/2) a + L_our, whose roots bound the interval.
double interval_quadratic(const DerivativeBounds& bounds, double alpha);

/// Smallest semi-monotonicity constant implied by lambda-anti-monotonicity:
/// the larger of the two bounds on the d_xmu and d_xx parts.
double alpha_from_lambda(const LambdaParams& lambda);

/// 1 + (5 l0/2 + |l1|/2 + l3)/2 + (l0/2 + 5|l1|/2 + l3)/(2 l2). Also evaluates
/// the term-by-term sum and throws ConsistencyError if the two disagree.
double f_lambda(const LambdaParams& lambda);

/// 5|l1|/(4 l2) + 1 + l3/(2 l2) + l0/(4 l2) + 5 l0/4 + l3/2 + |l1|/4
double f_lambda_expanded(const LambdaParams& lambda);

/// Hypothesis check for H = <A0 x, p> + H0 with lambda-anti-monotone G.
/// Grants iff kappa(A0) >= max{(7/2 + sqrt(K_H)/2) L2 + sqrt(|d_pp H| |d_xx H0|),
/// (3/2 + f(lambda)) L2} with K_H = c0 |d_pp H|. Requires bounds_H0.L2.
Certificate check_prop_last(const DerivativeBounds& bounds_H0, double kappa_A0,
                            const LambdaParams& lambda);

/// Combines the alpha-interval of H with a semi-monotonicity constant of G.
/// Grants iff the interval meets [g_semi_alpha, inf); the chosen alpha is
/// max(alpha_minus, g_semi_alpha).
Certificate wellposedness_certificate(const DerivativeBounds& h_bounds, double g_semi_alpha,
                                      Provenance g_provenance = Provenance::kDeclared);

/// As above with g_semi_alpha = alpha_from_lambda(lambda).
Certificate wellposedness_certificate(const DerivativeBounds& h_bounds, const LambdaParams& lambda);

}  // namespace mfgcanon
