#include "mfgcanon/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {
namespace {

constexpr double kBoundaryRelTol = 1e-12;

Provenance combine(Provenance a, Provenance b) {
  return (a == Provenance::kSampled || b == Provenance::kSampled) ? Provenance::kSampled
                                                                  : Provenance::kDeclared;
}

void stamp(Certificate& c) {
  if (c.provenance == Provenance::kSampled) {
    c.notes.push_back("non-rigorous: built from sampled derivative bounds");
  }
  for (const auto& r : c.reasons) {
    if (r.holds && r.boundary) c.boundary = true;
  }
  if (c.boundary) c.notes.push_back("boundary: a deciding inequality holds with equality");
}

}  // namespace

InequalityCheck make_check(std::string name, double lhs, std::string relation, double rhs) {
  InequalityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = std::move(relation);
  c.holds = c.relation == ">=" ? lhs >= rhs : lhs <= rhs;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  c.boundary = std::abs(lhs - rhs) <= kBoundaryRelTol * scale;
  // Rounding must not flip a boundary case to a refusal.
  if (c.boundary) c.holds = true;
  return c;
}

std::string to_string(Verdict v) { return v == Verdict::kGranted ? "granted" : "refused"; }

double l_our(const DerivativeBounds& bounds) {
  bounds.validate();
  return bounds.norm_xmu + 0.25 * bounds.c0 * bounds.norm_pmu * bounds.norm_pmu + bounds.norm_xx;
}

double interval_quadratic(const DerivativeBounds& bounds, double alpha) {
  const double s = bounds.kappa_xp_lower - 0.5 * bounds.norm_pmu;
  return bounds.norm_pp * alpha * alpha - 2.0 * s * alpha + l_our(bounds);
}

AlphaIntervalOutcome alpha_interval(const DerivativeBounds& bounds) {
  bounds.validate();
  if (!(bounds.norm_pp > 0.0)) throw ValidationError("alpha_interval: norm_pp must be positive");
  AlphaIntervalOutcome out;
  out.l_our = l_our(bounds);
  const double pp = bounds.norm_pp;
  const double rhs = 0.5 * bounds.norm_pmu + std::sqrt(pp * out.l_our);
  out.hypothesis = make_check("kappa_xp >= |d_pmu H|/2 + sqrt(|d_pp H| L_our)",
                              bounds.kappa_xp_lower, ">=", rhs);
  if (!out.hypothesis.holds) return out;

  const double s = bounds.kappa_xp_lower - 0.5 * bounds.norm_pmu;
  const double root = std::sqrt(std::max(0.0, s * s - pp * out.l_our));
  AlphaInterval iv;
  iv.alpha_minus = (s - root) / pp;
  iv.alpha_plus = (s + root) / pp;
  iv.alpha_mid = s / pp;
  iv.source = bounds.provenance;
  out.interval = iv;
  return out;
}

double alpha_from_lambda(const LambdaParams& lambda) {
  lambda.validate();
  const double l0 = lambda.l0, l1 = lambda.l1, l2 = lambda.l2, l3 = lambda.l3;
  const double ratio = l1 / (2.0 * l2);
  const double measure_part =
      std::abs(l1) / (2.0 * l2) + std::sqrt(l3 / l2 + l0 * l0 / (4.0 * l2) + ratio * ratio);
  const double local_part =
      std::abs(l0) / 2.0 + std::sqrt(l3 + (l0 / 2.0) * (l0 / 2.0) + l2 * ratio * ratio);
  return std::max(measure_part, local_part);
}

double f_lambda_expanded(const LambdaParams& lambda) {
  lambda.validate();
  const double l0 = lambda.l0, a1 = std::abs(lambda.l1), l2 = lambda.l2, l3 = lambda.l3;
  return 5.0 * a1 / (4.0 * l2) + 1.0 + l3 / (2.0 * l2) + l0 / (4.0 * l2) + 5.0 * l0 / 4.0 +
         l3 / 2.0 + a1 / 4.0;
}

double f_lambda(const LambdaParams& lambda) {
  lambda.validate();
  const double l0 = lambda.l0, a1 = std::abs(lambda.l1), l2 = lambda.l2, l3 = lambda.l3;
  const double grouped = 1.0 + 0.5 * (5.0 * l0 / 2.0 + a1 / 2.0 + l3) +
                         (1.0 / (2.0 * l2)) * (l0 / 2.0 + 5.0 * a1 / 2.0 + l3);
  const double expanded = f_lambda_expanded(lambda);
  if (std::abs(grouped - expanded) > 1e-12 * std::max(1.0, std::abs(grouped))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "f(lambda) forms disagree: " << grouped << " vs " << expanded;
    throw ConsistencyError(msg.str());
  }
  return grouped;
}

Certificate check_prop_last(const DerivativeBounds& bounds_H0, double kappa_A0,
                            const LambdaParams& lambda) {
  bounds_H0.validate();
  lambda.validate();
  if (!bounds_H0.L2) throw ValidationError("check_prop_last: bounds_H0.L2 is required");
  if (!std::isfinite(kappa_A0)) throw ValidationError("check_prop_last: kappa_A0 must be finite");
  const double l2 = *bounds_H0.L2;
  const double k_h = bounds_H0.c0 * bounds_H0.norm_pp;
  const double f = f_lambda(lambda);
  const double branch_h =
      (3.5 + 0.5 * std::sqrt(k_h)) * l2 + std::sqrt(bounds_H0.norm_pp * bounds_H0.norm_xx);
  const double branch_g = (1.5 + f) * l2;

  Certificate c;
  c.provenance = bounds_H0.provenance;
  c.reasons.push_back(make_check("kappa(A0) >= (7/2 + sqrt(K_H)/2) L2 + sqrt(|d_pp H| |d_xx H0|)",
                                 kappa_A0, ">=", branch_h));
  c.reasons.push_back(make_check("kappa(A0) >= (3/2 + f(lambda)) L2", kappa_A0, ">=", branch_g));
  {
    std::ostringstream note;
    note.precision(17);
    note << "K_H = " << k_h << ", f(lambda) = " << f;
    c.notes.push_back(note.str());
  }
  double dominated = std::max({bounds_H0.norm_pp, bounds_H0.norm_pmu, bounds_H0.norm_xmu});
  if (bounds_H0.norm_xp) dominated = std::max(dominated, *bounds_H0.norm_xp);
  if (l2 < dominated) c.notes.push_back("L2 does not dominate the H0 second-derivative norms");
  if (lambda.lambda0_nonpositive()) c.notes.push_back("lambda0 <= 0");
  const bool ok = c.reasons[0].holds && c.reasons[1].holds;
  c.verdict = ok ? Verdict::kGranted : Verdict::kRefused;
  stamp(c);
  return c;
}

Certificate wellposedness_certificate(const DerivativeBounds& h_bounds, double g_semi_alpha,
                                      Provenance g_provenance) {
  if (!std::isfinite(g_semi_alpha)) {
    throw ValidationError("wellposedness_certificate: G semi-monotonicity constant must be finite");
  }
  const AlphaIntervalOutcome iv = alpha_interval(h_bounds);
  Certificate c;
  c.provenance = combine(h_bounds.provenance, g_provenance);
  c.reasons.push_back(iv.hypothesis);
  if (!iv.interval) {
    c.verdict = Verdict::kRefused;
    c.notes.push_back("H_alpha is not certified displacement monotone for any alpha");
    stamp(c);
    return c;
  }
  c.interval = iv.interval;
  c.reasons.push_back(
      make_check("alpha_plus >= G semi-monotonicity constant", iv.interval->alpha_plus, ">=",
                 g_semi_alpha));
  if (c.reasons.back().holds) {
    c.verdict = Verdict::kGranted;
    c.chosen_alpha = std::max(iv.interval->alpha_minus, g_semi_alpha);
  } else {
    c.verdict = Verdict::kRefused;
  }
  stamp(c);
  return c;
}

Certificate wellposedness_certificate(const DerivativeBounds& h_bounds, const LambdaParams& lambda) {
  const double alpha = alpha_from_lambda(lambda);
  Certificate c = wellposedness_certificate(h_bounds, alpha, Provenance::kDeclared);
  std::ostringstream note;
  note.precision(17);
  note << "G semi-monotonicity constant from lambda: alpha_lambda = " << alpha;
  c.notes.insert(c.notes.begin(), note.str());
  return c;
}

}  // namespace mfgcanon
