#include "mfgcanon/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {

std::string to_string(Provenance p) { return p == Provenance::kDeclared ? "declared" : "sampled"; }

void DerivativeBounds::validate() const {
  auto bad = [](const std::string& what) { throw ValidationError("derivative bounds: " + what); };
  if (!(c0 > 0.0) || !std::isfinite(c0)) bad("c0 must be positive and finite");
  if (!std::isfinite(kappa_xp_lower)) bad("kappa_xp_lower must be finite");
  for (double v : {norm_pp, norm_xx, norm_pmu, norm_xmu}) {
    if (!(v >= 0.0) || !std::isfinite(v)) bad("norms must be finite and non-negative");
  }
  if (norm_xp && (!(*norm_xp >= 0.0) || !std::isfinite(*norm_xp))) bad("norm_xp must be >= 0");
  // Relative slack for round-tripped decimal input.
  if (norm_pp < (1.0 / c0) * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "norm_pp = " << norm_pp << " is below 1/c0 = " << 1.0 / c0;
    bad(msg.str());
  }
  if (L2 && (!(*L2 >= 0.0) || !std::isfinite(*L2))) bad("L2 must be finite and non-negative");
}

PointSampler point_sampler(InstanceSampler& sampler, std::size_t n_points, std::size_t d) {
  return [&sampler, n_points, d]() {
    EmpiricalMeasure mu = sampler.measure(n_points, d);
    Vector x = sampler.vector(d);
    Vector p = sampler.vector(d);
    return EvaluationPoint{std::move(x), std::move(mu), std::move(p)};
  };
}

DerivativeBounds estimate_bounds(const HamiltonianModel& model, const PointSampler& sampler,
                                 std::size_t n_samples) {
  if (n_samples < 1) throw ValidationError("estimate_bounds: n_samples must be >= 1");
  const auto declared_c0 = model.convexity_constant();
  double kappa = std::numeric_limits<double>::infinity();
  double pp_lower = std::numeric_limits<double>::infinity();
  double norm_pp = 0, norm_xx = 0, norm_xp = 0, norm_pmu = 0, norm_xmu = 0;

  for (std::size_t s = 0; s < n_samples; ++s) {
    const EvaluationPoint pt = sampler();
    if (!pt.x.allFinite() || !pt.p.allFinite()) {
      throw ValidationError("estimate_bounds: sampler produced a non-finite point");
    }
    const HamiltonianJet jet = model.jet(pt.x, pt.mu, pt.p);
    const double pp_min = lambda_min(symmetric_part(jet.hess_pp));
    if (declared_c0 && pp_min < 1.0 / *declared_c0 - 1e-10) {
      std::ostringstream msg;
      msg << model.name() << ": declared c0 = " << *declared_c0
          << " violated, lambda_min(d_pp H) = " << pp_min;
      throw ValidationError(msg.str());
    }
    pp_lower = std::min(pp_lower, pp_min);
    kappa = std::min(kappa, lambda_min(symmetric_part(jet.hess_xp)));
    norm_pp = std::max(norm_pp, spectral_norm(jet.hess_pp));
    norm_xx = std::max(norm_xx, spectral_norm(jet.hess_xx));
    norm_xp = std::max(norm_xp, spectral_norm(jet.hess_xp));
    for (const Matrix& k : jet.hess_pmu) norm_pmu = std::max(norm_pmu, spectral_norm(k));
    for (const Matrix& k : jet.hess_xmu) norm_xmu = std::max(norm_xmu, spectral_norm(k));
  }

  DerivativeBounds out;
  if (declared_c0) {
    out.c0 = *declared_c0;
  } else {
    if (!(pp_lower > 0.0)) {
      throw ValidationError(model.name() + ": d_pp H is not positive definite on the samples");
    }
    out.c0 = 1.0 / pp_lower;
  }
  out.kappa_xp_lower = kappa;
  out.norm_pp = norm_pp;
  out.norm_xx = norm_xx;
  out.norm_pmu = norm_pmu;
  out.norm_xmu = norm_xmu;
  out.norm_xp = norm_xp;
  out.L2 = std::max({norm_xp, norm_pp, norm_xmu, norm_pmu});
  out.provenance = Provenance::kSampled;
  return out;
}

double sampled_legendre_gap(const HamiltonianModel& model, const PointSampler& sampler,
                            std::size_t n_samples) {
  if (n_samples < 1) throw ValidationError("sampled_legendre_gap: n_samples must be >= 1");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n_samples; ++s) {
    const EvaluationPoint pt = sampler();
    gap = std::min(gap, model.grad_p(pt.x, pt.mu, pt.p).dot(pt.p) - model.value(pt.x, pt.mu, pt.p));
  }
  return gap;
}

}  // namespace mfgcanon
