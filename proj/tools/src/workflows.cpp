#include "mfgcanon_cli/workflows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "mfgcanon/errors.hpp"
#include "mfgcanon/linalg.hpp"
#include "mfgcanon/monotonicity.hpp"
#include "mfgcanon/sampling.hpp"
#include "mfgcanon/transform.hpp"

namespace mfgcanon::cli {
namespace {

using nlohmann::json;

// Independent streams derived from the one problem seed (splitmix64 finalizer).
enum class Stream : std::uint64_t { kMeasure = 1, kField = 2, kPerturb = 3, kBounds = 4 };

std::uint64_t derive_seed(std::uint64_t seed, Stream stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(stream);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

json check_json(const InequalityCheck& c) {
  return {{"name", c.name}, {"lhs", c.lhs},       {"relation", c.relation},
          {"rhs", c.rhs},   {"holds", c.holds}, {"boundary", c.boundary}};
}

json interval_json(const AlphaInterval& i) {
  return {{"alpha_minus", i.alpha_minus},
          {"alpha_plus", i.alpha_plus},
          {"alpha_mid", i.alpha_mid},
          {"provenance", to_string(i.source)}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// Source of the measures a workflow runs on: the explicit points every time,
/// or fresh draws from the sampler.
class MeasureSource {
 public:
  explicit MeasureSource(const ProblemFile& p)
      : problem_(p),
        rng_(derive_seed(p.seed, Stream::kMeasure),
             p.sampler ? p.sampler->distribution : Distribution::kNormal,
             p.sampler ? p.sampler->scale : 1.0) {
    if (!p.points && !p.sampler) throw ValidationError("problem needs measure or sampler");
  }

  EmpiricalMeasure next() {
    if (problem_.points) return EmpiricalMeasure(*problem_.points);
    return rng_.measure(problem_.sampler->n, problem_.sampler->d);
  }

 private:
  const ProblemFile& problem_;
  InstanceSampler rng_;
};

Matrix initial_points(const ProblemFile& p) {
  MeasureSource source(p);
  return source.next().points();
}

SolverSpec require_solver(const ProblemFile& p) {
  if (!p.solver) throw ValidationError("problem needs solver options");
  return *p.solver;
}

json solution_json(const MFGSolution& s) {
  json out = {{"method", to_string(s.method)},
              {"converged", s.converged},
              {"iterations", s.iterations},
              {"residual_norm", s.residual_norm},
              {"fallback_used", s.fallback_used},
              {"message", s.message},
              {"history", s.history}};
  if (!s.path.x.empty()) {
    out["p0"] = points_json(s.path.p.front());
    out["x_T"] = points_json(s.path.x.back());
    out["p_T"] = points_json(s.path.p.back());
  }
  if (!s.values_at_zero.empty()) out["values_at_zero"] = s.values_at_zero;
  return out;
}

// ---- check ----

struct KindAggregate {
  FormKind kind;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double worst_extremal = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tolerance_at_worst = 0.0;
  std::optional<std::size_t> first_failure;
  json witness;
  std::set<std::string> flags;

  void add(std::size_t instance, double extremal, double margin, double tol, bool pass,
           const json& witness_if_failing, const std::vector<std::string>& new_flags) {
    ++instances;
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_extremal = extremal;
      tolerance_at_worst = tol;
    }
    if (!pass) {
      ++failures;
      if (!first_failure) {
        first_failure = instance;
        witness = witness_if_failing;
      }
    }
    flags.insert(new_flags.begin(), new_flags.end());
  }

  json to_json() const {
    json out = {{"kind", to_string(kind)},
                {"verdict", failures == 0 ? "pass" : "fail"},
                {"extremal_eigenvalue", worst_extremal},
                {"margin", worst_margin},
                {"tolerance", tolerance_at_worst},
                {"sampled_instances", instances},
                {"failures", failures},
                {"flags", json(std::vector<std::string>(flags.begin(), flags.end()))},
                {"provenance", "sampled"}};
    if (first_failure) {
      out["witness_instance"] = *first_failure;
      out["witness"] = witness;
    }
    return out;
  }
};

std::vector<FormKind> default_kinds(const ProblemFile& p, const std::optional<double>& alpha) {
  std::vector<FormKind> kinds;
  if (p.cost) {
    kinds.push_back(FormKind::kDispG2nd);
    kinds.push_back(FormKind::kDispG1st);
    if (p.lambda) kinds.push_back(FormKind::kAntiG);
  }
  if (p.hamiltonian) {
    kinds.push_back(FormKind::kDispH2nd);
    kinds.push_back(FormKind::kDispH1st);
    if (alpha) kinds.push_back(FormKind::kAlphaDispH);
  }
  return kinds;
}

bool needs_cost(FormKind k) {
  return k == FormKind::kDispG2nd || k == FormKind::kDispG1st || k == FormKind::kAntiG;
}

}  // namespace

json points_json(const Matrix& points) {
  json out = json::array();
  for (Eigen::Index i = 0; i < points.cols(); ++i) out.push_back(vector_json(points.col(i)));
  return out;
}

json to_json(const DerivativeBounds& b) {
  return {{"c0", b.c0},
          {"kappa_xp_lower", b.kappa_xp_lower},
          {"norm_pp", b.norm_pp},
          {"norm_xx", b.norm_xx},
          {"norm_pmu", b.norm_pmu},
          {"norm_xmu", b.norm_xmu},
          {"norm_xp", optional_json(b.norm_xp)},
          {"L2", optional_json(b.L2)},
          {"provenance", to_string(b.provenance)}};
}

json to_json(const Certificate& c) {
  json reasons = json::array();
  for (const auto& r : c.reasons) reasons.push_back(check_json(r));
  return {{"verdict", to_string(c.verdict)},
          {"chosen_alpha", optional_json(c.chosen_alpha)},
          {"interval", c.interval ? interval_json(*c.interval) : json(nullptr)},
          {"reasons", reasons},
          {"notes", c.notes},
          {"provenance", to_string(c.provenance)},
          {"boundary", c.boundary}};
}

std::string trajectory_table(const Trajectories& path) {
  std::string out = "time,agent";
  if (path.x.empty()) return out + "\n";
  const auto d = path.x.front().rows();
  const auto n = path.x.front().cols();
  for (Eigen::Index k = 0; k < d; ++k) out += ",x_" + std::to_string(k);
  for (Eigen::Index k = 0; k < d; ++k) out += ",p_" + std::to_string(k);
  out += '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out += buf;
  };
  for (std::size_t t = 0; t < path.times.size(); ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%ld", path.times[t], static_cast<long>(i));
      out += buf;
      for (Eigen::Index k = 0; k < d; ++k) put(path.x[t](k, i));
      for (Eigen::Index k = 0; k < d; ++k) put(path.p[t](k, i));
      out += '\n';
    }
  }
  return out;
}

WorkflowResult cmd_certify(const ProblemFile& p, std::optional<double> alpha) {
  if (!p.bounds && !p.lambda && !p.estimate) {
    throw ValidationError("certify needs bounds, lambda or estimate_bounds");
  }
  if (p.prop_last && !p.lambda) throw ValidationError("prop_last needs lambda");
  WorkflowResult result;
  json& out = result.payload;
  out = json::object();

  if (p.lambda) {
    const LambdaParams& l = *p.lambda;
    json flags = json::array();
    if (l.lambda0_nonpositive()) flags.push_back("lambda0-nonpositive");
    out["lambda"] = {{"l0", l.l0},
                     {"l1", l.l1},
                     {"l2", l.l2},
                     {"l3", l.l3},
                     {"alpha_lambda", alpha_from_lambda(l)},
                     {"f_lambda", f_lambda(l)},
                     {"f_lambda_expanded", f_lambda_expanded(l)},
                     {"flags", flags}};
  }

  std::optional<DerivativeBounds> bounds = p.bounds;
  if (!bounds && p.estimate) {
    const HamiltonianPtr h = p.build_hamiltonian();
    InstanceSampler rng(derive_seed(p.seed, Stream::kBounds),
                        p.sampler ? p.sampler->distribution : Distribution::kNormal,
                        p.sampler ? p.sampler->scale : 1.0);
    bounds = estimate_bounds(*h, point_sampler(rng, p.estimate->points, p.dimension()),
                             p.estimate->samples);
  }

  if (bounds) {
    const AlphaIntervalOutcome outcome = alpha_interval(*bounds);
    out["h_bounds"] = to_json(*bounds);
    out["l_our"] = outcome.l_our;
    out["alpha_interval"] = {{"hypothesis", check_json(outcome.hypothesis)},
                             {"interval", outcome.interval ? interval_json(*outcome.interval)
                                                           : json(nullptr)}};
    if (alpha) {
      const bool inside = outcome.interval && *alpha >= outcome.interval->alpha_minus &&
                          *alpha <= outcome.interval->alpha_plus;
      out["alpha_query"] = {{"alpha", *alpha},
                            {"interval_quadratic", interval_quadratic(*bounds, *alpha)},
                            {"in_interval", inside}};
    }
  }

  // Semi-monotonicity constant of G: declared, implied by lambda, or sampled.
  std::optional<double> semi;
  Provenance semi_provenance = Provenance::kDeclared;
  std::string semi_source;
  if (p.g_semi_alpha) {
    semi = p.g_semi_alpha;
    semi_source = "declared";
  } else if (p.lambda) {
    semi = alpha_from_lambda(*p.lambda);
    semi_source = "lambda";
  } else if (p.cost && (p.points || p.sampler) && bounds) {
    const CostPtr g = p.build_cost();
    MeasureSource source(p);
    const std::size_t instances = p.points ? 1 : p.check.instances;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < instances; ++k) {
      worst = std::max(worst, semi_monotonicity_constant(*g, source.next()));
    }
    semi = worst;
    semi_provenance = Provenance::kSampled;
    semi_source = "sampled";
  }
  if (semi) {
    out["g_semi_alpha"] = {{"value", *semi}, {"source", semi_source},
                           {"provenance", to_string(semi_provenance)}};
  }

  if (bounds && semi) {
    Certificate cert = wellposedness_certificate(*bounds, *semi, semi_provenance);
    if (semi_source == "lambda") {
      cert.notes.push_back("semi-monotonicity constant of G implied by lambda-anti-monotonicity");
    }
    out["certificate"] = to_json(cert);
  }
  if (p.prop_last) {
    out["prop_last"] = to_json(check_prop_last(p.prop_last->bounds_H0, p.prop_last->kappa_A0, *p.lambda));
  }
  return result;
}

WorkflowResult cmd_check(const ProblemFile& p, std::optional<double> alpha_override) {
  const std::optional<double> alpha = alpha_override ? alpha_override : p.check.alpha;
  const std::vector<FormKind> kinds = p.check.kinds.empty() ? default_kinds(p, alpha) : p.check.kinds;
  if (kinds.empty()) throw ValidationError("check needs a hamiltonian or a cost");

  HamiltonianPtr h;
  CostPtr g;
  std::vector<KindAggregate> aggregates;
  for (FormKind k : kinds) {
    if (needs_cost(k) && !g) g = p.build_cost();
    if (!needs_cost(k) && !h) h = p.build_hamiltonian();
    if (k == FormKind::kAntiG && !p.lambda) throw ValidationError("anti-G check needs lambda");
    if (k == FormKind::kAlphaDispH && !alpha) throw ValidationError("alpha-disp-H check needs alpha");
    KindAggregate agg;
    agg.kind = k;
    aggregates.push_back(agg);
  }

  MeasureSource source(p);
  InstanceSampler field_rng(derive_seed(p.seed, Stream::kField), p.check.p_distribution,
                            p.check.p_scale > 0.0 ? p.check.p_scale : 1.0);
  InstanceSampler perturb_rng(derive_seed(p.seed, Stream::kPerturb), Distribution::kNormal,
                              p.check.perturbation);
  const bool zero_field = !(p.check.p_scale > 0.0);
  const std::optional<double> tol = p.check.tolerance;
  const double first_order_tol = tol ? *tol : 1e-9;

  for (std::size_t inst = 0; inst < p.check.instances; ++inst) {
    // Every instance draws the same amount of randomness regardless of the
    // kinds requested, so instance k is the same across different runs.
    const EmpiricalMeasure mu = source.next();
    const auto d = static_cast<Eigen::Index>(mu.dim());
    const auto n = static_cast<Eigen::Index>(mu.size());
    const Matrix p1 = zero_field ? Matrix(Matrix::Zero(d, n)) : field_rng.field(mu);
    const Matrix p2 = zero_field ? Matrix(Matrix::Zero(d, n)) : field_rng.field(mu);
    const EmpiricalMeasure nu(mu.points() + perturb_rng.field(mu));
    const Permutation sigma = perturb_rng.permutation(mu.size());
    const Coupling coupling = permutation_coupling(mu, nu, sigma);

    for (KindAggregate& agg : aggregates) {
      std::optional<MonotonicityReport> rep;
      switch (agg.kind) {
        case FormKind::kDispG2nd: rep = check_disp_monotone_G(*g, mu, tol); break;
        case FormKind::kDispH2nd: rep = check_disp_monotone_H(*h, mu, p1, tol); break;
        case FormKind::kAlphaDispH: rep = check_alpha_disp_H(h, mu, p1, *alpha, tol); break;
        case FormKind::kAntiG: rep = check_anti_monotone(*g, mu, *p.lambda, tol); break;
        case FormKind::kDispG1st:
        case FormKind::kDispH1st: {
          const double v = agg.kind == FormKind::kDispG1st ? check_first_order_G(*g, coupling)
                                                           : check_first_order_H(*h, coupling, p1, p2);
          std::vector<std::size_t> image(sigma.image().begin(), sigma.image().end());
          json witness = {{"mu", points_json(mu.points())},
                          {"nu", points_json(nu.points())},
                          {"permutation", image}};
          if (agg.kind == FormKind::kDispH1st) {
            witness["p1"] = points_json(p1);
            witness["p2"] = points_json(p2);
          }
          agg.add(inst, v, v, first_order_tol, v >= -first_order_tol, witness, {});
          continue;
        }
      }
      json witness;
      if (rep->witness) {
        witness = {{"mu", points_json(mu.points())}, {"direction", points_json(*rep->witness)}};
        if (agg.kind == FormKind::kDispH2nd || agg.kind == FormKind::kAlphaDispH) {
          witness["p_field"] = points_json(p1);
        }
      }
      agg.add(inst, rep->extremal_eigenvalue, rep->margin, rep->tolerance, rep->pass, witness, rep->flags);
    }
  }

  json reports = json::array();
  bool all_pass = true;
  for (const auto& agg : aggregates) {
    reports.push_back(agg.to_json());
    all_pass = all_pass && agg.failures == 0;
  }
  WorkflowResult result;
  result.payload = {{"reports", reports},
                    {"all_pass", all_pass},
                    {"instances", p.check.instances},
                    {"alpha", optional_json(alpha)},
                    {"p_field", zero_field ? "zero" : "sampled"}};
  return result;
}

WorkflowResult cmd_solve(const ProblemFile& p, std::optional<double> alpha) {
  const SolverSpec spec = require_solver(p);
  MFGProblem problem(p.build_hamiltonian(), p.build_cost(), initial_points(p), spec.T, spec.steps);
  if (alpha) problem = problem.transformed(*alpha);
  const MFGSolution sol = solve_mfg(problem, spec.method, spec.options);

  WorkflowResult result;
  result.payload = solution_json(sol);
  result.payload["T"] = spec.T;
  result.payload["steps"] = spec.steps;
  result.payload["agents"] = problem.agents();
  result.payload["d"] = problem.dim();
  result.payload["x0"] = points_json(problem.initial_points());
  result.payload["alpha"] = optional_json(alpha);
  result.table = trajectory_table(sol.path);
  result.exit_code = sol.converged ? kExitOk : kExitNonConvergence;
  return result;
}

WorkflowResult cmd_equivalence(const ProblemFile& p, std::optional<double> alpha) {
  if (!alpha) alpha = p.equivalence_alpha;
  if (!alpha) throw ValidationError("equivalence needs --alpha or equivalence.alpha");
  const SolverSpec spec = require_solver(p);
  const MFGProblem problem(p.build_hamiltonian(), p.build_cost(), initial_points(p), spec.T, spec.steps);
  const EquivalenceReport rep = equivalence_test(problem, *alpha, spec.options, spec.method, spec.equiv_tol);

  std::vector<double> value_delta;
  for (std::size_t i = 0; i < rep.original.values_at_zero.size(); ++i) {
    value_delta.push_back(rep.transformed.values_at_zero[i] - rep.original.values_at_zero[i]);
  }
  WorkflowResult result;
  result.payload = {{"alpha", *alpha},
                    {"trajectory_deviation", rep.trajectory_deviation},
                    {"costate_shift_deviation", rep.costate_shift_deviation},
                    {"value_shift_deviation", rep.value_shift_deviation},
                    {"tolerance", rep.tolerance},
                    {"pass", rep.pass},
                    {"value_delta", value_delta},
                    {"original", solution_json(rep.original)},
                    {"transformed", solution_json(rep.transformed)}};
  return result;
}

}  // namespace mfgcanon::cli
