// One line per acceptance criterion; exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfgcanon/mfgcanon.hpp"
#include "mfgcanon_cli/workflows.hpp"

using namespace mfgcanon;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Matrix eye(std::size_t d) { return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)); }
Matrix zero(std::size_t d) { return Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)); }
Matrix mat1(double v) { return Matrix::Constant(1, 1, v); }

double unit_rel(const Matrix& approx, const Matrix& exact) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < exact.rows(); ++i) {
    for (Eigen::Index j = 0; j < exact.cols(); ++j) {
      worst = std::max(worst, std::abs(approx(i, j) - exact(i, j)) / std::max(1.0, std::abs(exact(i, j))));
    }
  }
  return worst;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Outcome push_through() {
  const std::size_t d = 2;
  InstanceSampler params(21, Distribution::kUniform, 1.0);
  const Matrix a = params.matrix(d, d);
  const std::vector<HamiltonianPtr> hs = {
      make_h_lq(a * a.transpose() + eye(d), params.matrix(d, d), params.matrix(d, d)),
      make_h_mf(d, 0.7, -1.3),
      make_h_pxc(make_h_lq(eye(d), zero(d), zero(d)), 2.0),
  };
  InstanceSampler rng(22);
  double worst = 0.0;
  for (const auto& h : hs) {
    for (double alpha : {-1.0, 0.5, 2.0}) {
      const auto ha = transform_hamiltonian(h, alpha);
      for (int s = 0; s < 20; ++s) {
        const Vector x = rng.vector(d), p = rng.vector(d);
        const auto mu = rng.measure(3, d);
        const auto exact = ha->jet(x, mu, p);
        const auto fd = fd_derivatives(*ha, x, mu, p, 1e-4);
        worst = std::max({worst, unit_rel(fd.hess_xx, exact.hess_xx), unit_rel(fd.hess_xp, exact.hess_xp),
                          unit_rel(fd.hess_pp, exact.hess_pp)});
        for (std::size_t j = 0; j < mu.size(); ++j) {
          worst = std::max({worst, unit_rel(fd.hess_xmu[j], exact.hess_xmu[j]),
                            unit_rel(fd.hess_pmu[j], exact.hess_pmu[j])});
        }
      }
    }
  }
  return {worst <= 1e-5, fmt("worst relative error %.2e", worst)};
}

DerivativeBounds kappa_two() {
  DerivativeBounds b;
  b.c0 = 1.0;
  b.kappa_xp_lower = 2.0;
  b.norm_pp = 1.0;
  return b;
}

Outcome alpha_interval_soundness() {
  const auto out = alpha_interval(kappa_two());
  if (!out.interval || out.interval->alpha_minus != 0.0 || out.interval->alpha_plus != 4.0) {
    return {false, "interval is not [0, 4]"};
  }
  const auto h = make_h_pxc(make_h_lq(eye(2), zero(2), zero(2)), 2.0);
  InstanceSampler rng(23);
  int checks = 0;
  for (std::size_t n : {1u, 4u, 16u}) {
    for (int s = 0; s < 5; ++s) {
      const auto mu = rng.measure(n, 2);
      const Matrix p = rng.field(mu);
      for (double alpha : {0.1, 2.0, 3.9}) {
        ++checks;
        if (!check_alpha_disp_H(h, mu, p, alpha).pass) return {false, fmt("alpha %g fails at N = %g", alpha, double(n))};
      }
      for (double alpha : {-0.5, 4.5}) {
        ++checks;
        if (check_alpha_disp_H(h, mu, p, alpha).pass) return {false, fmt("alpha %g passes at N = %g", alpha, double(n))};
      }
    }
  }
  return {true, fmt("[0, 4] exact, %g verdicts as expected", checks)};
}

Outcome quadratic_roots() {
  DerivativeBounds mixed = kappa_two();
  mixed.norm_pmu = 1.0;
  mixed.norm_xmu = 0.5;
  mixed.norm_xx = 0.25;
  double worst = 0.0;
  for (const auto& b : {kappa_two(), mixed}) {
    const auto out = alpha_interval(b);
    if (!out.interval) return {false, "interval refused"};
    const double scale = std::max(1.0, b.norm_pp * out.interval->alpha_plus * out.interval->alpha_plus);
    for (double r : {out.interval->alpha_minus, out.interval->alpha_plus}) {
      worst = std::max(worst, std::abs(interval_quadratic(b, r)) / scale);
    }
  }
  const auto iv = *alpha_interval(mixed).interval;
  const bool ok = worst <= 1e-10 && std::abs(iv.alpha_minus - 0.3820) <= 1e-4 &&
                  std::abs(iv.alpha_plus - 2.6180) <= 1e-4;
  return {ok, fmt("residual %.1e, interval [%.4f, %.4f]", worst, iv.alpha_minus, iv.alpha_plus)};
}

Outcome anti_to_semi() {
  const auto g = make_g_anti(2, 2.0);
  const LambdaParams l{2.0, 0.0, 1.0, 0.0};
  const double alpha = alpha_from_lambda(l);
  if (std::abs(alpha - 2.0) > 1e-12) return {false, fmt("alpha_lambda = %.17g", alpha)};
  const auto flat = transform_cost(g, alpha);
  InstanceSampler rng(24);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 20; ++s) {
    const auto mu = rng.measure(5, 2);
    if (!check_anti_monotone(*g, mu, l).pass) return {false, "G_anti is not lambda-anti-monotone"};
    const auto rep = check_disp_monotone_G(*flat, mu);
    if (!rep.pass) return {false, "transformed cost fails displacement monotonicity"};
    worst = std::min(worst, rep.margin);
  }
  return {worst >= -1e-12, fmt("alpha_lambda = 2, worst margin %.1e", worst)};
}

Outcome completed_square() {
  InstanceSampler rng(25);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const std::size_t d = 1 + static_cast<std::size_t>(s % 3);
    const CostPtr g = s % 4 == 0 ? make_g_anti(d, 0.5 + std::abs(rng.scalar()))
                                 : transform_cost(make_g_quad(d, rng.scalar(), rng.scalar(), rng.scalar()),
                                                  rng.scalar());
    const auto mu = rng.measure(2 + static_cast<std::size_t>(s % 5), d);
    const LambdaParams l{rng.scalar(), rng.scalar(), 0.05 + std::abs(rng.scalar()), std::abs(rng.scalar())};
    const Matrix a = assemble_anti_form(*g, mu, l);
    const Matrix b = assemble_anti_form_completed_square(*g, mu, l);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff()));
  }
  return {worst <= 1e-10, fmt("worst entrywise deviation %.1e", worst)};
}

Outcome prop_last_arithmetic() {
  const double f1 = f_lambda({2.0, 0.0, 1.0, 0.0});
  const double f2 = f_lambda({2.0, 2.0, 1.0, 1.0});
  DerivativeBounds h0;
  h0.c0 = 1.0;
  h0.norm_pp = 1.0;
  h0.L2 = 1.0;
  const LambdaParams l{2.0, 0.0, 1.0, 0.0};
  const auto at = check_prop_last(h0, 5.5, l);
  const auto below = check_prop_last(h0, 5.5 - 1e-9, l);
  const bool thresholds = at.reasons.size() == 2 && at.reasons[0].rhs == 4.0 && at.reasons[1].rhs == 5.5;
  const bool ok = std::abs(f1 - 4.0) <= 1e-12 && std::abs(f2 - 8.0) <= 1e-12 && thresholds && at.granted() &&
                  !below.granted() && check_prop_last(h0, 6.0, l).granted() && !check_prop_last(h0, 5.0, l).granted();
  return {ok, fmt("f = %.15g, %.15g; thresholds {4, 5.5}", f1, f2)};
}

SolverOptions tight() {
  SolverOptions o;
  o.tol = 1e-11;
  return o;
}

MFGProblem lq_problem() {
  return MFGProblem(make_h_lq(eye(1), zero(1), zero(1)), make_g_quad(1, 1.0, 0.0, 0.0), mat1(1.0), 1.0, 1000);
}

double trajectory_gap(const MFGSolution& a, const MFGSolution& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.path.x.size(); ++k) {
    worst = std::max(worst, (a.path.x[k] - b.path.x[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

Outcome lq_oracle() {
  const auto s = solve_mfg(lq_problem(), SolverMethod::kShooting, tight());
  const auto p = solve_mfg(lq_problem(), SolverMethod::kPicard, tight());
  if (!s.converged || !p.converged) return {false, "solver did not converge"};
  const double err = std::max({std::abs(s.path.p.front()(0, 0) - 0.5), std::abs(s.path.x.back()(0, 0) - 0.5),
                               std::abs(s.values_at_zero[0] - 0.25)});
  const double gap = trajectory_gap(s, p);
  return {err <= 1e-6 && gap <= 1e-6, fmt("oracle error %.1e, shooting/picard gap %.1e", err, gap)};
}

Outcome equivalence() {
  Matrix x0(1, 2);
  x0 << -1.0, 1.0;
  const MFGProblem mf(make_h_lq(eye(1), zero(1), zero(1)), make_g_quad(1, 0.0, 0.0, 1.0), x0, 1.0, 400);
  double worst = 0.0;
  auto run = [&](const MFGProblem& problem, double alpha) {
    const auto rep = equivalence_test(problem, alpha, tight());
    worst = std::max({worst, rep.trajectory_deviation, rep.costate_shift_deviation, rep.value_shift_deviation});
  };
  run(lq_problem(), 1.0);
  for (double alpha : {-1.0, 0.5, 2.0}) run(mf, alpha);
  return {worst <= 1e-6, fmt("worst deviation %.1e", worst)};
}

Outcome regularization_demo() {
  const json base = {{"type", "H_mf"}, {"params", {{"c", 1.0}}}};
  const json unregularized = {
      {"version", cli::kProblemVersion},
      {"seed", 7},
      {"hamiltonian", base},
      {"cost", {{"type", "G_anti"}, {"params", {{"a", 2.0}}}}},
      {"bounds", {{"c0", 1}, {"kappa_xp_lower", 0}, {"norm_pp", 1}, {"norm_pmu", 1}}},
      {"lambda", {2, 0, 1, 0}},
      {"sampler", {{"N", 4}, {"d", 1}}},
      {"solver", {{"T", 0.5}, {"steps", 200}, {"tol", 1e-10}}}};
  json regularized = unregularized;
  regularized["hamiltonian"] = {{"type", "H_pxc"}, {"params", {{"base", base}, {"alpha", 3.0}}}};
  regularized["bounds"]["kappa_xp_lower"] = 3;

  const auto refused = cli::cmd_certify(cli::parse_problem(unregularized, std::nullopt));
  if (refused.payload["certificate"]["verdict"] != "refused") return {false, "unregularized instance certified"};
  const auto problem = cli::parse_problem(regularized, std::nullopt);
  const auto granted = cli::cmd_certify(problem);
  if (granted.payload["certificate"]["verdict"] != "granted") return {false, "regularized instance refused"};
  const double alpha = granted.payload["certificate"]["chosen_alpha"].get<double>();
  const auto solved = cli::cmd_solve(problem);
  if (solved.exit_code != cli::kExitOk) return {false, "solve did not converge"};
  const auto eq = cli::cmd_equivalence(problem, alpha);
  const bool pass = eq.payload["pass"].get<bool>();
  return {pass, fmt("refused without p.x; granted with alpha = %g; equivalence deviation %.1e", alpha,
                    std::max({eq.payload["trajectory_deviation"].get<double>(),
                              eq.payload["costate_shift_deviation"].get<double>(),
                              eq.payload["value_shift_deviation"].get<double>()}))};
}

// Declares a second-derivative block that changes between calls.
class DriftingHamiltonian final : public HamiltonianModel {
 public:
  std::string name() const override { return "drifting"; }
  std::size_t dim() const override { return 1; }
  double value(const Vector&, const EmpiricalMeasure&, const Vector& p) const override { return 0.5 * p.squaredNorm(); }
  Vector grad_x(const Vector&, const EmpiricalMeasure&, const Vector&) const override { return Vector::Zero(1); }
  Vector grad_p(const Vector&, const EmpiricalMeasure&, const Vector& p) const override { return p; }
  Vector grad_mu(const Vector&, const EmpiricalMeasure&, const Vector&, std::size_t) const override {
    return Vector::Zero(1);
  }
  Matrix hess_xx(const Vector&, const EmpiricalMeasure&, const Vector&) const override { return mat1(0.0); }
  Matrix hess_xp(const Vector&, const EmpiricalMeasure&, const Vector&) const override {
    return mat1(static_cast<double>(++calls_));
  }
  Matrix hess_pp(const Vector&, const EmpiricalMeasure&, const Vector&) const override { return mat1(1.0); }
  Matrix hess_xmu(const Vector&, const EmpiricalMeasure&, const Vector&, std::size_t) const override {
    return mat1(0.0);
  }
  Matrix hess_pmu(const Vector&, const EmpiricalMeasure&, const Vector&, std::size_t) const override {
    return mat1(0.0);
  }

 private:
  mutable int calls_ = 0;
};

Outcome dual_route() {
  InstanceSampler rng(26);
  InstanceSampler params(27, Distribution::kUniform, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const std::size_t d = 1 + static_cast<std::size_t>(s % 3);
    const Matrix a = params.matrix(d, d);
    HamiltonianPtr h;
    switch (s % 4) {
      case 0: h = make_h_lq(a * a.transpose() + eye(d), params.matrix(d, d), params.matrix(d, d)); break;
      case 1: h = make_h_mf(d, params.scalar(), params.scalar()); break;
      case 2: h = make_h_pxc(make_h_lq(eye(d), zero(d), zero(d)), 3.0 * params.scalar()); break;
      default: h = make_h_pxc(make_h_mf(d, params.scalar(), params.scalar()), params.scalar()); break;
    }
    const auto mu = rng.measure(1 + static_cast<std::size_t>(s % 6), d);
    const auto routes = alpha_disp_routes(h, mu, rng.field(mu), 4.0 * rng.scalar());
    worst = std::max(worst, routes.max_deviation / std::max(1.0, routes.direct.cwiseAbs().maxCoeff()));
  }
  int code = 0;
  try {
    check_alpha_disp_H(std::make_shared<DriftingHamiltonian>(), make_empirical({{0.0}, {1.0}}),
                       Matrix::Zero(1, 2), 1.0);
  } catch (const std::exception& e) {
    code = cli::exit_code_for(e);
  }
  return {worst <= 1e-10 && code == cli::kExitConsistency,
          fmt("worst route deviation %.1e; injected mismatch exits %g", worst, code)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "derivative push-through", 10, push_through},
      {2, "alpha-interval soundness", 30, alpha_interval_soundness},
      {3, "quadratic roots", 1, quadratic_roots},
      {4, "anti to semi pipeline", 10, anti_to_semi},
      {5, "completed-square identity", 30, completed_square},
      {6, "f(lambda) and threshold arithmetic", 1, prop_last_arithmetic},
      {7, "LQ solver oracle", 5, lq_oracle},
      {8, "particle-level equivalence", 20, equivalence},
      {9, "regularization demo", 60, regularization_demo},
      {10, "dual-route consistency", 60, dual_route},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %2d %-36s %s  %s; %.3f s (budget %.0f s)\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds, c.budget_seconds);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
