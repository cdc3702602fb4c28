#include "mfgcanon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

#include "mfgcanon/errors.hpp"
#include "mfgcanon/transform.hpp"

namespace mfgcanon {
namespace {

Eigen::Index sz(std::size_t n) { return static_cast<Eigen::Index>(n); }

struct PhaseRate {
  Matrix dx;
  Matrix dp;
};

// Velocity field of the coupled system; the measure is built from `x` itself.
PhaseRate coupled_rate(const HamiltonianModel& h, const Matrix& x, const Matrix& p) {
  const EmpiricalMeasure mu(x);
  PhaseRate r{Matrix(x.rows(), x.cols()), Matrix(x.rows(), x.cols())};
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const Vector xi = x.col(i);
    const Vector pi = p.col(i);
    r.dx.col(i) = kFlowOrientation * h.grad_p(xi, mu, pi);
    r.dp.col(i) = -kFlowOrientation * h.grad_x(xi, mu, pi);
  }
  return r;
}

void require_finite_state(const Matrix& x, const Matrix& p, double last_finite_time) {
  if (!x.allFinite() || !p.allFinite()) {
    std::ostringstream msg;
    msg << "characteristics blew up; last finite time " << last_finite_time;
    throw NumericalError(msg.str());
  }
}

double sup_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Vector terminal_residual_vector(const CostModel& g, const Matrix& xT, const Matrix& pT) {
  const EmpiricalMeasure mu(xT);
  Matrix r(pT.rows(), pT.cols());
  for (Eigen::Index i = 0; i < xT.cols(); ++i) r.col(i) = pT.col(i) - g.grad_x(xT.col(i), mu);
  return Eigen::Map<const Vector>(r.data(), r.size());
}

Matrix as_field(const Vector& z, Eigen::Index d) {
  return Eigen::Map<const Matrix>(z.data(), d, z.size() / d);
}

// Measure path frozen for the Picard best response: grid-node states and
// velocities, with cubic Hermite midpoints for the half-step RK4 stages.
struct FrozenPath {
  std::vector<EmpiricalMeasure> nodes;
  std::vector<EmpiricalMeasure> midpoints;
};

FrozenPath freeze(const std::vector<Matrix>& x, const std::vector<Matrix>& v, double dt) {
  FrozenPath f;
  f.nodes.reserve(x.size());
  for (const Matrix& xk : x) f.nodes.emplace_back(xk);
  f.midpoints.reserve(x.size() - 1);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    f.midpoints.emplace_back(0.5 * (x[k] + x[k + 1]) + (dt / 8.0) * (v[k] - v[k + 1]));
  }
  return f;
}

struct AgentPath {
  std::vector<Vector> x;
  std::vector<Vector> p;
};

AgentPath integrate_agent(const HamiltonianModel& h, const FrozenPath& path, const Vector& x0,
                          const Vector& p0, double dt) {
  const std::size_t steps = path.midpoints.size();
  AgentPath out;
  out.x.reserve(steps + 1);
  out.p.reserve(steps + 1);
  out.x.push_back(x0);
  out.p.push_back(p0);
  auto rate = [&h](const Vector& x, const Vector& p, const EmpiricalMeasure& mu) {
    return std::pair<Vector, Vector>{kFlowOrientation * h.grad_p(x, mu, p),
                                     -kFlowOrientation * h.grad_x(x, mu, p)};
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const Vector& x = out.x.back();
    const Vector& p = out.p.back();
    const auto [k1x, k1p] = rate(x, p, path.nodes[k]);
    const auto [k2x, k2p] = rate(x + 0.5 * dt * k1x, p + 0.5 * dt * k1p, path.midpoints[k]);
    const auto [k3x, k3p] = rate(x + 0.5 * dt * k2x, p + 0.5 * dt * k2p, path.midpoints[k]);
    const auto [k4x, k4p] = rate(x + dt * k3x, p + dt * k3p, path.nodes[k + 1]);
    Vector xn = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    Vector pn = p + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    require_finite_state(xn, pn, dt * static_cast<double>(k));
    out.x.push_back(std::move(xn));
    out.p.push_back(std::move(pn));
  }
  return out;
}

struct NewtonOutcome {
  Vector z;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
  bool fallback_used = false;
  std::vector<double> history;
};

// Damped Newton with a forward-difference Jacobian on a residual map that
// returns nullopt when the underlying integration blows up.
template <typename ResidualFn>
NewtonOutcome damped_newton(ResidualFn&& residual, Vector z, const SolverOptions& opts) {
  NewtonOutcome out;
  std::optional<Vector> r = residual(z);
  if (!r) throw NumericalError("integration blew up at the initial guess");
  double norm = sup_norm(*r);
  out.history.push_back(norm);
  Vector best_z = z;
  double best_norm = norm;
  bool fallback = false;

  for (std::size_t it = 0; it < opts.max_iter && norm > opts.tol; ++it) {
    out.iterations = it + 1;
    std::optional<Vector> step;
    if (!fallback) {
      const Eigen::Index n = z.size();
      Matrix jac(r->size(), n);
      bool jac_ok = true;
      for (Eigen::Index k = 0; k < n && jac_ok; ++k) {
        const double e = opts.jacobian_step * (1.0 + std::abs(z(k)));
        Vector zk = z;
        zk(k) += e;
        const std::optional<Vector> rk = residual(zk);
        if (!rk) {
          jac_ok = false;
          break;
        }
        jac.col(k) = (*rk - *r) / e;
      }
      if (jac_ok) {
        Eigen::FullPivLU<Matrix> lu(jac);
        lu.setThreshold(1e-10);
        if (lu.isInvertible()) step = lu.solve(-*r);
      }
      if (!step) fallback = true;
    }

    bool accepted = false;
    if (step) {
      double lambda = 1.0;
      for (std::size_t halving = 0; halving <= opts.max_halvings; ++halving, lambda *= 0.5) {
        const Vector trial = z + lambda * *step;
        std::optional<Vector> rt = residual(trial);
        if (rt && sup_norm(*rt) < norm) {
          z = trial;
          r = std::move(rt);
          accepted = true;
          break;
        }
      }
      if (!accepted) fallback = true;
    }
    if (!accepted) {
      // Damped fixed-point update p0 <- p0 - theta R(p0).
      const Vector trial = z - opts.damping * *r;
      std::optional<Vector> rt = residual(trial);
      if (!rt) break;
      z = trial;
      r = std::move(rt);
    }
    norm = sup_norm(*r);
    out.history.push_back(norm);
    if (norm < best_norm) {
      best_norm = norm;
      best_z = z;
    }
  }
  out.fallback_used = fallback;
  out.converged = best_norm <= opts.tol;
  out.z = best_z;
  out.residual = best_norm;
  return out;
}

Matrix initial_guess(const CostModel& g, const Matrix& x0) {
  const EmpiricalMeasure mu(x0);
  Matrix p0(x0.rows(), x0.cols());
  for (Eigen::Index i = 0; i < x0.cols(); ++i) p0.col(i) = g.grad_x(x0.col(i), mu);
  return p0;
}

void validate_options(const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("solver tol must be positive");
  if (opts.max_iter < 1) throw ValidationError("solver max_iter must be >= 1");
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) {
    throw ValidationError("solver damping must lie in (0, 1]");
  }
  if (!(opts.jacobian_step > 0.0)) throw ValidationError("jacobian_step must be positive");
}

void finish(MFGSolution& s, const MFGProblem& problem) {
  s.residual_norm = terminal_residual(*problem.cost(), s.path);
  if (s.converged) s.values_at_zero = value_at_zero(s, *problem.hamiltonian(), *problem.cost());
}

}  // namespace

MFGProblem::MFGProblem(HamiltonianPtr h, CostPtr g, Matrix initial_points, double horizon,
                       std::size_t steps, double beta, double beta0)
    : h_(std::move(h)), g_(std::move(g)), x0_(std::move(initial_points)), horizon_(horizon),
      steps_(steps) {
  if (!h_ || !g_) throw ValidationError("MFG problem needs both H and G");
  if (x0_.rows() < 1 || x0_.cols() < 1 || !x0_.allFinite()) {
    throw ValidationError("MFG problem needs finite initial points");
  }
  if (h_->dim() != dim() || g_->dim() != dim()) {
    throw ValidationError("model dimension does not match the initial points");
  }
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ValidationError("horizon T must be positive");
  if (steps_ < 2) throw ValidationError("steps must be >= 2");
  if (beta != 0.0 || beta0 != 0.0) {
    throw ValidationError("simulation supports only beta = beta0 = 0");
  }
}

MFGProblem MFGProblem::transformed(double alpha) const {
  return MFGProblem(transform_hamiltonian(h_, alpha), transform_cost(g_, alpha), x0_, horizon_,
                    steps_);
}

Trajectories integrate_characteristics(const HamiltonianModel& h, const Matrix& x0,
                                       const Matrix& p0, double duration, std::size_t steps) {
  if (steps < 1) throw ValidationError("integrate_characteristics: steps must be >= 1");
  if (!std::isfinite(duration) || duration == 0.0) {
    throw ValidationError("integrate_characteristics: duration must be finite and nonzero");
  }
  if (x0.rows() != p0.rows() || x0.cols() != p0.cols()) {
    throw ValidationError("integrate_characteristics: x0 and p0 shapes differ");
  }
  if (!x0.allFinite() || !p0.allFinite()) {
    throw ValidationError("integrate_characteristics: non-finite initial data");
  }
  const double dt = duration / static_cast<double>(steps);
  Trajectories out;
  out.times.reserve(steps + 1);
  out.x.reserve(steps + 1);
  out.p.reserve(steps + 1);
  out.times.push_back(0.0);
  out.x.push_back(x0);
  out.p.push_back(p0);
  for (std::size_t k = 0; k < steps; ++k) {
    const Matrix& x = out.x.back();
    const Matrix& p = out.p.back();
    const double t = out.times.back();
    const PhaseRate k1 = coupled_rate(h, x, p);
    Matrix xs = x + 0.5 * dt * k1.dx, ps = p + 0.5 * dt * k1.dp;
    require_finite_state(xs, ps, t);
    const PhaseRate k2 = coupled_rate(h, xs, ps);
    xs = x + 0.5 * dt * k2.dx;
    ps = p + 0.5 * dt * k2.dp;
    require_finite_state(xs, ps, t);
    const PhaseRate k3 = coupled_rate(h, xs, ps);
    xs = x + dt * k3.dx;
    ps = p + dt * k3.dp;
    require_finite_state(xs, ps, t);
    const PhaseRate k4 = coupled_rate(h, xs, ps);
    Matrix xn = x + (dt / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    Matrix pn = p + (dt / 6.0) * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
    require_finite_state(xn, pn, t);
    out.x.push_back(std::move(xn));
    out.p.push_back(std::move(pn));
    out.times.push_back(dt * static_cast<double>(k + 1));
  }
  return out;
}

std::string to_string(SolverMethod m) { return m == SolverMethod::kShooting ? "shooting" : "picard"; }

double terminal_residual(const CostModel& g, const Trajectories& path) {
  return sup_norm(terminal_residual_vector(g, path.x.back(), path.p.back()));
}

MFGSolution solve_mfg_shooting(const MFGProblem& problem, const SolverOptions& opts) {
  validate_options(opts);
  const HamiltonianModel& h = *problem.hamiltonian();
  const CostModel& g = *problem.cost();
  const Matrix& x0 = problem.initial_points();
  const auto d = x0.rows();

  auto residual = [&](const Vector& z) -> std::optional<Vector> {
    try {
      const Trajectories tr =
          integrate_characteristics(h, x0, as_field(z, d), problem.horizon(), problem.steps());
      return terminal_residual_vector(g, tr.x.back(), tr.p.back());
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  };

  const Matrix guess = initial_guess(g, x0);
  NewtonOutcome newton =
      damped_newton(residual, Eigen::Map<const Vector>(guess.data(), guess.size()), opts);

  MFGSolution s;
  s.method = SolverMethod::kShooting;
  s.path = integrate_characteristics(h, x0, as_field(newton.z, d), problem.horizon(),
                                     problem.steps());
  s.iterations = newton.iterations;
  s.converged = newton.converged;
  s.fallback_used = newton.fallback_used;
  s.history = std::move(newton.history);
  if (s.fallback_used) s.message = "singular or non-descending Jacobian: used damped fixed-point fallback";
  if (!s.converged) s.message += (s.message.empty() ? "" : "; ") + std::string("shooting did not converge");
  finish(s, problem);
  return s;
}

MFGSolution solve_mfg_picard(const MFGProblem& problem, const SolverOptions& opts) {
  validate_options(opts);
  const HamiltonianModel& h = *problem.hamiltonian();
  const CostModel& g = *problem.cost();
  const Matrix& x0 = problem.initial_points();
  const std::size_t steps = problem.steps();
  const std::size_t n = problem.agents();
  const auto d = x0.rows();
  const double dt = problem.horizon() / static_cast<double>(steps);

  std::vector<Matrix> path_x(steps + 1, x0);
  std::vector<Matrix> path_v(steps + 1, Matrix::Zero(x0.rows(), x0.cols()));
  Matrix p0 = initial_guess(g, x0);
  std::vector<Matrix> previous_br;

  MFGSolution s;
  s.method = SolverMethod::kPicard;
  bool newton_fallback = false;
  for (std::size_t iter = 0; iter < opts.picard_max_iter; ++iter) {
    const FrozenPath frozen = freeze(path_x, path_v, dt);
    std::vector<Matrix> br_x(steps + 1, Matrix(x0.rows(), x0.cols()));
    std::vector<Matrix> br_v(steps + 1, Matrix(x0.rows(), x0.cols()));
    for (std::size_t i = 0; i < n; ++i) {
      const Vector xi0 = x0.col(sz(i));
      auto residual = [&](const Vector& q) -> std::optional<Vector> {
        try {
          const AgentPath a = integrate_agent(h, frozen, xi0, q, dt);
          return Vector(a.p.back() - g.grad_x(a.x.back(), frozen.nodes.back()));
        } catch (const NumericalError&) {
          return std::nullopt;
        }
      };
      NewtonOutcome agent = damped_newton(residual, Vector(p0.col(sz(i))), opts);
      newton_fallback = newton_fallback || agent.fallback_used;
      p0.col(sz(i)) = agent.z;
      const AgentPath a = integrate_agent(h, frozen, xi0, agent.z, dt);
      for (std::size_t k = 0; k <= steps; ++k) {
        br_x[k].col(sz(i)) = a.x[k];
        br_v[k].col(sz(i)) = kFlowOrientation * h.grad_p(a.x[k], frozen.nodes[k], a.p[k]);
      }
    }
    if (!previous_br.empty()) {
      double displacement = 0.0;
      for (std::size_t k = 0; k <= steps; ++k) {
        displacement = std::max(displacement, (br_x[k] - previous_br[k]).cwiseAbs().maxCoeff());
      }
      s.history.push_back(displacement);
      s.iterations = iter;
      if (displacement <= opts.tol) {
        s.converged = true;
        break;
      }
    }
    for (std::size_t k = 0; k <= steps; ++k) {
      path_x[k] = opts.damping * br_x[k] + (1.0 - opts.damping) * path_x[k];
      path_v[k] = opts.damping * br_v[k] + (1.0 - opts.damping) * path_v[k];
    }
    previous_br = std::move(br_x);
  }
  (void)d;
  s.fallback_used = newton_fallback;
  s.path = integrate_characteristics(h, x0, p0, problem.horizon(), steps);
  if (!s.converged) s.message = "Picard iteration did not converge";
  if (newton_fallback) {
    s.message += (s.message.empty() ? "" : "; ") + std::string("agent shooting used fixed-point fallback");
  }
  finish(s, problem);
  return s;
}

MFGSolution solve_mfg(const MFGProblem& problem, SolverMethod method, const SolverOptions& opts) {
  return method == SolverMethod::kShooting ? solve_mfg_shooting(problem, opts)
                                           : solve_mfg_picard(problem, opts);
}

std::vector<double> value_at_zero(const MFGSolution& solution, const HamiltonianModel& h,
                                  const CostModel& g) {
  if (!solution.converged) throw NumericalError("value_at_zero: solution did not converge");
  const Trajectories& tr = solution.path;
  const std::size_t steps = tr.times.size() - 1;
  const std::size_t n = static_cast<std::size_t>(tr.x.front().cols());
  const double dt = tr.times.back() / static_cast<double>(steps);

  // integrand[k][i] = dV/dt along agent i at time k
  std::vector<Vector> integrand(steps + 1, Vector(sz(n)));
  for (std::size_t k = 0; k <= steps; ++k) {
    const EmpiricalMeasure mu(tr.x[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector xi = tr.x[k].col(sz(i));
      const Vector pi = tr.p[k].col(sz(i));
      integrand[k](sz(i)) =
          -kFlowOrientation * (h.value(xi, mu, pi) - pi.dot(h.grad_p(xi, mu, pi)));
    }
  }
  Vector integral = Vector::Zero(sz(n));
  if (steps % 2 == 0) {
    for (std::size_t k = 0; k <= steps; ++k) {
      const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      integral += w * integrand[k];
    }
    integral *= dt / 3.0;
  } else {
    for (std::size_t k = 0; k <= steps; ++k) {
      const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
      integral += w * integrand[k];
    }
    integral *= dt;
  }
  const EmpiricalMeasure mu_T(tr.x.back());
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = g.value(tr.x.back().col(sz(i)), mu_T) - integral(sz(i));
  }
  return values;
}

EquivalenceReport equivalence_test(const MFGProblem& problem, double alpha,
                                   const SolverOptions& opts, SolverMethod method,
                                   double equiv_tol) {
  EquivalenceReport rep;
  rep.alpha = alpha;
  rep.tolerance = equiv_tol;
  rep.original = solve_mfg(problem, method, opts);
  rep.transformed = solve_mfg(problem.transformed(alpha), method, opts);
  if (!rep.original.converged || !rep.transformed.converged) {
    throw NumericalError("equivalence_test: a solve did not converge");
  }
  const Trajectories& a = rep.original.path;
  const Trajectories& b = rep.transformed.path;
  for (std::size_t k = 0; k < a.x.size(); ++k) {
    rep.trajectory_deviation =
        std::max(rep.trajectory_deviation, (a.x[k] - b.x[k]).cwiseAbs().maxCoeff());
    rep.costate_shift_deviation = std::max(
        rep.costate_shift_deviation, (b.p[k] - (a.p[k] + alpha * a.x[k])).cwiseAbs().maxCoeff());
  }
  const Matrix& x0 = problem.initial_points();
  for (Eigen::Index i = 0; i < x0.cols(); ++i) {
    const double shift =
        value_shift(alpha, 0.0, 0.0, problem.dim(), 0.0, problem.horizon(), x0.col(i));
    const double dev = std::abs(rep.transformed.values_at_zero[static_cast<std::size_t>(i)] -
                                rep.original.values_at_zero[static_cast<std::size_t>(i)] - shift);
    rep.value_shift_deviation = std::max(rep.value_shift_deviation, dev);
  }
  rep.pass = rep.trajectory_deviation <= equiv_tol && rep.costate_shift_deviation <= equiv_tol &&
             rep.value_shift_deviation <= equiv_tol;
  return rep;
}

}  // namespace mfgcanon
