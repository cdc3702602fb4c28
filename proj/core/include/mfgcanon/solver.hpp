#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mfgcanon/models.hpp"

namespace mfgcanon {

/// Orientation of the characteristic flow for -d_t V + H(x, mu, d_x V) = 0,
/// V(T) = G:  dx/dt = kFlowOrientation * d_p H,  dp/dt = -kFlowOrientation * d_x H,
/// and along the flow dV/dt = -kFlowOrientation * (H - p . d_p H).
inline constexpr double kFlowOrientation = -1.0;

/// Deterministic N-particle problem. Construction rejects nonzero noise.
class MFGProblem {
 public:
  MFGProblem(HamiltonianPtr h, CostPtr g, Matrix initial_points, double horizon, std::size_t steps,
             double beta = 0.0, double beta0 = 0.0);

  const HamiltonianPtr& hamiltonian() const { return h_; }
  const CostPtr& cost() const { return g_; }
  /// d x N
  const Matrix& initial_points() const { return x0_; }
  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  std::size_t dim() const { return static_cast<std::size_t>(x0_.rows()); }
  std::size_t agents() const { return static_cast<std::size_t>(x0_.cols()); }

  /// Same initial points and grid, data (H_alpha, G_alpha).
  MFGProblem transformed(double alpha) const;

 private:
  HamiltonianPtr h_;
  CostPtr g_;
  Matrix x0_;
  double horizon_;
  std::size_t steps_;
};

/// States and costates on a uniform grid; x[k], p[k] are d x N.
struct Trajectories {
  std::vector<double> times;
  std::vector<Matrix> x;
  std::vector<Matrix> p;
};

/// Classical RK4 for the coupled particle system with the measure rebuilt from
/// the stage states of all agents. `duration` may be negative to integrate
/// backward. Throws NumericalError (naming the last finite time) on blow-up.
Trajectories integrate_characteristics(const HamiltonianModel& h, const Matrix& x0,
                                       const Matrix& p0, double duration, std::size_t steps);

enum class SolverMethod { kShooting, kPicard };

std::string to_string(SolverMethod m);

struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iter = 50;
  /// Picard measure-path damping and fallback fixed-point damping.
  double damping = 0.5;
  std::size_t picard_max_iter = 500;
  std::size_t max_halvings = 20;
  /// Forward-difference Jacobian step, scaled by 1 + |p0_k|.
  double jacobian_step = 1e-6;
};

struct MFGSolution {
  Trajectories path;
  std::vector<double> values_at_zero;
  /// max_i |p_i(T) - d_x G(x_i(T), mu_T)|
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool fallback_used = false;
  SolverMethod method = SolverMethod::kShooting;
  /// Residual norms (shooting) or best-response displacements (Picard).
  std::vector<double> history;
  std::string message;
};

/// max_i |p_i(T) - d_x G(x_i(T), mu_T)| of a trajectory set.
double terminal_residual(const CostModel& g, const Trajectories& path);

/// Damped Newton on p0 with a forward-difference Jacobian. A singular
/// Jacobian or a failed line search switches to a damped fixed-point update,
/// recorded in `fallback_used`. Non-convergence returns the best iterate.
MFGSolution solve_mfg_shooting(const MFGProblem& problem, const SolverOptions& opts = {});

/// Fixed point on the measure path: every agent best-responds to the frozen
/// path by d-dimensional shooting, then the path is relaxed with `damping`.
/// Stops when consecutive best responses differ by at most opts.tol. The
/// returned trajectories are the coupled flow from the final initial costates.
MFGSolution solve_mfg_picard(const MFGProblem& problem, const SolverOptions& opts = {});

MFGSolution solve_mfg(const MFGProblem& problem, SolverMethod method, const SolverOptions& opts = {});

/// V_i(0) = G(x_i(T), mu_T) - int_0^T (H - p . d_p H) dt along the solution;
/// composite Simpson for an even step count, trapezoid otherwise. Throws
/// NumericalError for an unconverged solution.
std::vector<double> value_at_zero(const MFGSolution& solution, const HamiltonianModel& h,
                                  const CostModel& g);

struct EquivalenceReport {
  double alpha = 0.0;
  double trajectory_deviation = 0.0;
  double costate_shift_deviation = 0.0;
  double value_shift_deviation = 0.0;
  double tolerance = 1e-6;
  bool pass = false;
  MFGSolution original;
  MFGSolution transformed;
};

/// Solves (H, G) and (H_alpha, G_alpha) from the same initial points and
/// compares trajectories, costates p + alpha x, and values shifted by
/// alpha/2 |x_i(0)|^2. Throws NumericalError if either solve fails to converge.
EquivalenceReport equivalence_test(const MFGProblem& problem, double alpha,
                                   const SolverOptions& opts = {},
                                   SolverMethod method = SolverMethod::kShooting,
                                   double equiv_tol = 1e-6);

}  // namespace mfgcanon
