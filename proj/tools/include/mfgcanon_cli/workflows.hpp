#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mfgcanon/certificates.hpp"
#include "mfgcanon/solver.hpp"
#include "mfgcanon_cli/problem.hpp"

namespace mfgcanon::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNonConvergence = 3,
  kExitConsistency = 4,
};

struct WorkflowResult {
  nlohmann::json payload;
  int exit_code = kExitOk;
  /// Trajectory table (CSV), when the workflow produces one.
  std::optional<std::string> table;
};

/// Closed-form certificates from declared or sampled bounds, lambda and the
/// semi-monotonicity constant of G. `alpha` asks whether that value lies in
/// the certified interval.
WorkflowResult cmd_certify(const ProblemFile& problem, std::optional<double> alpha = std::nullopt);

/// Sampled monotonicity checks. `alpha` overrides check.alpha.
WorkflowResult cmd_check(const ProblemFile& problem, std::optional<double> alpha = std::nullopt);

/// Solves the particle system; with `alpha`, solves the transformed data.
WorkflowResult cmd_solve(const ProblemFile& problem, std::optional<double> alpha = std::nullopt);

/// Equivalence test at `alpha` (or equivalence.alpha from the problem).
WorkflowResult cmd_equivalence(const ProblemFile& problem, std::optional<double> alpha = std::nullopt);

/// Header: time,agent,x_0..x_{d-1},p_0..p_{d-1}; numbers printed with %.17g.
std::string trajectory_table(const Trajectories& path);

nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const DerivativeBounds& b);
nlohmann::json points_json(const Matrix& points);

/// Exit code for an exception escaping a workflow: validation errors are
/// usage errors, numerical failures are non-convergence, everything else is
/// an internal-consistency violation.
int exit_code_for(const std::exception& e);

/// Entry point of the mfg-canon executable; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mfgcanon::cli
