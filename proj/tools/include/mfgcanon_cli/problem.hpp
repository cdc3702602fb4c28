#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfgcanon/bounds.hpp"
#include "mfgcanon/models.hpp"
#include "mfgcanon/monotonicity.hpp"
#include "mfgcanon/sampling.hpp"
#include "mfgcanon/solver.hpp"

namespace mfgcanon::cli {

inline constexpr const char* kProblemVersion = "mfg-canon/1";
inline constexpr const char* kReportVersion = "mfg-canon-report/1";

struct SamplerSpec {
  std::size_t n = 1;
  std::size_t d = 1;
  Distribution distribution = Distribution::kNormal;
  double scale = 1.0;
};

struct SolverSpec {
  double T = 1.0;
  std::size_t steps = 100;
  SolverOptions options;
  SolverMethod method = SolverMethod::kShooting;
  double equiv_tol = 1e-6;
};

struct CheckSpec {
  std::size_t instances = 20;
  std::optional<double> tolerance;
  std::vector<FormKind> kinds;  // empty: choose from the models present
  std::optional<double> alpha;
  Distribution p_distribution = Distribution::kNormal;
  // 0 means the zero momentum field
  double p_scale = 0.0;
  double perturbation = 0.1;
};

struct EstimateSpec {
  std::size_t samples = 100;
  std::size_t points = 4;
};

struct PropLastSpec {
  DerivativeBounds bounds_H0;
  double kappa_A0 = 0.0;
};

/// Parsed problem file. Model specs are kept as JSON and built on demand
/// because their dimension may come from the measure.
struct ProblemFile {
  nlohmann::json raw;
  std::uint64_t seed = 0;
  std::optional<std::size_t> d;
  std::optional<nlohmann::json> hamiltonian;
  std::optional<nlohmann::json> cost;
  std::optional<DerivativeBounds> bounds;
  std::optional<EstimateSpec> estimate;
  std::optional<LambdaParams> lambda;
  std::optional<double> g_semi_alpha;
  std::optional<PropLastSpec> prop_last;
  std::optional<Matrix> points;  // d x N
  std::optional<SamplerSpec> sampler;
  std::optional<SolverSpec> solver;
  CheckSpec check;
  std::optional<double> equivalence_alpha;

  /// Dimension from the measure, sampler or explicit "d".
  std::size_t dimension() const;
  HamiltonianPtr build_hamiltonian() const;
  CostPtr build_cost() const;
};

/// Throws ValidationError on any malformed or inconsistent field.
ProblemFile parse_problem(const nlohmann::json& doc, std::optional<std::uint64_t> seed_override);

ProblemFile load_problem(const std::string& path, std::optional<std::uint64_t> seed_override);

DerivativeBounds parse_bounds(const nlohmann::json& j, Provenance provenance = Provenance::kDeclared);
LambdaParams parse_lambda(const nlohmann::json& j);

}  // namespace mfgcanon::cli
