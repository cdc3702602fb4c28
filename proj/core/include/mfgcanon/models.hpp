#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mfgcanon/linalg.hpp"
#include "mfgcanon/measures.hpp"

namespace mfgcanon {

// Derivative conventions
// ----------------------
//   hess_xp(a, b)        = d/dx_a d/dp_b H
//   grad_mu(..., j)      = the Wasserstein derivative d_mu F(mu, x_j) at support
//                          point j. On particles, d/dx_j F = (1/N) d_mu F.
//   hess_xmu(..., j)(a,b) = d/dx_a [d_mu H(x, mu, p, x_j)]_b
//   hess_pmu(..., j)(a,b) = d/dp_a [d_mu H(x, mu, p, x_j)]_b
// Kernels are indexed by support point; an out-of-range index is an error.

/// All derivative blocks of a Hamiltonian at one (x, mu, p). Kernel entries
/// are stored per support point of mu.
struct HamiltonianJet {
  double value = 0.0;
  Vector grad_x, grad_p;
  std::vector<Vector> grad_mu;
  Matrix hess_xx, hess_xp, hess_pp;
  std::vector<Matrix> hess_xmu, hess_pmu;
};

struct CostJet {
  double value = 0.0;
  Vector grad_x;
  std::vector<Vector> grad_mu;
  Matrix hess_xx;
  std::vector<Matrix> hess_xmu;
};

/// H(x, mu, p) with analytic first and second derivatives.
class HamiltonianModel {
 public:
  virtual ~HamiltonianModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  /// Declared c0 with d_pp H >= c0^{-1} I, if any.
  virtual std::optional<double> convexity_constant() const { return std::nullopt; }

  virtual double value(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const = 0;
  virtual Vector grad_x(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const = 0;
  virtual Vector grad_p(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const = 0;
  virtual Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                         std::size_t j) const = 0;
  virtual Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const = 0;
  virtual Matrix hess_xp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const = 0;
  virtual Matrix hess_pp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const = 0;
  virtual Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                          std::size_t j) const = 0;
  virtual Matrix hess_pmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                          std::size_t j) const = 0;

  HamiltonianJet jet(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const;
};

/// G(x, mu) with analytic first and second derivatives.
class CostModel {
 public:
  virtual ~CostModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;

  virtual double value(const Vector& x, const EmpiricalMeasure& mu) const = 0;
  virtual Vector grad_x(const Vector& x, const EmpiricalMeasure& mu) const = 0;
  virtual Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, std::size_t j) const = 0;
  virtual Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu) const = 0;
  virtual Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, std::size_t j) const = 0;

  CostJet jet(const Vector& x, const EmpiricalMeasure& mu) const;
};

using HamiltonianPtr = std::shared_ptr<const HamiltonianModel>;
using CostPtr = std::shared_ptr<const CostModel>;

/// Throws ValidationError unless j indexes a support point of mu.
void require_support_index(const EmpiricalMeasure& mu, std::size_t j);

/// Throws ValidationError on dimension mismatch between the model and arguments.
void require_dims(std::size_t model_dim, const Vector& x, const EmpiricalMeasure& mu);
void require_dims(std::size_t model_dim, const Vector& x, const EmpiricalMeasure& mu,
                  const Vector& p);

}  // namespace mfgcanon
