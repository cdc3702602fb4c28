#include "mfgcanon/transform.hpp"

#include <cmath>
#include <utility>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {
namespace {

class TransformedHamiltonian final : public HamiltonianModel {
 public:
  TransformedHamiltonian(HamiltonianPtr base, double alpha) : base_(std::move(base)), alpha_(alpha) {}

  std::string name() const override { return base_->name() + "_alpha"; }
  std::size_t dim() const override { return base_->dim(); }
  std::optional<double> convexity_constant() const override {
    return base_->convexity_constant();
  }

  double value(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->value(x, mu, shifted(x, p));
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    const Vector q = shifted(x, p);
    return base_->grad_x(x, mu, q) - alpha_ * base_->grad_p(x, mu, q);
  }
  Vector grad_p(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->grad_p(x, mu, shifted(x, p));
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                 std::size_t j) const override {
    return base_->grad_mu(x, mu, shifted(x, p), j);
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    const Vector q = shifted(x, p);
    return base_->hess_xx(x, mu, q) - 2.0 * alpha_ * symmetric_part(base_->hess_xp(x, mu, q)) +
           alpha_ * alpha_ * base_->hess_pp(x, mu, q);
  }
  Matrix hess_xp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    const Vector q = shifted(x, p);
    return base_->hess_xp(x, mu, q) - alpha_ * base_->hess_pp(x, mu, q);
  }
  Matrix hess_pp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->hess_pp(x, mu, shifted(x, p));
  }
  Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    const Vector q = shifted(x, p);
    return base_->hess_xmu(x, mu, q, j) - alpha_ * base_->hess_pmu(x, mu, q, j);
  }
  Matrix hess_pmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    return base_->hess_pmu(x, mu, shifted(x, p), j);
  }

 private:
  Vector shifted(const Vector& x, const Vector& p) const {
    if (x.size() != p.size()) throw ValidationError("dimension mismatch between x and p");
    return p - alpha_ * x;
  }

  HamiltonianPtr base_;
  double alpha_;
};

class TransformedCost final : public CostModel {
 public:
  TransformedCost(CostPtr base, double alpha) : base_(std::move(base)), alpha_(alpha) {}

  std::string name() const override { return base_->name() + "_alpha"; }
  std::size_t dim() const override { return base_->dim(); }

  double value(const Vector& x, const EmpiricalMeasure& mu) const override {
    return base_->value(x, mu) + 0.5 * alpha_ * x.squaredNorm();
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu) const override {
    return base_->grad_x(x, mu) + alpha_ * x;
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, std::size_t j) const override {
    return base_->grad_mu(x, mu, j);
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu) const override {
    Matrix out = base_->hess_xx(x, mu);
    out.diagonal().array() += alpha_;
    return out;
  }
  Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, std::size_t j) const override {
    return base_->hess_xmu(x, mu, j);
  }

 private:
  CostPtr base_;
  double alpha_;
};

}  // namespace

void TransformTag::validate() const {
  if (!std::isfinite(alpha)) throw ValidationError("transform alpha must be finite");
  if (!(beta >= 0.0) || !(beta0 >= 0.0) || !std::isfinite(beta) || !std::isfinite(beta0)) {
    throw ValidationError("noise intensities must be finite and non-negative");
  }
}

HamiltonianPtr transform_hamiltonian(HamiltonianPtr h, double alpha) {
  if (!h) throw ValidationError("transform_hamiltonian: missing model");
  TransformTag{alpha}.validate();
  return std::make_shared<TransformedHamiltonian>(std::move(h), alpha);
}

CostPtr transform_cost(CostPtr g, double alpha) {
  if (!g) throw ValidationError("transform_cost: missing model");
  TransformTag{alpha}.validate();
  return std::make_shared<TransformedCost>(std::move(g), alpha);
}

double value_shift(double alpha, double beta, double beta0, std::size_t d, double t, double T,
                   const Vector& x) {
  TransformTag{alpha, beta, beta0}.validate();
  if (!(t >= 0.0 && t <= T)) throw ValidationError("value_shift: t must lie in [0, T]");
  const double noise = (beta0 * beta0 + beta * beta) * alpha * static_cast<double>(d) / 2.0;
  return 0.5 * alpha * x.squaredNorm() - noise * (t - T);
}

}  // namespace mfgcanon
