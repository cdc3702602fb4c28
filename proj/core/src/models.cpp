#include "mfgcanon/models.hpp"

#include <sstream>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {

HamiltonianJet HamiltonianModel::jet(const Vector& x, const EmpiricalMeasure& mu,
                                     const Vector& p) const {
  HamiltonianJet out;
  out.value = value(x, mu, p);
  out.grad_x = grad_x(x, mu, p);
  out.grad_p = grad_p(x, mu, p);
  out.hess_xx = hess_xx(x, mu, p);
  out.hess_xp = hess_xp(x, mu, p);
  out.hess_pp = hess_pp(x, mu, p);
  const std::size_t n = mu.size();
  out.grad_mu.reserve(n);
  out.hess_xmu.reserve(n);
  out.hess_pmu.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.grad_mu.push_back(grad_mu(x, mu, p, j));
    out.hess_xmu.push_back(hess_xmu(x, mu, p, j));
    out.hess_pmu.push_back(hess_pmu(x, mu, p, j));
  }
  return out;
}

CostJet CostModel::jet(const Vector& x, const EmpiricalMeasure& mu) const {
  CostJet out;
  out.value = value(x, mu);
  out.grad_x = grad_x(x, mu);
  out.hess_xx = hess_xx(x, mu);
  const std::size_t n = mu.size();
  out.grad_mu.reserve(n);
  out.hess_xmu.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.grad_mu.push_back(grad_mu(x, mu, j));
    out.hess_xmu.push_back(hess_xmu(x, mu, j));
  }
  return out;
}

void require_support_index(const EmpiricalMeasure& mu, std::size_t j) {
  if (j >= mu.size()) {
    std::ostringstream msg;
    msg << "kernel queried at support index " << j << " but the measure has " << mu.size()
        << " points";
    throw ValidationError(msg.str());
  }
}

void require_dims(std::size_t model_dim, const Vector& x, const EmpiricalMeasure& mu) {
  const auto d = static_cast<Eigen::Index>(model_dim);
  if (x.size() != d || static_cast<Eigen::Index>(mu.dim()) != d) {
    std::ostringstream msg;
    msg << "dimension mismatch: model d=" << model_dim << ", x has " << x.size()
        << ", measure has " << mu.dim();
    throw ValidationError(msg.str());
  }
}

void require_dims(std::size_t model_dim, const Vector& x, const EmpiricalMeasure& mu,
                  const Vector& p) {
  require_dims(model_dim, x, mu);
  if (p.size() != static_cast<Eigen::Index>(model_dim)) {
    std::ostringstream msg;
    msg << "dimension mismatch: model d=" << model_dim << ", p has " << p.size();
    throw ValidationError(msg.str());
  }
}

}  // namespace mfgcanon
