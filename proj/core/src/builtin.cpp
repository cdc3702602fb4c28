#include "mfgcanon/builtin.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {
namespace {

Matrix identity(std::size_t d) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

void require_square(const Matrix& m, std::size_t d, const char* label) {
  if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != static_cast<Eigen::Index>(d)) {
    std::ostringstream msg;
    msg << label << " must be " << d << "x" << d << ", got " << m.rows() << "x" << m.cols();
    throw ValidationError(msg.str());
  }
  if (!m.allFinite()) throw ValidationError(std::string(label) + " has non-finite entries");
}

void require_finite(double v, const char* label) {
  if (!std::isfinite(v)) throw ValidationError(std::string(label) + " must be finite");
}

class LinearQuadraticHamiltonian final : public HamiltonianModel {
 public:
  LinearQuadraticHamiltonian(Matrix P, Matrix Q, Matrix R, std::optional<double> c0)
      : P_(std::move(P)), Q_(std::move(Q)), R_(std::move(R)), c0_(c0) {}

  std::string name() const override { return "H_lq"; }
  std::size_t dim() const override { return static_cast<std::size_t>(P_.rows()); }
  std::optional<double> convexity_constant() const override { return c0_; }

  double value(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(dim(), x, mu, p);
    return 0.5 * p.dot(P_ * p) + 0.5 * x.dot(Q_ * x) + (R_ * x).dot(p);
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(dim(), x, mu, p);
    return Q_ * x + R_.transpose() * p;
  }
  Vector grad_p(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(dim(), x, mu, p);
    return P_ * p + R_ * x;
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                 std::size_t j) const override {
    require_dims(dim(), x, mu, p);
    require_support_index(mu, j);
    return Vector::Zero(x.size());
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(dim(), x, mu, p);
    return Q_;
  }
  Matrix hess_xp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(dim(), x, mu, p);
    return R_.transpose();
  }
  Matrix hess_pp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(dim(), x, mu, p);
    return P_;
  }
  Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    require_dims(dim(), x, mu, p);
    require_support_index(mu, j);
    return Matrix::Zero(x.size(), x.size());
  }
  Matrix hess_pmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    return hess_xmu(x, mu, p, j);
  }

 private:
  Matrix P_, Q_, R_;
  std::optional<double> c0_;
};

class MeanFieldHamiltonian final : public HamiltonianModel {
 public:
  MeanFieldHamiltonian(std::size_t d, double c, double q) : d_(d), c_(c), q_(q) {}

  std::string name() const override { return "H_mf"; }
  std::size_t dim() const override { return d_; }
  std::optional<double> convexity_constant() const override { return 1.0; }

  double value(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(d_, x, mu, p);
    const Vector m = mean(mu);
    return 0.5 * p.squaredNorm() + c_ * p.dot(m) + 0.5 * q_ * (x - m).squaredNorm();
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(d_, x, mu, p);
    return q_ * (x - mean(mu));
  }
  Vector grad_p(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(d_, x, mu, p);
    return p + c_ * mean(mu);
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                 std::size_t j) const override {
    require_dims(d_, x, mu, p);
    require_support_index(mu, j);
    return c_ * p - q_ * (x - mean(mu));
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(d_, x, mu, p);
    return q_ * identity(d_);
  }
  Matrix hess_xp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(d_, x, mu, p);
    return Matrix::Zero(x.size(), x.size());
  }
  Matrix hess_pp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    require_dims(d_, x, mu, p);
    return identity(d_);
  }
  Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    require_dims(d_, x, mu, p);
    require_support_index(mu, j);
    return -q_ * identity(d_);
  }
  Matrix hess_pmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    require_dims(d_, x, mu, p);
    require_support_index(mu, j);
    return c_ * identity(d_);
  }

 private:
  std::size_t d_;
  double c_, q_;
};

class PxCoupledHamiltonian final : public HamiltonianModel {
 public:
  PxCoupledHamiltonian(HamiltonianPtr base, double alpha) : base_(std::move(base)), alpha_(alpha) {}

  std::string name() const override { return "H_pxc"; }
  std::size_t dim() const override { return base_->dim(); }
  std::optional<double> convexity_constant() const override {
    return base_->convexity_constant();
  }

  double value(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->value(x, mu, p) + alpha_ * p.dot(x);
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->grad_x(x, mu, p) + alpha_ * p;
  }
  Vector grad_p(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->grad_p(x, mu, p) + alpha_ * x;
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                 std::size_t j) const override {
    return base_->grad_mu(x, mu, p, j);
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->hess_xx(x, mu, p);
  }
  Matrix hess_xp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->hess_xp(x, mu, p) + alpha_ * identity(dim());
  }
  Matrix hess_pp(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    return base_->hess_pp(x, mu, p);
  }
  Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    return base_->hess_xmu(x, mu, p, j);
  }
  Matrix hess_pmu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                  std::size_t j) const override {
    return base_->hess_pmu(x, mu, p, j);
  }

 private:
  HamiltonianPtr base_;
  double alpha_;
};

class QuadraticCost final : public CostModel {
 public:
  QuadraticCost(std::string name, std::size_t d, double a, double b, double e)
      : name_(std::move(name)), d_(d), a_(a), b_(b), e_(e) {}

  std::string name() const override { return name_; }
  std::size_t dim() const override { return d_; }

  double value(const Vector& x, const EmpiricalMeasure& mu) const override {
    require_dims(d_, x, mu);
    const Vector m = mean(mu);
    return 0.5 * a_ * x.squaredNorm() + b_ * x.dot(m) + 0.5 * e_ * (x - m).squaredNorm();
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu) const override {
    require_dims(d_, x, mu);
    const Vector m = mean(mu);
    return a_ * x + b_ * m + e_ * (x - m);
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, std::size_t j) const override {
    require_dims(d_, x, mu);
    require_support_index(mu, j);
    return b_ * x - e_ * (x - mean(mu));
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu) const override {
    require_dims(d_, x, mu);
    return (a_ + e_) * identity(d_);
  }
  Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, std::size_t j) const override {
    require_dims(d_, x, mu);
    require_support_index(mu, j);
    return (b_ - e_) * identity(d_);
  }

 private:
  std::string name_;
  std::size_t d_;
  double a_, b_, e_;
};

}  // namespace

HamiltonianPtr make_h_lq(const Matrix& P, const Matrix& Q, const Matrix& R,
                         bool declare_convexity) {
  const auto d = static_cast<std::size_t>(P.rows());
  if (d == 0) throw ValidationError("H_lq: P must be non-empty");
  require_square(P, d, "H_lq: P");
  require_square(Q, d, "H_lq: Q");
  require_square(R, d, "H_lq: R");
  Matrix p_sym = symmetric_part(P);
  std::optional<double> c0;
  if (declare_convexity) {
    const double lo = lambda_min(p_sym);
    if (!(lo > 0.0)) {
      std::ostringstream msg;
      msg << "H_lq: P is not positive definite (smallest eigenvalue " << lo << ")";
      throw ValidationError(msg.str());
    }
    c0 = 1.0 / lo;
  }
  return std::make_shared<LinearQuadraticHamiltonian>(std::move(p_sym), symmetric_part(Q), R, c0);
}

HamiltonianPtr make_h_mf(std::size_t d, double c, double q) {
  if (d == 0) throw ValidationError("H_mf: dimension must be >= 1");
  require_finite(c, "H_mf: c");
  require_finite(q, "H_mf: q");
  return std::make_shared<MeanFieldHamiltonian>(d, c, q);
}

HamiltonianPtr make_h_pxc(HamiltonianPtr base, double alpha) {
  if (!base) throw ValidationError("H_pxc: missing base Hamiltonian");
  require_finite(alpha, "H_pxc: alpha");
  return std::make_shared<PxCoupledHamiltonian>(std::move(base), alpha);
}

CostPtr make_g_quad(std::size_t d, double a, double b, double e) {
  if (d == 0) throw ValidationError("G_quad: dimension must be >= 1");
  require_finite(a, "G_quad: a");
  require_finite(b, "G_quad: b");
  require_finite(e, "G_quad: e");
  return std::make_shared<QuadraticCost>("G_quad", d, a, b, e);
}

CostPtr make_g_anti(std::size_t d, double a) {
  if (d == 0) throw ValidationError("G_anti: dimension must be >= 1");
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("G_anti: a must be positive");
  return std::make_shared<QuadraticCost>("G_anti", d, -a, 0.0, 0.0);
}

}  // namespace mfgcanon
