#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mfgcanon/mfgcanon.hpp"

namespace mfgcanon::testing {

inline Matrix eye(std::size_t d) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

inline Matrix mat1(double v) { return Matrix::Constant(1, 1, v); }

/// max |a - b| / max(1, |b|) entrywise.
inline double rel_error(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
    }
  }
  return worst;
}

inline double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

/// Non-polynomial Hamiltonian used only to exercise the finite-difference
/// machinery:  H = 1/2 |p|^2 + sin(a.x) (1 + c.m) + (b.p) exp(c.m),  m = mean(mu).
class WavyHamiltonian final : public HamiltonianModel {
 public:
  WavyHamiltonian(Vector a, Vector b, Vector c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

  std::string name() const override { return "wavy"; }
  std::size_t dim() const override { return static_cast<std::size_t>(a_.size()); }

  double value(const Vector& x, const EmpiricalMeasure& mu, const Vector& p) const override {
    const double cm = c_.dot(mean(mu));
    return 0.5 * p.squaredNorm() + std::sin(a_.dot(x)) * (1.0 + cm) + b_.dot(p) * std::exp(cm);
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu, const Vector&) const override {
    return std::cos(a_.dot(x)) * (1.0 + c_.dot(mean(mu))) * a_;
  }
  Vector grad_p(const Vector&, const EmpiricalMeasure& mu, const Vector& p) const override {
    return p + b_ * std::exp(c_.dot(mean(mu)));
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, const Vector& p,
                 std::size_t j) const override {
    require_support_index(mu, j);
    return (std::sin(a_.dot(x)) + b_.dot(p) * std::exp(c_.dot(mean(mu)))) * c_;
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure& mu, const Vector&) const override {
    return -std::sin(a_.dot(x)) * (1.0 + c_.dot(mean(mu))) * a_ * a_.transpose();
  }
  Matrix hess_xp(const Vector&, const EmpiricalMeasure&, const Vector&) const override {
    return Matrix::Zero(a_.size(), a_.size());
  }
  Matrix hess_pp(const Vector&, const EmpiricalMeasure&, const Vector&) const override {
    return eye(dim());
  }
  Matrix hess_xmu(const Vector& x, const EmpiricalMeasure& mu, const Vector&,
                  std::size_t j) const override {
    require_support_index(mu, j);
    return std::cos(a_.dot(x)) * a_ * c_.transpose();
  }
  Matrix hess_pmu(const Vector&, const EmpiricalMeasure& mu, const Vector&,
                  std::size_t j) const override {
    require_support_index(mu, j);
    return std::exp(c_.dot(mean(mu))) * b_ * c_.transpose();
  }

 private:
  Vector a_, b_, c_;
};

/// G = log(1 + |x|^2) + sin(c.m) (a.x)
class WavyCost final : public CostModel {
 public:
  WavyCost(Vector a, Vector c) : a_(std::move(a)), c_(std::move(c)) {}

  std::string name() const override { return "wavy"; }
  std::size_t dim() const override { return static_cast<std::size_t>(a_.size()); }

  double value(const Vector& x, const EmpiricalMeasure& mu) const override {
    return std::log1p(x.squaredNorm()) + std::sin(c_.dot(mean(mu))) * a_.dot(x);
  }
  Vector grad_x(const Vector& x, const EmpiricalMeasure& mu) const override {
    return 2.0 * x / (1.0 + x.squaredNorm()) + std::sin(c_.dot(mean(mu))) * a_;
  }
  Vector grad_mu(const Vector& x, const EmpiricalMeasure& mu, std::size_t j) const override {
    require_support_index(mu, j);
    return std::cos(c_.dot(mean(mu))) * a_.dot(x) * c_;
  }
  Matrix hess_xx(const Vector& x, const EmpiricalMeasure&) const override {
    const double s = 1.0 + x.squaredNorm();
    return 2.0 * eye(dim()) / s - 4.0 * x * x.transpose() / (s * s);
  }
  Matrix hess_xmu(const Vector&, const EmpiricalMeasure& mu, std::size_t j) const override {
    require_support_index(mu, j);
    return std::cos(c_.dot(mean(mu))) * a_ * c_.transpose();
  }

 private:
  Vector a_, c_;
};

struct NamedHamiltonian {
  std::string label;
  HamiltonianPtr model;
};

/// Every built-in Hamiltonian family in dimension d with generic parameters.
inline std::vector<NamedHamiltonian> builtin_hamiltonians(std::size_t d) {
  InstanceSampler rng(99, Distribution::kUniform, 1.0);
  const Matrix a = rng.matrix(d, d);
  const Matrix P = a * a.transpose() + eye(d);
  const Matrix Q = rng.matrix(d, d);
  const Matrix R = rng.matrix(d, d);
  return {
      {"H_lq", make_h_lq(P, Q, R)},
      {"H_mf", make_h_mf(d, 0.7, -1.3)},
      {"H_pxc", make_h_pxc(make_h_lq(eye(d), Matrix::Zero(d, d), Matrix::Zero(d, d)), 2.0)},
      {"H_pxc_mf", make_h_pxc(make_h_mf(d, 1.0, 0.5), -0.75)},
  };
}

struct NamedCost {
  std::string label;
  CostPtr model;
};

inline std::vector<NamedCost> builtin_costs(std::size_t d) {
  return {{"G_quad", make_g_quad(d, 0.8, -0.4, 1.7)}, {"G_anti", make_g_anti(d, 2.0)}};
}

}  // namespace mfgcanon::testing
