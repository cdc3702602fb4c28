#include "mfgcanon/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfgcanon/errors.hpp"
#include "mfgcanon/transform.hpp"

namespace mfgcanon {
namespace {

Eigen::Index idx(std::size_t i, std::size_t d) { return static_cast<Eigen::Index>(i * d); }
Eigen::Index sz(std::size_t n) { return static_cast<Eigen::Index>(n); }

void require_field(const Matrix& field, const EmpiricalMeasure& mu, const char* label) {
  if (field.rows() != sz(mu.dim()) || field.cols() != sz(mu.size())) {
    std::ostringstream msg;
    msg << label << " must be " << mu.dim() << " x " << mu.size() << ", got " << field.rows()
        << " x " << field.cols();
    throw ValidationError(msg.str());
  }
  if (!field.allFinite()) throw ValidationError(std::string(label) + " has non-finite entries");
}

void require_finite_form(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": derivative evaluation is not finite");
}

// Floor for the eigenvalues of d_pp H before taking the inverse square root.
double pp_floor(const HamiltonianModel& h) {
  if (auto c0 = h.convexity_constant()) return (1.0 / *c0) * (1.0 - 1e-10);
  return 1e-12;
}

Matrix pp_inverse_sqrt(const HamiltonianModel& h, const Matrix& pp, std::size_t point) {
  try {
    return inverse_sqrt(symmetric_part(pp), pp_floor(h));
  } catch (const ValidationError& e) {
    std::ostringstream msg;
    msg << h.name() << ": d_pp H at support point " << point << ": " << e.what();
    throw ValidationError(msg.str());
  }
}

// 1/4 int |(d_pp H)^{-1/2} int d_pmu H v dmu|^2 dmu as (1/(4N)) B^T B.
void add_quarter_term(Matrix& form, const std::vector<Matrix>& pp_inv_sqrt,
                      const std::vector<std::vector<Matrix>>& pmu, std::size_t n, std::size_t d) {
  const double w = 1.0 / static_cast<double>(n);
  Matrix b = Matrix::Zero(sz(n * d), sz(n * d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b.block(idx(i, d), idx(j, d), sz(d), sz(d)) = w * pp_inv_sqrt[i] * pmu[i][j];
    }
  }
  form.noalias() += (0.25 * w) * (b.transpose() * b);
}

MonotonicityReport make_report(FormKind kind, const Matrix& form, bool nonnegative_form,
                               std::optional<double> tol, std::size_t d) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(form);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  const Vector& ev = solver.eigenvalues();
  const Eigen::Index last = ev.size() - 1;

  MonotonicityReport r;
  r.kind = kind;
  r.tolerance = tol ? *tol : default_tolerance(form);
  const Eigen::Index k = nonnegative_form ? 0 : last;
  r.extremal_eigenvalue = ev(k);
  r.margin = nonnegative_form ? ev(k) : -ev(k);
  r.pass = r.margin >= -r.tolerance;
  if (!r.pass) r.witness = unflatten(solver.eigenvectors().col(k), d);
  return r;
}

double max_abs_deviation(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double route_threshold(const Matrix& a, const Matrix& b) {
  return kRouteTolerance * std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
}

}  // namespace

std::string to_string(FormKind kind) {
  switch (kind) {
    case FormKind::kDispG2nd: return "disp-G-2nd";
    case FormKind::kDispH2nd: return "disp-H-2nd";
    case FormKind::kAlphaDispH: return "alpha-disp-H";
    case FormKind::kAntiG: return "anti-G";
    case FormKind::kDispG1st: return "disp-G-1st";
    case FormKind::kDispH1st: return "disp-H-1st";
  }
  return "unknown";
}

void LambdaParams::validate() const {
  if (!std::isfinite(l0) || !std::isfinite(l1) || !std::isfinite(l2) || !std::isfinite(l3)) {
    throw ValidationError("lambda parameters must be finite");
  }
  if (!(l2 > 0.0)) throw ValidationError("lambda2 must be positive");
  if (!(l3 >= 0.0)) throw ValidationError("lambda3 must be non-negative");
}

double default_tolerance(const Matrix& form) { return 1e-9 * (1.0 + spectral_norm(form)); }

Vector flatten(const Matrix& direction) {
  return Eigen::Map<const Vector>(direction.data(), direction.size());
}

Matrix unflatten(const Vector& v, std::size_t d) {
  if (d == 0 || v.size() % sz(d) != 0) throw ValidationError("unflatten: size is not a multiple of d");
  return Eigen::Map<const Matrix>(v.data(), sz(d), v.size() / sz(d));
}

Matrix assemble_disp_form_G(const CostModel& g, const EmpiricalMeasure& mu) {
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim();
  const double w = 1.0 / static_cast<double>(n);
  Matrix m = Matrix::Zero(sz(n * d), sz(n * d));
  for (std::size_t i = 0; i < n; ++i) {
    const Vector xi = mu.point(i);
    m.block(idx(i, d), idx(i, d), sz(d), sz(d)) += w * g.hess_xx(xi, mu);
    for (std::size_t j = 0; j < n; ++j) {
      m.block(idx(i, d), idx(j, d), sz(d), sz(d)) += (w * w) * g.hess_xmu(xi, mu, j);
    }
  }
  require_finite_form(m, "assemble_disp_form_G");
  return symmetric_part(m);
}

MonotonicityReport check_disp_monotone_G(const CostModel& g, const EmpiricalMeasure& mu,
                                         std::optional<double> tol) {
  return make_report(FormKind::kDispG2nd, assemble_disp_form_G(g, mu), true, tol, mu.dim());
}

double semi_monotonicity_constant(const CostModel& g, const EmpiricalMeasure& mu) {
  return -static_cast<double>(mu.size()) * lambda_min(assemble_disp_form_G(g, mu));
}

Matrix assemble_disp_form_H(const HamiltonianModel& h, const EmpiricalMeasure& mu,
                            const Matrix& p_field) {
  require_field(p_field, mu, "p_field");
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim();
  const double w = 1.0 / static_cast<double>(n);
  Matrix q = Matrix::Zero(sz(n * d), sz(n * d));
  std::vector<Matrix> pp_inv_sqrt(n);
  std::vector<std::vector<Matrix>> pmu(n, std::vector<Matrix>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Vector xi = mu.point(i);
    const Vector pi = p_field.col(sz(i));
    pp_inv_sqrt[i] = pp_inverse_sqrt(h, h.hess_pp(xi, mu, pi), i);
    q.block(idx(i, d), idx(i, d), sz(d), sz(d)) += w * h.hess_xx(xi, mu, pi);
    for (std::size_t j = 0; j < n; ++j) {
      q.block(idx(i, d), idx(j, d), sz(d), sz(d)) += (w * w) * h.hess_xmu(xi, mu, pi, j);
      pmu[i][j] = h.hess_pmu(xi, mu, pi, j);
    }
  }
  add_quarter_term(q, pp_inv_sqrt, pmu, n, d);
  require_finite_form(q, "assemble_disp_form_H");
  return symmetric_part(q);
}

MonotonicityReport check_disp_monotone_H(const HamiltonianModel& h, const EmpiricalMeasure& mu,
                                         const Matrix& p_field, std::optional<double> tol) {
  return make_report(FormKind::kDispH2nd, assemble_disp_form_H(h, mu, p_field), false, tol, mu.dim());
}

Matrix assemble_alpha_disp_form(const HamiltonianModel& h, const EmpiricalMeasure& mu,
                                const Matrix& p_field, double alpha) {
  require_field(p_field, mu, "p_field");
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim();
  const double w = 1.0 / static_cast<double>(n);
  Matrix q = Matrix::Zero(sz(n * d), sz(n * d));
  std::vector<Matrix> pp_inv_sqrt(n);
  std::vector<std::vector<Matrix>> pmu(n, std::vector<Matrix>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Vector xi = mu.point(i);
    const Vector pi = p_field.col(sz(i));
    const Matrix pp = h.hess_pp(xi, mu, pi);
    pp_inv_sqrt[i] = pp_inverse_sqrt(h, pp, i);
    q.block(idx(i, d), idx(i, d), sz(d), sz(d)) +=
        w * (h.hess_xx(xi, mu, pi) - 2.0 * alpha * h.hess_xp(xi, mu, pi) + alpha * alpha * pp);
    for (std::size_t j = 0; j < n; ++j) {
      pmu[i][j] = h.hess_pmu(xi, mu, pi, j);
      q.block(idx(i, d), idx(j, d), sz(d), sz(d)) +=
          (w * w) * (h.hess_xmu(xi, mu, pi, j) - alpha * pmu[i][j]);
    }
  }
  add_quarter_term(q, pp_inv_sqrt, pmu, n, d);
  require_finite_form(q, "assemble_alpha_disp_form");
  return symmetric_part(q);
}

AlphaFormRoutes alpha_disp_routes(const HamiltonianPtr& h, const EmpiricalMeasure& mu,
                                  const Matrix& p_field, double alpha) {
  if (!h) throw ValidationError("alpha_disp_routes: missing model");
  require_field(p_field, mu, "p_field");
  AlphaFormRoutes out;
  out.direct = assemble_alpha_disp_form(*h, mu, p_field, alpha);
  // H_alpha evaluated at p + alpha x sees the base model at p.
  const Matrix shifted = p_field + alpha * mu.points();
  out.transformed = assemble_disp_form_H(*transform_hamiltonian(h, alpha), mu, shifted);
  out.max_deviation = max_abs_deviation(out.direct, out.transformed);
  const double threshold = route_threshold(out.direct, out.transformed);
  if (!(out.max_deviation <= threshold)) {
    std::ostringstream msg;
    msg << "alpha-form routes disagree: max deviation " << out.max_deviation << " > " << threshold;
    throw ConsistencyError(msg.str());
  }
  return out;
}

MonotonicityReport check_alpha_disp_H(const HamiltonianPtr& h, const EmpiricalMeasure& mu,
                                      const Matrix& p_field, double alpha,
                                      std::optional<double> tol) {
  const AlphaFormRoutes routes = alpha_disp_routes(h, mu, p_field, alpha);
  return make_report(FormKind::kAlphaDispH, routes.direct, false, tol, mu.dim());
}

Matrix assemble_anti_form(const CostModel& g, const EmpiricalMeasure& mu,
                          const LambdaParams& lambda) {
  lambda.validate();
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim();
  const double w = 1.0 / static_cast<double>(n);
  const Eigen::Index dim = sz(n * d);
  Matrix m = Matrix::Zero(dim, dim);
  Matrix averaged = Matrix::Zero(dim, dim);  // row block i: int d_xmu G(x_i, x~) . dmu(x~)
  for (std::size_t i = 0; i < n; ++i) {
    const Vector xi = mu.point(i);
    const Matrix gxx = g.hess_xx(xi, mu);
    m.block(idx(i, d), idx(i, d), sz(d), sz(d)) +=
        w * (lambda.l0 * gxx + gxx.transpose() * gxx);
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix k = g.hess_xmu(xi, mu, j);
      // Same orientation as the displacement form: K(x_i, x_j) acts on xi(x_j).
      m.block(idx(i, d), idx(j, d), sz(d), sz(d)) += (lambda.l1 * w * w) * k;
      averaged.block(idx(i, d), idx(j, d), sz(d), sz(d)) = w * k;
    }
  }
  m.noalias() += (lambda.l2 * w) * (averaged.transpose() * averaged);
  m.diagonal().array() -= lambda.l3 * w;
  require_finite_form(m, "assemble_anti_form");
  return symmetric_part(m);
}

Matrix assemble_anti_form_completed_square(const CostModel& g, const EmpiricalMeasure& mu,
                                           const LambdaParams& lambda) {
  lambda.validate();
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim();
  const double w = 1.0 / static_cast<double>(n);
  const Eigen::Index dim = sz(n * d);
  const double shift_xx = lambda.l0 / 2.0;
  const double shift_xmu = lambda.l1 / (2.0 * lambda.l2);
  Matrix first = Matrix::Zero(dim, dim);
  Matrix second = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector xi = mu.point(i);
    first.block(idx(i, d), idx(i, d), sz(d), sz(d)) = g.hess_xx(xi, mu);
    for (std::size_t j = 0; j < n; ++j) {
      second.block(idx(i, d), idx(j, d), sz(d), sz(d)) = w * g.hess_xmu(xi, mu, j);
    }
  }
  first.diagonal().array() += shift_xx;
  second.diagonal().array() += shift_xmu;
  const double rhs = lambda.l3 + shift_xx * shift_xx + lambda.l2 * shift_xmu * shift_xmu;
  Matrix m = w * (first.transpose() * first) + (lambda.l2 * w) * (second.transpose() * second);
  m.diagonal().array() -= rhs * w;
  require_finite_form(m, "assemble_anti_form_completed_square");
  return symmetric_part(m);
}

MonotonicityReport check_anti_monotone(const CostModel& g, const EmpiricalMeasure& mu,
                                       const LambdaParams& lambda, std::optional<double> tol) {
  const Matrix direct = assemble_anti_form(g, mu, lambda);
  const Matrix squared = assemble_anti_form_completed_square(g, mu, lambda);
  const double deviation = max_abs_deviation(direct, squared);
  const double threshold = route_threshold(direct, squared);
  if (!(deviation <= threshold)) {
    std::ostringstream msg;
    msg << "anti-monotonicity forms disagree: max deviation " << deviation << " > " << threshold;
    throw ConsistencyError(msg.str());
  }
  MonotonicityReport r = make_report(FormKind::kAntiG, direct, false, tol, mu.dim());
  if (lambda.lambda0_nonpositive()) r.flags.push_back("lambda0-nonpositive");
  return r;
}

double check_first_order_G(const CostModel& g, const Coupling& coupling) {
  double sum = 0.0;
  for (std::size_t i = 0; i < coupling.size(); ++i) {
    const Coupling::Pair pr = coupling.pair(i);
    const Vector x = pr.left;
    const Vector y = pr.right;
    const Vector diff = g.grad_x(x, coupling.left()) - g.grad_x(y, coupling.right());
    sum += pr.weight * diff.dot(x - y);
  }
  if (!std::isfinite(sum)) throw NumericalError("check_first_order_G: non-finite evaluation");
  return sum;
}

double check_first_order_H(const HamiltonianModel& h, const Coupling& coupling,
                           const Matrix& p1_field, const Matrix& p2_field) {
  require_field(p1_field, coupling.left(), "p1_field");
  require_field(p2_field, coupling.right(), "p2_field");
  double sum = 0.0;
  for (std::size_t i = 0; i < coupling.size(); ++i) {
    const Coupling::Pair pr = coupling.pair(i);
    const Vector x = pr.left;
    const Vector y = pr.right;
    const Vector p1 = p1_field.col(sz(pr.left_index));
    const Vector p2 = p2_field.col(sz(pr.right_index));
    const Vector dx = h.grad_x(x, coupling.left(), p1) - h.grad_x(y, coupling.right(), p2);
    const Vector dp = h.grad_p(x, coupling.left(), p1) - h.grad_p(y, coupling.right(), p2);
    sum += pr.weight * (-dx.dot(x - y) + dp.dot(p1 - p2));
  }
  if (!std::isfinite(sum)) throw NumericalError("check_first_order_H: non-finite evaluation");
  return sum;
}

}  // namespace mfgcanon
