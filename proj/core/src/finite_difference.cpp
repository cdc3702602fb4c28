#include "mfgcanon/finite_difference.hpp"

#include <cmath>
#include <functional>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {
namespace {

// The three argument blocks a value depends on. Particle coordinates are
// addressed as (j, k).
enum class Slot { kX, kP, kParticle };

struct Coordinate {
  Slot slot;
  Eigen::Index index;  // component for x/p, component k for particles
  std::size_t particle = 0;
};

class Evaluator {
 public:
  using ValueFn = std::function<double(const Vector&, const EmpiricalMeasure&, const Vector&)>;

  Evaluator(ValueFn fn, const Vector& x, const EmpiricalMeasure& mu, const Vector& p, double h)
      : fn_(std::move(fn)), x_(x), mu_(mu), p_(p), h_(h) {
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
  }

  double step(const Coordinate& c) const { return h_ * (1.0 + std::abs(base_value(c))); }

  double at() const { return checked(fn_(x_, mu_, p_)); }

  // F with the given coordinates displaced.
  double at(std::initializer_list<std::pair<Coordinate, double>> moves) const {
    Vector x = x_;
    Vector p = p_;
    Matrix particles = mu_.points();
    for (const auto& [c, delta] : moves) {
      switch (c.slot) {
        case Slot::kX: x(c.index) += delta; break;
        case Slot::kP: p(c.index) += delta; break;
        case Slot::kParticle:
          particles(c.index, static_cast<Eigen::Index>(c.particle)) += delta;
          break;
      }
    }
    return checked(fn_(x, EmpiricalMeasure(std::move(particles)), p));
  }

  double first(const Coordinate& a) const {
    const double s = step(a);
    return (at({{a, s}}) - at({{a, -s}})) / (2.0 * s);
  }

  double second(const Coordinate& a, const Coordinate& b) const {
    const double sa = step(a);
    const double sb = step(b);
    if (same(a, b)) {
      return (at({{a, sa}}) - 2.0 * at() + at({{a, -sa}})) / (sa * sa);
    }
    return (at({{a, sa}, {b, sb}}) - at({{a, sa}, {b, -sb}}) - at({{a, -sa}, {b, sb}}) +
            at({{a, -sa}, {b, -sb}})) /
           (4.0 * sa * sb);
  }

 private:
  static bool same(const Coordinate& a, const Coordinate& b) {
    return a.slot == b.slot && a.index == b.index && a.particle == b.particle;
  }

  double base_value(const Coordinate& c) const {
    switch (c.slot) {
      case Slot::kX: return x_(c.index);
      case Slot::kP: return p_(c.index);
      case Slot::kParticle: return mu_.points()(c.index, static_cast<Eigen::Index>(c.particle));
    }
    return 0.0;
  }

  static double checked(double v) {
    if (!std::isfinite(v)) throw NumericalError("non-finite model evaluation during differencing");
    return v;
  }

  ValueFn fn_;
  const Vector& x_;
  const EmpiricalMeasure& mu_;
  const Vector& p_;
  double h_;
};

Coordinate xc(Eigen::Index a) { return {Slot::kX, a}; }
Coordinate pc(Eigen::Index a) { return {Slot::kP, a}; }
Coordinate particle(std::size_t j, Eigen::Index k) { return {Slot::kParticle, k, j}; }

}  // namespace

HamiltonianJet fd_derivatives(const HamiltonianModel& model, const Vector& x,
                              const EmpiricalMeasure& mu, const Vector& p, double h) {
  require_dims(model.dim(), x, mu, p);
  const Evaluator f(
      [&model](const Vector& xx, const EmpiricalMeasure& m, const Vector& pp) {
        return model.value(xx, m, pp);
      },
      x, mu, p, h);
  const Eigen::Index d = x.size();
  const std::size_t n = mu.size();
  const double scale = static_cast<double>(n);

  HamiltonianJet out;
  out.value = f.at();
  out.grad_x.resize(d);
  out.grad_p.resize(d);
  out.hess_xx.resize(d, d);
  out.hess_xp.resize(d, d);
  out.hess_pp.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    out.grad_x(a) = f.first(xc(a));
    out.grad_p(a) = f.first(pc(a));
    for (Eigen::Index b = 0; b < d; ++b) {
      out.hess_xx(a, b) = f.second(xc(a), xc(b));
      out.hess_xp(a, b) = f.second(xc(a), pc(b));
      out.hess_pp(a, b) = f.second(pc(a), pc(b));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    Vector g(d);
    Matrix kx(d, d), kp(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
      g(b) = scale * f.first(particle(j, b));
      for (Eigen::Index a = 0; a < d; ++a) {
        kx(a, b) = scale * f.second(xc(a), particle(j, b));
        kp(a, b) = scale * f.second(pc(a), particle(j, b));
      }
    }
    out.grad_mu.push_back(std::move(g));
    out.hess_xmu.push_back(std::move(kx));
    out.hess_pmu.push_back(std::move(kp));
  }
  return out;
}

CostJet fd_derivatives(const CostModel& model, const Vector& x, const EmpiricalMeasure& mu,
                       double h) {
  require_dims(model.dim(), x, mu);
  const Vector no_p = Vector::Zero(x.size());
  const Evaluator f(
      [&model](const Vector& xx, const EmpiricalMeasure& m, const Vector&) {
        return model.value(xx, m);
      },
      x, mu, no_p, h);
  const Eigen::Index d = x.size();
  const std::size_t n = mu.size();
  const double scale = static_cast<double>(n);

  CostJet out;
  out.value = f.at();
  out.grad_x.resize(d);
  out.hess_xx.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    out.grad_x(a) = f.first(xc(a));
    for (Eigen::Index b = 0; b < d; ++b) out.hess_xx(a, b) = f.second(xc(a), xc(b));
  }
  for (std::size_t j = 0; j < n; ++j) {
    Vector g(d);
    Matrix kx(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
      g(b) = scale * f.first(particle(j, b));
      for (Eigen::Index a = 0; a < d; ++a) kx(a, b) = scale * f.second(xc(a), particle(j, b));
    }
    out.grad_mu.push_back(std::move(g));
    out.hess_xmu.push_back(std::move(kx));
  }
  return out;
}

}  // namespace mfgcanon
