#include "mfgcanon/measures.hpp"

#include <sstream>
#include <utility>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {

EmpiricalMeasure::EmpiricalMeasure(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw ValidationError("empirical measure needs at least one point of dimension >= 1");
  }
  if (!points_.allFinite()) {
    throw ValidationError("empirical measure has a non-finite coordinate");
  }
}

EmpiricalMeasure EmpiricalMeasure::with_point_shifted(std::size_t j, const Vector& delta) const {
  if (j >= size()) throw ValidationError("with_point_shifted: support index out of range");
  if (delta.size() != points_.rows()) throw ValidationError("with_point_shifted: dimension mismatch");
  Matrix moved = points_;
  moved.col(static_cast<Eigen::Index>(j)) += delta;
  return EmpiricalMeasure(std::move(moved));
}

EmpiricalMeasure make_empirical(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw ValidationError("empirical measure needs at least one point");
  const std::size_t d = points.front().size();
  if (d == 0) throw ValidationError("points must have dimension >= 1");
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) {
      std::ostringstream msg;
      msg << "point " << i << " has dimension " << points[i].size() << ", expected " << d;
      throw ValidationError(msg.str());
    }
    for (std::size_t k = 0; k < d; ++k) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = points[i][k];
    }
  }
  return EmpiricalMeasure(std::move(m));
}

Vector mean(const EmpiricalMeasure& mu) { return mu.points().rowwise().mean(); }

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  if (image_.empty()) throw ValidationError("permutation of an empty set");
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || seen[v]) throw ValidationError("not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> image(n);
  for (std::size_t i = 0; i < n; ++i) image[i] = i;
  return Permutation(std::move(image));
}

Coupling::Coupling(EmpiricalMeasure left, EmpiricalMeasure right, Permutation sigma)
    : left_(std::move(left)), right_(std::move(right)), sigma_(std::move(sigma)) {
  if (left_.size() != right_.size()) {
    throw ValidationError("coupled measures must have the same number of points");
  }
  if (left_.dim() != right_.dim()) {
    throw ValidationError("coupled measures must have the same dimension");
  }
  if (sigma_.size() != left_.size()) {
    throw ValidationError("permutation size does not match the measures");
  }
}

Coupling::Pair Coupling::pair(std::size_t i) const {
  const std::size_t j = sigma_(i);
  return Pair{left_.point(i), right_.point(j), i, j, left_.weight()};
}

Coupling permutation_coupling(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                              const Permutation& sigma) {
  return Coupling(mu, nu, sigma);
}

}  // namespace mfgcanon
