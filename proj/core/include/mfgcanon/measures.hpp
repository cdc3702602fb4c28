#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfgcanon/linalg.hpp"

namespace mfgcanon {

/// Uniform empirical probability measure (1/N) sum_i delta_{x_i} on R^d.
///
/// Points are stored column-wise in a d x N matrix. The column order carries
/// no meaning for measure-level quantities; it only identifies points when a
/// coupling is built.
class EmpiricalMeasure {
 public:
  /// Throws ValidationError on an empty matrix or non-finite entries.
  explicit EmpiricalMeasure(Matrix points);

  std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.rows()); }
  double weight() const { return 1.0 / static_cast<double>(size()); }

  const Matrix& points() const { return points_; }
  Eigen::Ref<const Vector> point(std::size_t i) const { return points_.col(static_cast<Eigen::Index>(i)); }

  /// Copy of this measure with point j moved by `delta`.
  EmpiricalMeasure with_point_shifted(std::size_t j, const Vector& delta) const;

 private:
  Matrix points_;
};

EmpiricalMeasure make_empirical(const std::vector<std::vector<double>>& points);

Vector mean(const EmpiricalMeasure& mu);

/// Permutation of {0..N-1}; validated on construction.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> image);
  static Permutation identity(std::size_t n);

  std::size_t size() const { return image_.size(); }
  std::size_t operator()(std::size_t i) const { return image_[i]; }
  std::span<const std::size_t> image() const { return image_; }

 private:
  std::vector<std::size_t> image_;
};

/// Transport plan between two equal-size empirical measures that pairs
/// left point i with right point sigma(i), each pair carrying mass 1/N.
class Coupling {
 public:
  struct Pair {
    Eigen::Ref<const Vector> left;
    Eigen::Ref<const Vector> right;
    std::size_t left_index;
    std::size_t right_index;
    double weight;
  };

  Coupling(EmpiricalMeasure left, EmpiricalMeasure right, Permutation sigma);

  const EmpiricalMeasure& left() const { return left_; }
  const EmpiricalMeasure& right() const { return right_; }
  const Permutation& permutation() const { return sigma_; }
  std::size_t size() const { return sigma_.size(); }
  Pair pair(std::size_t i) const;

 private:
  EmpiricalMeasure left_;
  EmpiricalMeasure right_;
  Permutation sigma_;
};

Coupling permutation_coupling(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                              const Permutation& sigma);

}  // namespace mfgcanon
