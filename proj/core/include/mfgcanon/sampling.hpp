#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "mfgcanon/measures.hpp"

namespace mfgcanon {

enum class Distribution { kNormal, kUniform };

/// Seeded source of measures, vector fields on their support, and
/// permutations. Normal draws are N(0, scale^2); uniform draws are
/// U[-scale, scale].
class InstanceSampler {
 public:
  InstanceSampler(std::uint64_t seed, Distribution dist = Distribution::kNormal, double scale = 1.0);

  double scalar();
  Vector vector(std::size_t d);
  /// d x n matrix of independent draws.
  Matrix matrix(std::size_t d, std::size_t n);
  EmpiricalMeasure measure(std::size_t n, std::size_t d);
  /// Values of a field at the support points of mu (d x N).
  Matrix field(const EmpiricalMeasure& mu) { return matrix(mu.dim(), mu.size()); }
  Permutation permutation(std::size_t n);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  Distribution dist_;
  double scale_;
};

}  // namespace mfgcanon
