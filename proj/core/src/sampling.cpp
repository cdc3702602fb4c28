#include "mfgcanon/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "mfgcanon/errors.hpp"

namespace mfgcanon {

InstanceSampler::InstanceSampler(std::uint64_t seed, Distribution dist, double scale)
    : rng_(seed), dist_(dist), scale_(scale) {
  if (!(scale > 0.0)) throw ValidationError("sampler scale must be positive");
}

double InstanceSampler::scalar() {
  if (dist_ == Distribution::kNormal) {
    std::normal_distribution<double> n(0.0, scale_);
    return n(rng_);
  }
  std::uniform_real_distribution<double> u(-scale_, scale_);
  return u(rng_);
}

Vector InstanceSampler::vector(std::size_t d) {
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = scalar();
  return v;
}

Matrix InstanceSampler::matrix(std::size_t d, std::size_t n) {
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index k = 0; k < m.rows(); ++k) m(k, j) = scalar();
  }
  return m;
}

EmpiricalMeasure InstanceSampler::measure(std::size_t n, std::size_t d) {
  return EmpiricalMeasure(matrix(d, n));
}

Permutation InstanceSampler::permutation(std::size_t n) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  // Explicit Fisher-Yates keeps the sequence independent of the library's shuffle.
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(image[i - 1], image[pick(rng_)]);
  }
  return Permutation(std::move(image));
}

}  // namespace mfgcanon
