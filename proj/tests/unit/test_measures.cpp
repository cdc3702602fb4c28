#include <cmath>

#include "test_support.hpp"

namespace mfgcanon {
namespace {

using testing::vec;

TEST(EmpiricalMeasure, Singleton) {
  const auto mu = make_empirical({{0.0}});
  EXPECT_EQ(mu.size(), 1u);
  EXPECT_EQ(mu.dim(), 1u);
  EXPECT_DOUBLE_EQ(mu.weight(), 1.0);
}

TEST(EmpiricalMeasure, SymmetricPairHasZeroMean) {
  const auto mu = make_empirical({{-1.0}, {1.0}});
  EXPECT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu.dim(), 1u);
  EXPECT_DOUBLE_EQ(mean(mu)(0), 0.0);
}

TEST(EmpiricalMeasure, MeanExamples) {
  EXPECT_DOUBLE_EQ(mean(make_empirical({{1.0, 2.0}}))(0), 1.0);
  EXPECT_DOUBLE_EQ(mean(make_empirical({{1.0, 2.0}}))(1), 2.0);
  EXPECT_DOUBLE_EQ(mean(make_empirical({{0.0}, {1.0}, {2.0}}))(0), 1.0);
}

TEST(EmpiricalMeasure, SampledNormalMeanIsNearZero) {
  InstanceSampler rng(2024);
  const auto mu = rng.measure(100, 2);
  EXPECT_EQ(mu.size(), 100u);
  EXPECT_EQ(mu.dim(), 2u);
  // independent average by hand rather than through mean()
  for (Eigen::Index k = 0; k < 2; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += mu.point(i)(k);
    EXPECT_LT(std::abs(s / 100.0), 3.0 / std::sqrt(100.0));
    EXPECT_NEAR(mean(mu)(k), s / 100.0, 1e-15);
  }
}

TEST(EmpiricalMeasure, RejectsBadInput) {
  EXPECT_THROW(make_empirical({}), ValidationError);
  EXPECT_THROW(make_empirical({{1.0}, {1.0, 2.0}}), ValidationError);
  EXPECT_THROW(make_empirical({{std::nan("")}}), ValidationError);
  EXPECT_THROW(make_empirical({{}}), ValidationError);
}

TEST(EmpiricalMeasure, ShiftOnlyMovesOnePoint) {
  const auto mu = make_empirical({{0.0, 0.0}, {1.0, 1.0}});
  const auto nu = mu.with_point_shifted(1, vec({0.5, -0.5}));
  EXPECT_EQ(nu.points().col(0), mu.points().col(0));
  EXPECT_DOUBLE_EQ(nu.point(1)(0), 1.5);
  EXPECT_DOUBLE_EQ(nu.point(1)(1), 0.5);
  EXPECT_THROW(mu.with_point_shifted(2, vec({0.0, 0.0})), ValidationError);
}

TEST(Permutation, Validation) {
  EXPECT_NO_THROW(Permutation({2, 0, 1}));
  EXPECT_THROW(Permutation({0, 0, 1}), ValidationError);
  EXPECT_THROW(Permutation({0, 3, 1}), ValidationError);
  EXPECT_THROW(Permutation({}), ValidationError);
  EXPECT_EQ(Permutation::identity(3)(2), 2u);
}

TEST(Coupling, SingletonIdentity) {
  const auto c = permutation_coupling(make_empirical({{0.0}}), make_empirical({{1.0}}),
                                      Permutation::identity(1));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c.pair(0).left(0), 0.0);
  EXPECT_DOUBLE_EQ(c.pair(0).right(0), 1.0);
  EXPECT_DOUBLE_EQ(c.pair(0).weight, 1.0);
}

TEST(Coupling, SwapPairsCrosswise) {
  const auto c = permutation_coupling(make_empirical({{1.0}, {2.0}}), make_empirical({{10.0}, {20.0}}),
                                      Permutation({1, 0}));
  EXPECT_DOUBLE_EQ(c.pair(0).left(0), 1.0);
  EXPECT_DOUBLE_EQ(c.pair(0).right(0), 20.0);
  EXPECT_DOUBLE_EQ(c.pair(1).left(0), 2.0);
  EXPECT_DOUBLE_EQ(c.pair(1).right(0), 10.0);
}

TEST(Coupling, ThreeCycle) {
  // sigma = (2,3,1) in one-based notation
  const auto c = permutation_coupling(make_empirical({{1.0}, {2.0}, {3.0}}),
                                      make_empirical({{10.0}, {20.0}, {30.0}}), Permutation({1, 2, 0}));
  const double expected_right[] = {20.0, 30.0, 10.0};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(c.pair(i).right(0), expected_right[i]);
    EXPECT_EQ(c.pair(i).right_index, (i + 1) % 3);
    EXPECT_DOUBLE_EQ(c.pair(i).weight, 1.0 / 3.0);
  }
}

TEST(Coupling, RejectsMismatchedMeasures) {
  EXPECT_THROW(permutation_coupling(make_empirical({{1.0}}), make_empirical({{1.0}, {2.0}}),
                                    Permutation::identity(1)),
               ValidationError);
  EXPECT_THROW(permutation_coupling(make_empirical({{1.0}}), make_empirical({{1.0, 2.0}}),
                                    Permutation::identity(1)),
               ValidationError);
}

TEST(InstanceSampler, IsDeterministicPerSeed) {
  InstanceSampler a(11), b(11), c(12);
  const Matrix ma = a.matrix(3, 4);
  EXPECT_EQ(ma, b.matrix(3, 4));
  EXPECT_NE(ma, c.matrix(3, 4));
  InstanceSampler u(5, Distribution::kUniform, 2.0);
  const Matrix mu = u.matrix(10, 10);
  EXPECT_LE(mu.cwiseAbs().maxCoeff(), 2.0);
  const Permutation s = u.permutation(6);
  EXPECT_EQ(s.size(), 6u);
}

}  // namespace
}  // namespace mfgcanon
