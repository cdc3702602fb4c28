#include <cmath>

#include "test_support.hpp"

namespace mfgcanon {
namespace {

using testing::eye;
using testing::mat1;

DerivativeBounds kappa_bounds(double kappa) {
  DerivativeBounds b;
  b.c0 = 1.0;
  b.kappa_xp_lower = kappa;
  b.norm_pp = 1.0;
  return b;
}

DerivativeBounds mixed_bounds() {
  DerivativeBounds b = kappa_bounds(2.0);
  b.norm_pmu = 1.0;
  b.norm_xmu = 0.5;
  b.norm_xx = 0.25;
  return b;
}

TEST(LOur, Examples) {
  DerivativeBounds zero;
  zero.norm_pp = 1.0;
  EXPECT_EQ(l_our(zero), 0.0);
  EXPECT_DOUBLE_EQ(l_our(mixed_bounds()), 1.0);
  DerivativeBounds b;
  b.c0 = 4.0;
  b.norm_pp = 1.0;
  b.norm_pmu = 2.0;
  EXPECT_DOUBLE_EQ(l_our(b), 4.0);
}

TEST(AlphaInterval, PureMixedTerm) {
  const auto out = alpha_interval(kappa_bounds(2.0));
  ASSERT_TRUE(out.interval.has_value());
  EXPECT_EQ(out.interval->alpha_minus, 0.0);
  EXPECT_EQ(out.interval->alpha_plus, 4.0);
  EXPECT_EQ(out.interval->alpha_mid, 2.0);
  EXPECT_TRUE(out.hypothesis.holds);
}

TEST(AlphaInterval, MixedBounds) {
  const auto out = alpha_interval(mixed_bounds());
  ASSERT_TRUE(out.interval.has_value());
  EXPECT_DOUBLE_EQ(out.l_our, 1.0);
  EXPECT_NEAR(out.interval->alpha_minus, 1.5 - std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(out.interval->alpha_plus, 1.5 + std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(out.interval->alpha_minus, 0.3820, 1e-4);
  EXPECT_NEAR(out.interval->alpha_plus, 2.6180, 1e-4);
  EXPECT_DOUBLE_EQ(out.interval->alpha_mid, 1.5);
}

TEST(AlphaInterval, RefusalIsAValue) {
  DerivativeBounds b = kappa_bounds(0.0);
  b.norm_xx = 1.0;
  const auto out = alpha_interval(b);
  EXPECT_FALSE(out.interval.has_value());
  EXPECT_FALSE(out.hypothesis.holds);
  EXPECT_EQ(out.hypothesis.lhs, 0.0);
  EXPECT_EQ(out.hypothesis.rhs, 1.0);
}

TEST(AlphaInterval, RootsOfTheQuadratic) {
  InstanceSampler rng(7, Distribution::kUniform, 1.0);
  std::vector<DerivativeBounds> cases = {kappa_bounds(2.0), mixed_bounds()};
  for (int k = 0; k < 200; ++k) {
    DerivativeBounds b;
    b.c0 = 0.5 + std::abs(rng.scalar());
    b.norm_pp = 1.0 / b.c0 + std::abs(rng.scalar());
    b.norm_pmu = std::abs(rng.scalar());
    b.norm_xmu = std::abs(rng.scalar());
    b.norm_xx = std::abs(rng.scalar());
    b.kappa_xp_lower = 5.0 * std::abs(rng.scalar());
    cases.push_back(b);
  }
  int granted = 0;
  for (const auto& b : cases) {
    const auto out = alpha_interval(b);
    if (!out.interval) continue;
    ++granted;
    const double scale = b.norm_pp * out.interval->alpha_plus * out.interval->alpha_plus + l_our(b) + 1.0;
    EXPECT_LE(std::abs(interval_quadratic(b, out.interval->alpha_minus)), 1e-10 * scale);
    EXPECT_LE(std::abs(interval_quadratic(b, out.interval->alpha_plus)), 1e-10 * scale);
    EXPECT_LE(interval_quadratic(b, out.interval->alpha_mid), 1e-12 * scale);
  }
  EXPECT_GT(granted, 20);
}

TEST(AlphaFromLambda, Examples) {
  EXPECT_DOUBLE_EQ(alpha_from_lambda({2.0, 0.0, 1.0, 0.0}), 2.0);
  EXPECT_DOUBLE_EQ(alpha_from_lambda({1.0, 0.0, 1.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(alpha_from_lambda({0.0, 0.0, 1.0, 0.0}), 0.0);
}

TEST(FLambda, Examples) {
  EXPECT_DOUBLE_EQ(f_lambda({0.0, 0.0, 1.0, 0.0}), 1.0);
  EXPECT_NEAR(f_lambda({2.0, 0.0, 1.0, 0.0}), 4.0, 1e-12);
  EXPECT_NEAR(f_lambda({2.0, 2.0, 1.0, 1.0}), 8.0, 1e-12);
  EXPECT_NEAR(f_lambda_expanded({2.0, 2.0, 1.0, 1.0}), 8.0, 1e-12);
}

TEST(FLambda, TwoFormsAgree) {
  InstanceSampler rng(8);
  for (int k = 0; k < 1000; ++k) {
    const LambdaParams l{3.0 * std::abs(rng.scalar()), 3.0 * rng.scalar(), 0.05 + std::abs(rng.scalar()),
                         std::abs(rng.scalar())};
    const double a = f_lambda(l), b = f_lambda_expanded(l);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(PropLast, ZeroBoundsGrantAtBoundary) {
  DerivativeBounds h0 = kappa_bounds(0.0);
  h0.L2 = 0.0;
  const auto c = check_prop_last(h0, 0.0, {3.0, -1.0, 0.5, 2.0});
  EXPECT_TRUE(c.granted());
  EXPECT_TRUE(c.boundary);
}

TEST(PropLast, HandThresholds) {
  DerivativeBounds h0 = kappa_bounds(0.0);
  h0.L2 = 1.0;
  const LambdaParams l{2.0, 0.0, 1.0, 0.0};
  const auto granted = check_prop_last(h0, 6.0, l);
  ASSERT_EQ(granted.reasons.size(), 2u);
  EXPECT_DOUBLE_EQ(granted.reasons[0].rhs, 4.0);
  EXPECT_DOUBLE_EQ(granted.reasons[1].rhs, 5.5);
  EXPECT_TRUE(granted.granted());
  EXPECT_FALSE(check_prop_last(h0, 5.0, l).granted());
  EXPECT_TRUE(check_prop_last(h0, 5.5, l).granted());
  EXPECT_FALSE(check_prop_last(h0, 5.5 - 1e-9, l).granted());
}

TEST(PropLast, ThresholdGrowsAsLambda2Shrinks) {
  DerivativeBounds h0 = kappa_bounds(0.0);
  h0.L2 = 1.0;
  double previous = 0.0;
  for (double l2 : {1.0, 0.1, 0.01, 0.001}) {
    const auto c = check_prop_last(h0, 0.0, {1.0, 1.0, l2, 0.0});
    const double threshold = c.reasons[1].rhs;
    EXPECT_GT(threshold, previous);
    EXPECT_GE(threshold, 1.25 / l2);  // f >= 5|l1| / (4 l2)
    previous = threshold;
  }
}

TEST(PropLast, NotesNonDominatingL2) {
  DerivativeBounds h0 = kappa_bounds(0.0);
  h0.L2 = 0.5;
  const auto c = check_prop_last(h0, 100.0, {2.0, 0.0, 1.0, 0.0});
  bool noted = false;
  for (const auto& n : c.notes) noted = noted || n.find("L2 does not dominate") != std::string::npos;
  EXPECT_TRUE(noted);
  DerivativeBounds missing = kappa_bounds(0.0);
  EXPECT_THROW(check_prop_last(missing, 1.0, {2.0, 0.0, 1.0, 0.0}), ValidationError);
}

TEST(Wellposedness, Examples) {
  const auto granted = wellposedness_certificate(kappa_bounds(2.0), 2.0);
  EXPECT_TRUE(granted.granted());
  EXPECT_EQ(*granted.chosen_alpha, 2.0);
  const auto refused = wellposedness_certificate(kappa_bounds(2.0), 5.0);
  EXPECT_FALSE(refused.granted());
  EXPECT_FALSE(refused.chosen_alpha.has_value());
  const auto plain = wellposedness_certificate(kappa_bounds(2.0), 0.0);
  EXPECT_TRUE(plain.granted());
  EXPECT_EQ(*plain.chosen_alpha, 0.0);
  const auto from_lambda = wellposedness_certificate(kappa_bounds(2.0), LambdaParams{2.0, 0.0, 1.0, 0.0});
  EXPECT_TRUE(from_lambda.granted());
  EXPECT_EQ(*from_lambda.chosen_alpha, 2.0);
}

TEST(Wellposedness, ChosenAlphaIsSmallestAdmissible) {
  const auto c = wellposedness_certificate(mixed_bounds(), -3.0);
  ASSERT_TRUE(c.granted());
  EXPECT_DOUBLE_EQ(*c.chosen_alpha, 1.5 - std::sqrt(1.25));
}

TEST(Wellposedness, SampledBoundsAreStampedNonRigorous) {
  DerivativeBounds b = kappa_bounds(2.0);
  b.provenance = Provenance::kSampled;
  const auto c = wellposedness_certificate(b, 1.0);
  EXPECT_EQ(c.provenance, Provenance::kSampled);
  bool stamped = false;
  for (const auto& n : c.notes) stamped = stamped || n.find("non-rigorous") != std::string::npos;
  EXPECT_TRUE(stamped);
  const auto mixed = wellposedness_certificate(kappa_bounds(2.0), 1.0, Provenance::kSampled);
  EXPECT_EQ(mixed.provenance, Provenance::kSampled);
}

TEST(Wellposedness, RefusedWithoutMixedTerm) {
  // 1/2 |p|^2 + p . m(mu) has kappa = 0 < |d_pmu H| / 2 + sqrt(L_our) = 1
  DerivativeBounds b = kappa_bounds(0.0);
  b.norm_pmu = 1.0;
  const auto c = wellposedness_certificate(b, 2.0);
  EXPECT_FALSE(c.granted());
  ASSERT_EQ(c.reasons.size(), 1u);
  EXPECT_DOUBLE_EQ(c.reasons[0].rhs, 1.0);
}

TEST(Soundness, IntervalAlphasPassOnSampledInstances) {
  // H = 1/2 |p|^2 + k x.p with declared bounds; alphas inside the interval pass.
  InstanceSampler rng(9);
  for (double kappa : {1.0, 2.0, 3.5}) {
    const auto h = make_h_pxc(make_h_lq(eye(2), Matrix::Zero(2, 2), Matrix::Zero(2, 2)), kappa);
    const auto out = alpha_interval(kappa_bounds(kappa));
    ASSERT_TRUE(out.interval.has_value());
    for (int k = 0; k < 10; ++k) {
      const double t = (k + 0.5) / 10.0;
      const double alpha = out.interval->alpha_minus + t * (out.interval->alpha_plus - out.interval->alpha_minus);
      for (int s = 0; s < 50; ++s) {
        const auto mu = rng.measure(1 + static_cast<std::size_t>(s % 5), 2);
        EXPECT_TRUE(check_alpha_disp_H(h, mu, rng.field(mu), alpha).pass);
      }
    }
    for (double alpha : {out.interval->alpha_minus - 0.1 - 0.5, out.interval->alpha_plus + 0.1 + 0.5}) {
      bool failed = false;
      for (int s = 0; s < 10 && !failed; ++s) {
        const auto mu = rng.measure(3, 2);
        failed = !check_alpha_disp_H(h, mu, rng.field(mu), alpha).pass;
      }
      EXPECT_TRUE(failed) << "alpha " << alpha;
    }
  }
}

TEST(Soundness, MeanFieldTermWithMixedTerm) {
  // H_pxc(H_mf(c = 1), 3): c0 = 1, kappa = 3, |pp| = 1, |pmu| = 1
  InstanceSampler rng(10);
  const auto h = make_h_pxc(make_h_mf(1, 1.0, 0.0), 3.0);
  DerivativeBounds b = kappa_bounds(3.0);
  b.norm_pmu = 1.0;
  const auto out = alpha_interval(b);
  ASSERT_TRUE(out.interval.has_value());
  EXPECT_NEAR(out.interval->alpha_minus, 2.5 - std::sqrt(6.0), 1e-14);
  for (double alpha : {out.interval->alpha_minus + 1e-6, 2.0, out.interval->alpha_plus - 1e-6}) {
    for (int s = 0; s < 50; ++s) {
      const auto mu = rng.measure(4, 1);
      EXPECT_TRUE(check_alpha_disp_H(h, mu, rng.field(mu), alpha).pass) << alpha;
    }
  }
}

TEST(Soundness, AntiImpliesSemi) {
  InstanceSampler rng(11);
  for (double a : {0.5, 2.0, 3.0}) {
    const auto g = make_g_anti(2, a);
    // lambda = (l0, 0, 1, l3) with a^2 - l0 a <= l3 makes G anti-monotone
    const LambdaParams l{a, 0.0, 1.0, 0.0};
    const double alpha = alpha_from_lambda(l);
    for (int s = 0; s < 20; ++s) {
      const auto mu = rng.measure(4, 2);
      ASSERT_TRUE(check_anti_monotone(*g, mu, l).pass);
      const auto rep = check_disp_monotone_G(*transform_cost(g, alpha), mu);
      EXPECT_TRUE(rep.pass);
      EXPECT_GE(rep.margin, -1e-12);
    }
  }
}

TEST(MakeCheck, BoundaryNeverRefuses) {
  const auto c = make_check("x", 1.0 - 1e-15, ">=", 1.0);
  EXPECT_TRUE(c.holds);
  EXPECT_TRUE(c.boundary);
  const auto d = make_check("x", 0.9, ">=", 1.0);
  EXPECT_FALSE(d.holds);
  EXPECT_FALSE(d.boundary);
  EXPECT_TRUE(make_check("y", 0.5, "<=", 1.0).holds);
}

}  // namespace
}  // namespace mfgcanon
