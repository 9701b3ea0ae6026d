#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "crmorse/morse.hpp"
#include "support.hpp"

using namespace crmorse;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PencilField single(int n, double delta, const HermitianMatrix& r, const HermitianMatrix& l, double w = 1.0) {
  PencilField f;
  f.n = n;
  f.delta = delta;
  f.points.push_back({"p0", w, r, l});
  return f;
}

HermitianMatrix diag2(double a, double b) { return HermitianMatrix::real(2, {a, 0.0, 0.0, b}); }

PencilField mixed_field() { return single(3, 2.0, diag2(1.0, -1.0), diag2(1.0, 1.0)); }

}  // namespace

TEST(Density, LinearExample) {
  const auto f = single(2, 1.0, HermitianMatrix::real(1, {2.0}), HermitianMatrix::real(1, {1.0}));
  EXPECT_NEAR(density_q(f, 0, 1.0), 4.0 / (kTwoPi * kTwoPi), 1e-14);
  EXPECT_NEAR(density_q(f, 0, 1.0), 0.101321, 1e-6);
  EXPECT_NEAR(weak_bound(f, 0, 1.0, 1), density_q(f, 0, 1.0), 1e-15);
  EXPECT_NEAR(weak_bound(f, 0, 1.0, 10), 10.1321, 1e-4);
}

TEST(Density, LeviFlatConstantPencil) {
  const auto r = HermitianMatrix::real(2, {2.0, 1.0, 1.0, 2.0});
  const auto f = single(3, 0.5, r, HermitianMatrix::zero(2));
  EXPECT_NEAR(density_q(f, 0, 0.5), std::pow(kTwoPi, -3) * 3.0 * 1.0, 1e-14);
  EXPECT_EQ(density_q(f, 2, 0.5), 0.0);
  EXPECT_EQ(density_q(f, 1, 0.5), 0.0);
}

TEST(Density, MixedExample) {
  const auto c = densities(mixed_field(), 2.0);
  const double norm = std::pow(kTwoPi, -3);
  EXPECT_NEAR(c[0], 9.0 * norm, 1e-13);
  EXPECT_NEAR(c[1], 2.0 / 3.0 * norm, 1e-13);
  EXPECT_NEAR(c[2], 9.0 * norm, 1e-13);
}

TEST(Density, WeightsEnterLinearly) {
  std::mt19937_64 rng(41);
  PencilField f;
  f.n = 3;
  f.delta = 1.0;
  for (int i = 0; i < 4; ++i) {
    f.points.push_back({"s" + std::to_string(i), 0.25 + i, testkit::random_hermitian(rng, 2),
                        testkit::random_hermitian(rng, 2)});
  }
  const auto all = densities(f, 1.0);
  std::vector<double> sum(all.size(), 0.0);
  for (const auto& p : f.points) {
    const auto part = densities(single(3, 1.0, p.R, p.L, p.weight), 1.0);
    for (std::size_t q = 0; q < sum.size(); ++q) sum[q] += part[q];
  }
  for (std::size_t q = 0; q < sum.size(); ++q) EXPECT_NEAR(all[q], sum[q], 1e-13 * std::max(1.0, sum[q]));
}

TEST(Density, NondecreasingInDelta) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = single(3, 2.0, testkit::random_hermitian(rng, 2), testkit::random_hermitian(rng, 2));
    double prev_total = 0.0;
    std::vector<double> prev(3, 0.0);
    for (double delta : {0.25, 0.5, 1.0, 2.0}) {
      const auto c = densities(f, delta);
      double total = 0.0;
      for (std::size_t q = 0; q < c.size(); ++q) {
        EXPECT_GE(c[q], prev[q] - 1e-15);
        total += c[q];
      }
      EXPECT_GE(total, prev_total);
      prev = c;
      prev_total = total;
    }
  }
}

TEST(Density, DeltaBeyondFieldRejected) {
  const auto f = mixed_field();
  EXPECT_THROW(densities(f, 3.0), InputError);
  EXPECT_THROW(density_q(f, 3, 1.0), InputError);
  EXPECT_THROW(weak_bound(f, 0, 1.0, 0), InputError);
}

TEST(Density, DegenerateSampleIsNamed) {
  PencilField f = mixed_field();
  f.points.push_back({"bad-sample", 1.0, diag2(1.0, 0.0), diag2(2.0, 0.0)});
  try {
    densities(f, 1.0);
    FAIL() << "expected DegeneratePencil";
  } catch (const DegeneratePencil& e) {
    EXPECT_NE(std::string(e.what()).find("bad-sample"), std::string::npos);
  }
}

TEST(RrhTotal, TwoWaysOnMixedExample) {
  const auto f = mixed_field();
  const auto c = densities(f, 2.0);
  const double alternating = c[0] - c[1] + c[2];
  EXPECT_NEAR(alternating, (9.0 - 2.0 / 3.0 + 9.0) * std::pow(kTwoPi, -3), 1e-13);
  EXPECT_NEAR(rrh_total(f, 2.0), alternating, 1e-10 * std::abs(alternating));
}

TEST(RrhTotal, LeviFlatParity) {
  const auto r2 = HermitianMatrix::real(2, {2.0, 1.0, 1.0, 2.0});
  const auto f2 = single(3, 0.5, r2, HermitianMatrix::zero(2));
  EXPECT_NEAR(rrh_total(f2, 0.5), densities(f2, 0.5)[0], 1e-15);
  EXPECT_NEAR(rrh_total(single(3, 0.5, -1.0 * r2, HermitianMatrix::zero(2)), 0.5), rrh_total(f2, 0.5), 1e-15);
  const auto r3 = HermitianMatrix::real(3, {2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0});
  const auto f3 = single(4, 0.5, r3, HermitianMatrix::zero(3));
  EXPECT_NEAR(rrh_total(single(4, 0.5, -1.0 * r3, HermitianMatrix::zero(3)), 0.5), -rrh_total(f3, 0.5), 1e-15);
}

TEST(RrhTotal, AlternatingSumMatchesSignedIntegralOnRandomFields) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 4;
    PencilField f;
    f.n = d + 1;
    f.delta = 1.0;
    for (int i = 0; i < 3; ++i) {
      f.points.push_back({"s", 0.5 + i, testkit::random_hermitian(rng, d), testkit::random_hermitian(rng, d)});
    }
    const auto c = densities(f, 1.0);
    double alternating = 0.0;
    for (int q = 0; q <= d; ++q) alternating += (q % 2 == 0 ? 1.0 : -1.0) * c[static_cast<std::size_t>(q)];
    double scale = 0.0;
    for (double x : c) scale += x;
    EXPECT_NEAR(rrh_total(f, 1.0), alternating, 1e-10 * std::max(scale, 1e-300));
  }
}

TEST(StrongSums, PositivePencilPattern) {
  const auto r = HermitianMatrix::real(3, {2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0});
  const auto l = HermitianMatrix::real(3, {1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.5});
  const auto f = single(4, 0.1, r, l);
  const auto c = densities(f, 0.1);
  const auto s = strong_sums(f, 0.1);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(c[1], 0.0);
  EXPECT_NEAR(s[0], c[0], 1e-15);
  EXPECT_NEAR(s[1], -c[0], 1e-15);
  EXPECT_NEAR(s[2], c[0], 1e-15);
  EXPECT_NEAR(s[3], c[0], 1e-13);  // signed total of a positive pencil
}

TEST(CheckXq, CrossingAtMinusOneHalf) {
  const auto f = single(3, 2.0, diag2(1.0, 2.0), diag2(1.0, -1.0));
  const auto res = check_Xq(f, 1);
  EXPECT_TRUE(res.holds);
  EXPECT_NEAR(res.max_delta, 0.5, 1e-12);
}

TEST(CheckXq, SignatureAtZeroFails) {
  const auto f = single(3, 1.0, diag2(-1.0, 2.0), diag2(1.0, 1.0));
  const auto res = check_Xq(f, 1);
  EXPECT_FALSE(res.holds);
  EXPECT_EQ(res.max_delta, 0.0);
}

TEST(CheckXq, PositiveCurvatureImpliesVanishing) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    PencilField f;
    f.n = d + 1;
    f.delta = 2.0;
    for (int i = 0; i < 3; ++i) {
      f.points.push_back({"s", 1.0, testkit::random_positive_definite(rng, d), testkit::random_hermitian(rng, d, 2.0)});
    }
    for (int q = 1; q <= d; ++q) {
      const auto res = check_Xq(f, q);
      ASSERT_TRUE(res.holds);
      EXPECT_GT(res.max_delta, 0.0);
      EXPECT_EQ(density_q(f, q, 0.5 * res.max_delta), 0.0);
    }
  }
}

TEST(Classify, IdentityCurvature) {
  const auto f = single(3, 1.0, HermitianMatrix::identity(2), diag2(3.0, -2.0));
  const auto pos = classify_bundle(f);
  EXPECT_TRUE(pos.positive_everywhere);
  ASSERT_TRUE(pos.semi_positive_delta.has_value());
  EXPECT_NEAR(*pos.semi_positive_delta, 1.0 / 6.0, 1e-12);  // 1 + 6s = 0 comes before 1 - 4s = 0
}

TEST(Classify, SemidefiniteOnOneSideOnly) {
  const auto pos = classify_bundle(single(3, 1.0, diag2(1.0, 0.0), diag2(0.0, 1.0)));
  EXPECT_FALSE(pos.positive_everywhere);
  EXPECT_FALSE(pos.semi_positive_delta.has_value());
}

TEST(Classify, HeisenbergCurvature) {
  const auto f = single(3, 0.5, HermitianMatrix::real(2, {3.0, 1.0, 1.0, 3.0}), diag2(1.0, 2.0));
  EXPECT_TRUE(classify_bundle(f).positive_everywhere);
}

TEST(Bigness, Verdicts) {
  const auto positive = single(3, 0.5, HermitianMatrix::identity(2), diag2(1.0, 2.0));
  const auto b1 = bigness_verdict(positive);
  EXPECT_TRUE(b1.big);
  EXPECT_EQ(b1.reason, BignessReason::PositiveBundle);

  PencilField semi = positive;
  // det(R + 2sL) vanishes identically here: exercises the bisection path
  semi.points.push_back({"flat-direction", 1.0, diag2(1.0, 0.0), HermitianMatrix::zero(2)});
  const auto pos = classify_bundle(semi);
  EXPECT_FALSE(pos.positive_everywhere);
  ASSERT_TRUE(pos.semi_positive_delta.has_value());
  const auto b2 = bigness_verdict(semi);
  EXPECT_TRUE(b2.big);
  EXPECT_EQ(b2.reason, BignessReason::GrauertRiemenschneider);
  EXPECT_STREQ(to_string(b2.reason), "grauert-riemenschneider");

  const auto b3 = bigness_verdict(single(3, 0.5, diag2(1.0, -1.0), diag2(1.0, 1.0)));
  EXPECT_FALSE(b3.big);
  EXPECT_EQ(b3.reason, BignessReason::Inconclusive);
}

TEST(MorseReport, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(59);
  PencilField f;
  f.n = 4;
  f.delta = 1.0;
  for (int i = 0; i < 24; ++i) {
    f.points.push_back({"s" + std::to_string(i), 1.0 + 0.1 * i, testkit::random_hermitian(rng, 3),
                        testkit::random_hermitian(rng, 3)});
  }
  const auto a = morse_report(f, 0.75, {1});
  const auto b = morse_report(f, 0.75, {4});
  EXPECT_EQ(a.densities, b.densities);
  EXPECT_EQ(a.rrh_total, b.rrh_total);
  EXPECT_EQ(a.strong_sums, b.strong_sums);
}

TEST(Validate, RejectsBadFields) {
  auto f = mixed_field();
  f.points[0].weight = 0.0;
  EXPECT_THROW(validate(f), InputError);
  f = mixed_field();
  f.n = 4;
  EXPECT_THROW(validate(f), InputError);
  f = mixed_field();
  f.points.clear();
  EXPECT_THROW(validate(f), InputError);
}
