#include "gaussemp/bounds.hpp"

#include "support/expect_error.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace gaussemp;

TEST(Constants, ChainingConstant) {
  EXPECT_DOUBLE_EQ(kChainingConstant, std::sqrt(6.0) + std::sqrt(3.0));
}

TEST(DFunctional, MatchesNestedBruteForce) {
  for (double eps : {0.125, 0.25, 0.5}) {
    const double brute = oracle::d_functional_brute(eps);
    EXPECT_NEAR(d_functional(KernelSpec(eps)), brute, 2e-4 * brute) << eps;
  }
}

TEST(DFunctional, WideRangeAgrees) {
  const KernelSpec k(0.2);
  EXPECT_NEAR(d_functional_on(k, -1.0, 2.0, 6000), d_functional(k), 1e-10);
}

TEST(DFunctional, Dominance) {
  EXPECT_LE(d_functional(KernelSpec(0.125)), 4.0);
  EXPECT_LE(d_functional(KernelSpec(0.5)), 2.0);
  for (int i = 1; i <= 10; ++i) {
    const double eps = 0.05 * i;
    EXPECT_LE(d_functional(KernelSpec(eps)), d_functional_upper(eps) + 1e-8) << eps;
  }
}

TEST(DFunctional, GrowsAsBandwidthShrinks) {
  const double a = d_functional(KernelSpec(0.5));
  const double b = d_functional(KernelSpec(0.25));
  const double c = d_functional(KernelSpec(0.125));
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
}

TEST(DFunctional, IntegrandIsVariance) {
  const KernelSpec k(0.3);
  for (double t : {-0.1, 0.2, 0.5, 1.1}) {
    const double m1 = oracle::window_mean([](double x) { return oracle::ramp_prime(0.3, x); }, t);
    const double m2 = oracle::window_mean(
        [](double x) { return oracle::ramp_prime(0.3, x) * oracle::ramp_prime(0.3, x); }, t);
    EXPECT_NEAR(d_functional_integrand(k, t), m2 - m1 * m1, 1e-6);
  }
}

TEST(Lemma1Bound, Examples) {
  EXPECT_NEAR(lemma1_bound(100, 0, 1), 0.4181541, 1e-7);
  EXPECT_NEAR(lemma1_bound(1, 0, 1), 4.181541, 1e-6);
  EXPECT_NEAR(lemma1_bound(100, 9900, 1), 4.181541, 1e-6);
  EXPECT_NEAR(lemma1_bound(100, 0, 3), 3 * lemma1_bound(100, 0, 1), 1e-14);
}

TEST(Theorem2Bound, Examples) {
  EXPECT_NEAR(theorem2_bound(1000, 0), 1.6, 1e-12);
  EXPECT_NEAR(theorem2_bound(1e6, 0), 0.16, 1e-12);
  EXPECT_NEAR(theorem2_bound(100, 9900), 16.0, 1e-12);
  EXPECT_ERRC(theorem2_bound(0, 0), Errc::invalid_parameter);
  EXPECT_ERRC(theorem2_bound(10, -1), Errc::invalid_parameter);
}

TEST(Theorem2Bound, Monotone) {
  double prev = 0.0;
  for (double d : {0.0, 10.0, 1e3, 1e5}) {
    const double v = theorem2_bound(1000, d);
    EXPECT_GE(v, prev);
    prev = v;
  }
  prev = 1e9;
  for (double n : {10.0, 100.0, 1e4}) {
    const double v = theorem2_bound(n, 5.0 * n);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(EpsilonStar, Examples) {
  const EpsilonChoice a = epsilon_star(1000, 0);
  ASSERT_TRUE(a.epsilon.has_value());
  EXPECT_NEAR(*a.epsilon, 0.131037, 1e-6);
  EXPECT_EQ(a.regime, Regime::small_ratio);
  const EpsilonChoice b = epsilon_star(10, 0);
  EXPECT_FALSE(b.epsilon.has_value());
  EXPECT_EQ(b.regime, Regime::saturated);
  EXPECT_EQ(policy_epsilon(10, 0), 0.5);
  EXPECT_NEAR(combined_bound(1000, 0, *a.epsilon), 1.5725, 1e-4);
}

TEST(EpsilonStar, BoundaryIsSmallRatio) {
  // (n + delta)/n^2 = 1/18 exactly at n = 36, delta = 36
  const EpsilonChoice c = epsilon_star(36, 36);
  EXPECT_EQ(c.regime, Regime::small_ratio);
  EXPECT_NEAR(*c.epsilon, 0.5, 1e-15);
}

TEST(EpsilonStar, ProofConsistencyOnRandomPairs) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> logn(std::log(20.0), std::log(1e7));
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  int checked = 0;
  while (checked < 1000) {
    const double n = std::floor(std::exp(logn(gen)));
    const double delta = frac(gen) * n * n / 18.0;
    const EpsilonChoice c = epsilon_star(n, delta);
    if (!c.epsilon) continue;
    ++checked;
    EXPECT_LE(combined_bound(n, delta, *c.epsilon), theorem2_bound(n, delta) * (1 + 1e-12));
    EXPECT_GE(theorem2_bound(n, delta), std::min(combined_bound(n, delta, *c.epsilon), 1.0));
  }
}

TEST(BoundReport, FieldsAndPolicy) {
  const BoundReport r = make_bound_report(1000, 0);
  EXPECT_NEAR(r.epsilon, 0.131037, 1e-6);
  EXPECT_EQ(r.regime, Regime::small_ratio);
  EXPECT_NEAR(r.d_ell, d_functional(KernelSpec(r.epsilon)), 1e-14);
  EXPECT_LE(r.d_ell, r.d_ell_bound + 1e-8);
  EXPECT_NEAR(r.lemma1_value, lemma1_bound(1000, 0, r.d_ell), 1e-15);
  EXPECT_NEAR(r.theorem2_value, 1.6, 1e-12);
  ASSERT_TRUE(r.raw_combined.has_value());
  EXPECT_GE(r.theorem2_value, std::min(*r.raw_combined, 1.0));

  const BoundReport s = make_bound_report(10, 90);
  EXPECT_EQ(s.regime, Regime::saturated);
  EXPECT_EQ(s.epsilon, 0.5);
  EXPECT_FALSE(s.epsilon_star.has_value());

  const BoundReport f = make_bound_report(1000, 0, 0.2);
  EXPECT_EQ(f.epsilon, 0.2);
}
