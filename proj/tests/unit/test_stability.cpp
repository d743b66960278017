#include <gtest/gtest.h>

#include <cmath>

#include "fracstep/stability.hpp"

namespace fracstep {
namespace {

TEST(StabilityBound, ClosedForms) {
  EXPECT_NEAR(inverse_critical_ratio(FormulaFamily::bdf1, 0.5, 1.0), std::pow(2.0, 1.5), 1e-12);
  EXPECT_NEAR(*stability_bound(FormulaFamily::bdf1, 0.5, 1.0), 0.35355339059327373, 1e-12);
  EXPECT_NEAR(inverse_critical_ratio(FormulaFamily::bdf1, 0.5, 0.8), 1.2 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(*stability_bound(FormulaFamily::bdf1, 0.5, 0.8), 0.58925565098878963, 1e-12);
  EXPECT_NEAR(*stability_bound(FormulaFamily::bdf1, 1.0, 1.0), 0.5, 1e-15);
  for (double g = 0.05; g < 1.0; g += 0.05) {
    EXPECT_NEAR(inverse_critical_ratio(FormulaFamily::bdf1, g, 1.0), std::pow(2.0, 2.0 - g), 1e-12);
  }
}

TEST(StabilityBound, UnconditionalAtOrBelowHalf) {
  for (auto f : {FormulaFamily::bdf1, FormulaFamily::bdf2, FormulaFamily::bdf3, FormulaFamily::ng2}) {
    for (double g : {0.2, 0.5, 1.0}) {
      for (double l : {0.0, 0.3, 0.5}) {
        EXPECT_FALSE(stability_bound(f, g, l).has_value());
        EXPECT_EQ(theoretical_verdict(f, g, l, 1e6), Verdict::unconditionally_stable);
      }
    }
  }
  EXPECT_EQ(inverse_critical_ratio(FormulaFamily::bdf1, 0.5, 0.5), 0.0);
}

TEST(StabilityBound, VerdictAgainstBound) {
  EXPECT_EQ(theoretical_verdict(FormulaFamily::bdf1, 0.5, 1.0, 0.33), Verdict::stable);
  EXPECT_EQ(theoretical_verdict(FormulaFamily::bdf1, 0.5, 1.0, 0.37), Verdict::unstable);
  EXPECT_EQ(theoretical_verdict(FormulaFamily::bdf1, 0.5, 0.8, 0.55), Verdict::stable);
  EXPECT_EQ(theoretical_verdict(FormulaFamily::bdf1, 0.5, 0.8, 0.7), Verdict::unstable);
}

TEST(StabilityBound, AllFamiliesMeetAtClassicalLimit) {
  for (auto f : {FormulaFamily::bdf1, FormulaFamily::bdf2, FormulaFamily::bdf3, FormulaFamily::ng2}) {
    EXPECT_NEAR(inverse_critical_ratio(f, 1.0, 1.0), 2.0, 1e-14);
  }
}

TEST(StabilityBound, StrictlyDecreasingInLambda) {
  for (double g : {0.25, 0.5, 0.75}) {
    double prev = INFINITY;
    for (int i = 1; i <= 10; ++i) {
      const double l = 0.5 + 0.05 * i;
      const double s = *stability_bound(FormulaFamily::bdf2, g, l);
      EXPECT_LT(s, prev);
      prev = s;
    }
  }
}

TEST(StabilityBound, OrderMonotonicity) {
  for (double g = 0.05; g < 1.0; g += 0.05) {
    const double b1 = inverse_critical_ratio(FormulaFamily::bdf1, g, 1.0);
    const double n2 = inverse_critical_ratio(FormulaFamily::ng2, g, 1.0);
    const double b2 = inverse_critical_ratio(FormulaFamily::bdf2, g, 1.0);
    const double b3 = inverse_critical_ratio(FormulaFamily::bdf3, g, 1.0);
    // 2^a (1 + a) >= 4^a on [0, 1] since 2^a lies below its chord, so NG2
    // sits between BDF2 and BDF3.
    EXPECT_LT(b1, b2);
    EXPECT_LT(b2, n2);
    EXPECT_LT(n2, b3);
  }
}

TEST(Probe, PublishedStableAndUnstableCases) {
  const auto stable = probe_stability(FormulaFamily::bdf1, 0.5, 1.0, 0.33);
  EXPECT_EQ(stable.empirical, Verdict::stable);
  EXPECT_LT(stable.growth_factor, 1.0);
  EXPECT_EQ(probe_stability(FormulaFamily::bdf1, 0.5, 1.0, 0.37).empirical, Verdict::unstable);
  EXPECT_EQ(probe_stability(FormulaFamily::bdf1, 0.5, 0.8, 0.7).empirical, Verdict::unstable);
  const auto implicit = probe_stability(FormulaFamily::bdf1, 1.0, 0.0, 50.0);
  EXPECT_NE(implicit.empirical, Verdict::unstable);
  EXPECT_LT(implicit.growth_factor, 1.0);
}

TEST(Probe, UnconditionalRegimeStaysBounded) {
  for (double l : {0.0, 0.25, 0.5}) {
    for (double g : {0.25, 0.5, 0.75}) {
      for (double s : {1.0, 10.0, 100.0}) {
        const auto r = probe_stability(FormulaFamily::bdf1, g, l, s);
        EXPECT_LE(r.growth_factor, 1.0 + 1e-6) << l << " " << g << " " << s;
      }
    }
  }
}

TEST(Probe, OptionsValidated) {
  ProbeOptions o;
  o.nodes = 7;
  EXPECT_THROW(probe_stability(FormulaFamily::bdf1, 0.5, 1.0, 0.3, o), std::invalid_argument);
  o = {};
  o.steps = 10;
  EXPECT_THROW(probe_stability(FormulaFamily::bdf1, 0.5, 1.0, 0.3, o), std::invalid_argument);
}

TEST(EmpiricalThreshold, PublishedBrackets) {
  EXPECT_NEAR(find_empirical_threshold(FormulaFamily::bdf1, 0.5, 1.0, {0.2, 0.6}), 0.3536, 0.01);
  EXPECT_NEAR(find_empirical_threshold(FormulaFamily::bdf2, 0.5, 1.0, {0.1, 0.5}), 0.25, 0.01);
  EXPECT_NEAR(find_empirical_threshold(FormulaFamily::bdf1, 1.0, 1.0, {0.3, 0.7}), 0.5, 0.01);
}

TEST(EmpiricalThreshold, BadBracket) {
  EXPECT_THROW(find_empirical_threshold(FormulaFamily::bdf1, 0.5, 1.0, {0.1, 0.2}), BracketError);
}

TEST(PhaseDiagram, LinearInLambda) {
  std::vector<double> lambdas;
  for (int i = 0; i <= 10; ++i) lambdas.push_back(0.5 + 0.05 * i);
  const auto pts = phase_diagram(FormulaFamily::bdf1, {0.5}, lambdas);
  ASSERT_EQ(pts.size(), lambdas.size());
  for (const auto& p : pts) EXPECT_NEAR(p.inv_s_cross, 2 * (2 * p.lambda - 1) * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(pts.front().inv_s_cross, 0.0);
}

}  // namespace
}  // namespace fracstep
