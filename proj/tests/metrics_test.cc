/*
 * Copyright 2026 The lsr Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lsr/metrics.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gtest/gtest.h"

namespace lsr {
namespace {

// Values below were evaluated with 40-digit arithmetic (mpmath).
constexpr double kLogit6793 = 0.75055674949814701;
constexpr double kLogit0967 = -2.2344413216965492;
constexpr double kInvLogitNeg9898 = 0.27095158320537764;
constexpr double kBetaLambdaImageNet = 0.29863828059581038;
constexpr double kBetaLambdaIWildCam = 0.43542913124635600;

const LogitLinearFit kImageNet{0.825, -1.609, 0};
const LogitLinearFit kIWildCam{0.850, -0.496, 0};
const LogitLinearFit kCamelyon{0.325, 0.665, 0};

TEST(Logit, KnownValues) {
  EXPECT_EQ(Logit(0.5), 0.0);
  EXPECT_NEAR(Logit(0.6793), kLogit6793, 1e-14);
  EXPECT_NEAR(Logit(0.0967), kLogit0967, 1e-14);
}

TEST(Logit, OddSymmetry) {
  for (double x : {1e-6, 0.01, 0.2, 0.31, 0.49}) {
    EXPECT_NEAR(Logit(1.0 - x), -Logit(x), 1e-9) << x;
  }
}

TEST(Logit, RejectsBoundaries) {
  EXPECT_THROW(Logit(0.0), std::domain_error);
  EXPECT_THROW(Logit(1.0), std::domain_error);
  EXPECT_THROW(Logit(-0.1), std::domain_error);
  EXPECT_THROW(Logit(std::nan("")), std::domain_error);
}

TEST(Logit, NegLogComplementForm) {
  EXPECT_NEAR(Logit(0.5, LogitForm::kNegLogComplement), std::log(2.0), 1e-15);
  EXPECT_NEAR(InvLogit(Logit(0.3, LogitForm::kNegLogComplement),
                       LogitForm::kNegLogComplement),
              0.3, 1e-15);
}

TEST(InvLogit, KnownValues) {
  EXPECT_EQ(InvLogit(0.0), 0.5);
  EXPECT_NEAR(InvLogit(-0.9898), kInvLogitNeg9898, 1e-15);
  EXPECT_NEAR(InvLogit(Logit(0.31)), 0.31, 1e-15);
  // Saturates without overflow.
  EXPECT_EQ(InvLogit(-1000.0), 0.0);
  EXPECT_EQ(InvLogit(1000.0), 1.0);
}

TEST(InvLogit, RoundTripsOverTheClampedRange) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(kMinAccuracy, kMaxAccuracy);
  std::vector<double> xs = {kMinAccuracy, kMaxAccuracy, 0.5};
  for (int i = 0; i < 10000; ++i) xs.push_back(u(rng));
  for (double x : xs) {
    EXPECT_NEAR(InvLogit(Logit(x)), x, 1e-12) << x;
  }
}

TEST(ClampAccuracy, ClampsAndReports) {
  bool clamped = false;
  EXPECT_EQ(ClampAccuracy(0.0, &clamped), kMinAccuracy);
  EXPECT_TRUE(clamped);
  EXPECT_EQ(ClampAccuracy(1.0, &clamped), kMaxAccuracy);
  EXPECT_TRUE(clamped);
  EXPECT_EQ(ClampAccuracy(0.25, &clamped), 0.25);
  EXPECT_FALSE(clamped);
  EXPECT_THROW(ClampAccuracy(std::nan("")), std::domain_error);
}

std::vector<AccuracyPoint> ForwardGenerate(const LogitLinearFit& truth,
                                           const std::vector<double>& ids) {
  std::vector<AccuracyPoint> pts;
  for (double id : ids) {
    pts.push_back({id, InvLogit(truth.w * Logit(id) + truth.b)});
  }
  return pts;
}

// ID logits where |w * x + b| <= 12 (and |x| <= 6), so the forward pass
// does not saturate binary64.
std::pair<double, double> SafeIdLogits(const LogitLinearFit& truth) {
  double lo = -6.0, hi = 6.0;
  if (truth.w != 0.0) {
    double a = (-12.0 - truth.b) / truth.w;
    double b = (12.0 - truth.b) / truth.w;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  return {lo, hi};
}

TEST(FitBeta, IdentityCurve) {
  const std::vector<AccuracyPoint> pts = {
      {0.1, 0.1}, {0.35, 0.35}, {0.5, 0.5}, {0.8, 0.8}};
  const BetaFit f = FitBeta(pts);
  EXPECT_EQ(f.fit.w, 1.0);
  EXPECT_EQ(f.fit.b, 0.0);
  EXPECT_EQ(f.fit.n, 4u);
  EXPECT_EQ(f.stats.d, 0.0);
  EXPECT_EQ(f.stats.r2, 1.0);
  EXPECT_NEAR(f.stats.mae_pp, 0.0, 1e-12);
}

TEST(FitBeta, RecoversImageNetParameters) {
  std::vector<double> ids;
  for (int i = 0; i < 10; ++i) ids.push_back(0.05 + 0.09 * i);
  const BetaFit f = FitBeta(ForwardGenerate(kImageNet, ids));
  EXPECT_NEAR(f.fit.w, 0.825, 1e-9);
  EXPECT_NEAR(f.fit.b, -1.609, 1e-9);
  EXPECT_LT(f.stats.d, 1e-9);
  EXPECT_EQ(f.stats.residuals.size(), 10u);
}

TEST(FitBeta, ResidualDeviationUsesNMinusTwo) {
  const std::vector<AccuracyPoint> pts = {
      {0.2, 0.15}, {0.4, 0.33}, {0.6, 0.41}, {0.7, 0.58}, {0.9, 0.71}};
  const BetaFit f = FitBeta(pts);
  double ss = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double r =
        Logit(pts[k].acc_ood) - (f.fit.w * Logit(pts[k].acc_id) + f.fit.b);
    EXPECT_NEAR(f.stats.residuals[k], r, 1e-15);
    ss += r * r;
  }
  EXPECT_NEAR(f.stats.d, std::sqrt(ss / 3.0), 1e-15);

  double mae = 0.0;
  for (const auto& p : pts) mae += std::abs(p.acc_ood - PredictBeta(f.fit, p.acc_id));
  EXPECT_NEAR(f.stats.mae_pp, 100.0 * mae / 5.0, 1e-12);
  EXPECT_GT(f.stats.r2, 0.0);
  EXPECT_LT(f.stats.r2, 1.0);
}

TEST(FitBeta, Errors) {
  const std::vector<AccuracyPoint> two = {{0.2, 0.1}, {0.4, 0.3}};
  EXPECT_THROW(FitBeta(two), std::invalid_argument);
  const std::vector<AccuracyPoint> same_id = {{0.4, 0.1}, {0.4, 0.3}, {0.4, 0.2}};
  EXPECT_THROW(FitBeta(same_id), std::invalid_argument);
  const std::vector<AccuracyPoint> bad = {{0.0, 0.1}, {0.4, 0.3}, {0.5, 0.2}};
  EXPECT_THROW(FitBeta(bad), std::domain_error);
}

TEST(FitBeta, PermutationInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AccuracyPoint> pts(12);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const BetaFit a = FitBeta(pts);
    std::shuffle(pts.begin(), pts.end(), rng);
    const BetaFit b = FitBeta(pts);
    EXPECT_EQ(a.fit.w, b.fit.w);
    EXPECT_EQ(a.fit.b, b.fit.b);
    EXPECT_EQ(a.stats.d, b.stats.d);
    EXPECT_EQ(a.stats.mae_pp, b.stats.mae_pp);
    EXPECT_EQ(a.stats.r2, b.stats.r2);
  }
}

// Noiseless clouds for |w|, |b| <= 10 and 3 to 12 points.
TEST(FitBeta, RecoversRandomParametersProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> param(-10.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const LogitLinearFit truth{param(rng), param(rng), 0};
    const auto [lo, hi] = SafeIdLogits(truth);
    std::vector<double> ids;
    for (int i = 0; i < 3 + trial % 10; ++i) {
      ids.push_back(InvLogit(lo + (hi - lo) * unit(rng)));
    }
    const BetaFit f = FitBeta(ForwardGenerate(truth, ids));
    EXPECT_NEAR(f.fit.w, truth.w, 1e-9) << trial;
    EXPECT_NEAR(f.fit.b, truth.b, 1e-9) << trial;
    EXPECT_LT(f.stats.d, 1e-9) << trial;
  }
}

TEST(FitBeta, TwentyPointCloudsRecoverExactly) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> param(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const LogitLinearFit truth{param(rng), param(rng), 0};
    const auto [lo, hi] = SafeIdLogits(truth);
    std::vector<double> ids;
    for (int i = 0; i < 20; ++i) ids.push_back(InvLogit(lo + (hi - lo) * unit(rng)));
    const BetaFit f = FitBeta(ForwardGenerate(truth, ids));
    EXPECT_NEAR(f.fit.w, truth.w, 1e-9) << trial;
    EXPECT_NEAR(f.fit.b, truth.b, 1e-9) << trial;
    EXPECT_LT(f.stats.d, 1e-9) << trial;
  }
}

TEST(FitBeta, NoisyCloudsRecoverSlopeOnAverage) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> param(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  double total_err = 0.0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const LogitLinearFit truth{param(rng), param(rng), 0};
    std::vector<AccuracyPoint> pts;
    for (int i = 0; i < 20; ++i) {
      const auto [lo, hi] = SafeIdLogits(truth);
      const double id = InvLogit(lo + (hi - lo) * unit(rng));
      const double y = truth.w * Logit(id) + truth.b + noise(rng);
      pts.push_back({id, InvLogit(y)});
    }
    total_err += std::abs(FitBeta(pts).fit.w - truth.w);
  }
  EXPECT_LT(total_err / trials, 0.05);
}

TEST(FitBeta, PerfectFitStatisticsAgree) {
  // R^2 = 1, zero residuals, d = 0 and MAE = 0 go together.
  const BetaFit exact =
      FitBeta(ForwardGenerate(kIWildCam, {0.1, 0.3, 0.5, 0.7}));
  EXPECT_NEAR(exact.stats.r2, 1.0, 1e-12);
  EXPECT_LT(exact.stats.d, 1e-12);
  EXPECT_LT(exact.stats.mae_pp, 1e-10);
  for (double r : exact.stats.residuals) EXPECT_LT(std::abs(r), 1e-12);

  auto noisy = ForwardGenerate(kIWildCam, {0.1, 0.3, 0.5, 0.7});
  noisy[1].acc_ood += 0.02;
  const BetaFit f = FitBeta(noisy);
  EXPECT_LT(f.stats.r2, 1.0);
  EXPECT_GT(f.stats.d, 0.0);
  EXPECT_GT(f.stats.mae_pp, 0.0);
}

TEST(PredictBeta, KnownCurves) {
  // Targets carry 2-decimal rounding, hence the 5e-4 slack.
  EXPECT_NEAR(PredictBeta(kImageNet, 0.6793), 0.2709, 5e-4);
  EXPECT_NEAR(PredictBeta(kCamelyon, 0.5048), 0.6618, 5e-4);
  EXPECT_NEAR(PredictBeta(kImageNet, 0.6793), 0.27095342392378757, 1e-14);
  const LogitLinearFit identity{1.0, 0.0, 0};
  for (double x : {0.01, 0.3, 0.77}) {
    EXPECT_NEAR(PredictBeta(identity, x), x, 1e-15);
  }
}

TEST(PredictBeta, MonotoneForPositiveSlope) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0.05, 5.0);
  std::uniform_real_distribution<double> b(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const LogitLinearFit f{w(rng), b(rng), 0};
    double prev = -1.0;
    for (int i = 1; i < 100; ++i) {
      const double v = PredictBeta(f, i / 100.0);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(EffectiveRobustness, KnownValues) {
  EXPECT_NEAR(EffectiveRobustness(kImageNet, {0.6793, 0.5737}), 30.28, 0.05);
  EXPECT_NEAR(EffectiveRobustness(kIWildCam, {0.0967, 0.1682}), 8.46, 0.05);
  EXPECT_NEAR(EffectiveRobustness(kCamelyon, {0.5048, 0.5155}), -14.63, 0.05);
}

TEST(EffectiveRobustness, ZeroOnTheCurve) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double id = u(rng);
    EXPECT_NEAR(EffectiveRobustness(kImageNet, {id, PredictBeta(kImageNet, id)}),
                0.0, 1e-9);
  }
}

TEST(RelativeRobustness, KnownValues) {
  EXPECT_NEAR(RelativeRobustness(0.5737, 0.4657), 10.80, 1e-9);
  EXPECT_NEAR(RelativeRobustness(0.5155, 0.8009), -28.54, 1e-9);
  EXPECT_EQ(RelativeRobustness(0.42, 0.42), 0.0);
}

TEST(BetaLambda, KnownValues) {
  EXPECT_NEAR(BetaLambda(kImageNet, 0.136, 1.0, 0.6793), kBetaLambdaImageNet,
              1e-14);
  EXPECT_NEAR(BetaLambda(kIWildCam, 0.128, 1.0, 0.5318), kBetaLambdaIWildCam,
              1e-14);
  EXPECT_EQ(BetaLambda(kImageNet, 0.136, 0.0, 0.4), PredictBeta(kImageNet, 0.4));
  EXPECT_EQ(BetaLambda(kImageNet, 0.0, 2.0, 0.4), PredictBeta(kImageNet, 0.4));
  EXPECT_THROW(BetaLambda(kImageNet, -0.1, 1.0, 0.4), std::invalid_argument);
}

TEST(BetaLambda, DominatesBaseline) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> shift(0.01, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double id = u(rng);
    const double d = shift(rng);
    const double lambda = shift(rng);
    EXPECT_GT(BetaLambda(kCamelyon, d, lambda, id), PredictBeta(kCamelyon, id));
  }
}

TEST(AssessSignificance, KnownVerdicts) {
  const auto inet = AssessSignificance(kImageNet, 0.136, {0.6793, 0.5737}, 0.4657);
  EXPECT_TRUE(inet.significant);
  EXPECT_TRUE(inet.improves);
  EXPECT_NEAR(inet.rho_pp, 30.28, 0.05);

  const auto cam = AssessSignificance(kCamelyon, 0.268, {0.5048, 0.5155}, 0.8009);
  EXPECT_FALSE(cam.significant);
  EXPECT_LT(cam.tau_pp, 0.0);

  const auto iwc = AssessSignificance(kIWildCam, 0.128, {0.5318, 0.4492}, 0.3998);
  EXPECT_TRUE(iwc.significant);
  EXPECT_NEAR(iwc.tau_pp, 4.94, 1e-9);
}

TEST(AssessSignificance, GammaMargin) {
  const SignificanceConfig strict{1.0, 11.0};
  EXPECT_FALSE(
      AssessSignificance(kImageNet, 0.136, {0.6793, 0.5737}, 0.4657, strict)
          .significant);
  EXPECT_THROW(AssessSignificance(kImageNet, 0.136, {0.6793, 0.5737}, 0.4657,
                                  {-1.0, 0.0}),
               std::invalid_argument);
}

TEST(AssessSignificance, SignificanceImpliesImprovement) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> pos(0.001, 1.0);
  std::uniform_real_distribution<double> gamma(0.0, 5.0);
  int significant = 0;
  for (int i = 0; i < 20000; ++i) {
    const SignificanceConfig cfg{pos(rng), gamma(rng)};
    const auto a = AssessSignificance(kIWildCam, pos(rng), {u(rng), u(rng)},
                                      u(rng), cfg);
    if (a.significant) {
      ++significant;
      EXPECT_GT(a.rho_pp, 0.0);
      EXPECT_GT(a.tau_pp, cfg.gamma);
      EXPECT_TRUE(a.improves);
    }
  }
  EXPECT_GT(significant, 100);
}

TEST(Regime, NamesRoundTrip) {
  for (Regime r : {Regime::kExtreme, Regime::kLow, Regime::kModerate,
                   Regime::kHigh, Regime::kFull}) {
    EXPECT_EQ(ParseRegime(RegimeName(r)), r);
  }
  EXPECT_FALSE(ParseRegime("medium").has_value());
}

TEST(AssessAcrossRegimes, MajorityRule) {
  using R = Regime;
  const std::vector<RegimeVerdict> a = {
      {R::kFull, true}, {R::kExtreme, true}, {R::kModerate, true},
      {R::kHigh, false}};
  EXPECT_TRUE(AssessAcrossRegimes(a));
  const std::vector<RegimeVerdict> b = {
      {R::kFull, false}, {R::kExtreme, true}, {R::kModerate, true},
      {R::kHigh, true}};
  EXPECT_FALSE(AssessAcrossRegimes(b));
  const std::vector<RegimeVerdict> c = {
      {R::kFull, true}, {R::kExtreme, true}, {R::kModerate, false}};
  EXPECT_FALSE(AssessAcrossRegimes(c));
}

TEST(AssessAcrossRegimes, TwoLowShotRegimesExhaustive) {
  // Enumerate every verdict combination: only all-true passes, since one of
  // two is not a strict majority.
  for (int mask = 0; mask < 8; ++mask) {
    const bool full = mask & 1;
    const bool l1 = mask & 2;
    const bool l2 = mask & 4;
    const std::vector<RegimeVerdict> v = {
        {Regime::kFull, full}, {Regime::kExtreme, l1}, {Regime::kModerate, l2}};
    const int low_true = static_cast<int>(l1) + static_cast<int>(l2);
    const bool expected = full && low_true * 2 > 2;
    EXPECT_EQ(AssessAcrossRegimes(v), expected) << mask;
  }
}

TEST(AssessAcrossRegimes, Errors) {
  const std::vector<RegimeVerdict> no_full = {{Regime::kExtreme, true}};
  EXPECT_THROW(AssessAcrossRegimes(no_full), std::invalid_argument);
  const std::vector<RegimeVerdict> two_full = {
      {Regime::kFull, true}, {Regime::kFull, true}, {Regime::kHigh, true}};
  EXPECT_THROW(AssessAcrossRegimes(two_full), std::invalid_argument);
  const std::vector<RegimeVerdict> no_low = {{Regime::kFull, true}};
  EXPECT_THROW(AssessAcrossRegimes(no_low), std::invalid_argument);
}

}  // namespace
}  // namespace lsr
