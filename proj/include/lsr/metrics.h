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

// Robustness metrics in logit space.
//
// A baseline curve beta(x) = sigmoid(w * logit(x) + b) is fitted by ordinary
// least squares on (logit(acc_id), logit(acc_ood)) pairs of standard models.
// Interventions are then scored by
//   effective robustness  rho = acc_ood - beta(acc_id)
//   relative robustness   tau = acc_ood - acc_ood(reference)
// and called significant when acc_ood also clears the shifted curve
// beta_lambda(x) = sigmoid(w * logit(x) + b + lambda * d), with d the residual
// deviation of the fit.
//
// Accuracies are fractions internally; rho and tau are reported in
// percentage points.

#ifndef LSR_METRICS_H_
#define LSR_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lsr {

// Accuracies are clamped into [kMinAccuracy, kMaxAccuracy] before entering
// logit space.
inline constexpr double kMinAccuracy = 1e-6;
inline constexpr double kMaxAccuracy = 1.0 - 1e-6;

// kLogOdds is ln(x / (1 - x)). kNegLogComplement is ln(1 / (1 - x)), kept for
// auditing against the alternative printed form; its inverse is 1 - e^-y.
enum class LogitForm { kLogOdds, kNegLogComplement };

// Throws std::domain_error unless 0 < x < 1.
double Logit(double x, LogitForm form = LogitForm::kLogOdds);
double InvLogit(double y, LogitForm form = LogitForm::kLogOdds);

// Clamps into [kMinAccuracy, kMaxAccuracy]. `clamped` is set when the value
// moved. NaN is rejected with std::domain_error.
double ClampAccuracy(double x, bool* clamped = nullptr);

struct AccuracyPoint {
  double acc_id = 0.5;
  double acc_ood = 0.5;
};

// Clamps both coordinates; `clamped` is set if either moved.
AccuracyPoint MakeAccuracyPoint(double acc_id, double acc_ood,
                                bool* clamped = nullptr);

struct LogitLinearFit {
  double w = 1.0;
  double b = 0.0;
  std::size_t n = 0;
  LogitForm form = LogitForm::kLogOdds;
};

struct ResidualStats {
  // Logit-space residuals, in input order.
  std::vector<double> residuals;
  // sqrt(sum(residual^2) / (n - 2)).
  double d = 0.0;
  // Mean |acc_ood - beta(acc_id)| in percentage points (accuracy space).
  double mae_pp = 0.0;
  // Coefficient of determination in logit space.
  double r2 = 1.0;
};

struct BetaFit {
  LogitLinearFit fit;
  ResidualStats stats;
};

// Ordinary least squares in logit space. Requires at least 3 points and at
// least two distinct acc_id values; throws std::invalid_argument otherwise.
// The parameters and summary statistics do not depend on point order.
BetaFit FitBeta(std::span<const AccuracyPoint> points,
                LogitForm form = LogitForm::kLogOdds);

double PredictBeta(const LogitLinearFit& fit, double acc_id);

// The baseline curve shifted upwards by lambda * d in logit space.
double BetaLambda(const LogitLinearFit& fit, double d, double lambda,
                  double acc_id);

// 100 * (acc_ood - beta(acc_id)).
double EffectiveRobustness(const LogitLinearFit& fit,
                           const AccuracyPoint& point);

// 100 * (intervention_ood - reference_ood).
double RelativeRobustness(double intervention_ood, double reference_ood);

struct SignificanceConfig {
  double lambda = 1.0;
  // Required margin on tau, in percentage points.
  double gamma = 0.0;
};

struct RobustnessAssessment {
  double rho_pp = 0.0;
  double tau_pp = 0.0;
  bool improves = false;
  bool significant = false;
};

// Significant iff acc_ood > beta_lambda(acc_id) and tau > gamma.
RobustnessAssessment AssessSignificance(const LogitLinearFit& fit, double d,
                                        const AccuracyPoint& point,
                                        double reference_ood,
                                        const SignificanceConfig& cfg = {});

enum class Regime { kExtreme, kLow, kModerate, kHigh, kFull };

std::string_view RegimeName(Regime regime);
std::optional<Regime> ParseRegime(std::string_view name);

struct RegimeVerdict {
  Regime regime;
  bool significant;
};

// True iff the full-shot verdict holds and strictly more than half of the
// low-shot verdicts hold. Throws std::invalid_argument when there is not
// exactly one full-shot verdict or no low-shot verdict.
bool AssessAcrossRegimes(std::span<const RegimeVerdict> verdicts);

}  // namespace lsr

#endif  // LSR_METRICS_H_
