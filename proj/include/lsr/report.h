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

// Dataset-level analysis: pooling standard-model points into a baseline fit
// and scoring intervention models against it, regime by regime.

#ifndef LSR_REPORT_H_
#define LSR_REPORT_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsr/io.h"
#include "lsr/metrics.h"

namespace lsr {

struct ModelPoint {
  std::string model;
  Regime regime = Regime::kFull;
  ModelRole role = ModelRole::kStandard;
  // Clamped into [kMinAccuracy, kMaxAccuracy].
  AccuracyPoint point;
  bool clamped = false;
};

// One point per (model, regime) with the given role: ID accuracy against the
// average over the profile's OOD shifts. Ordered by first appearance.
std::vector<ModelPoint> CollectPoints(const std::vector<AccuracyRecord>& records,
                                      const DatasetProfile& profile,
                                      ModelRole role);

struct FitParameters {
  std::string dataset;
  LogitLinearFit fit;
  double d = 0.0;
  double mae_pp = 0.0;
  double r2 = 1.0;
};

// Pooled fit over every standard-model point across regimes.
FitParameters FitStandardModels(const std::vector<AccuracyRecord>& records,
                                const DatasetProfile& profile);

// {"dataset", "w", "b", "d", "n", "mae_pp", "r2"}
nlohmann::json FitToJson(const FitParameters& fit);
FitParameters FitFromJson(const nlohmann::json& j);

struct RegimeEntry {
  Regime regime = Regime::kFull;
  AccuracyPoint point;
  double reference_ood = 0.0;
  RobustnessAssessment assessment;
};

struct InterventionRow {
  std::string model;
  std::vector<RegimeEntry> regimes;
  // Significant in the full-shot regime and in a strict majority of the
  // low-shot regimes. False when either kind of regime is missing.
  bool highlighted = false;
};

struct Report {
  std::string dataset;
  std::string reference_model;
  FitParameters fit;
  SignificanceConfig significance;
  std::vector<InterventionRow> rows;
};

inline constexpr int kReportSchemaVersion = 1;

// Throws lsr::Error(kMissingReference) when the reference model lacks a
// regime that an intervention covers.
Report BuildReport(const FitParameters& fit,
                   const std::vector<AccuracyRecord>& records,
                   const DatasetProfile& profile,
                   const std::string& reference_model,
                   const SignificanceConfig& cfg);

// Accuracies, rho and tau rounded to 2 decimals (percentage points).
nlohmann::json ReportToJson(const Report& report);
Report ReportFromJson(const nlohmann::json& j);

enum class TableColumns { kRobustness, kSignificance };

// Aligned plain-text table; highlighted models are marked with '*'.
std::string ReportToText(const Report& report, TableColumns columns);

// Rounds to 2 decimals, the precision of every reported percentage.
double Round2(double v);

}  // namespace lsr

#endif  // LSR_REPORT_H_
