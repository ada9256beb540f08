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
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace lsr {

double Logit(double x, LogitForm form) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("logit undefined for x = " + std::to_string(x) +
                            "; clamp accuracies into (0, 1) first");
  }
  switch (form) {
    case LogitForm::kLogOdds:
      return std::log(x) - std::log1p(-x);
    case LogitForm::kNegLogComplement:
      return -std::log1p(-x);
  }
  throw std::logic_error("unknown logit form");
}

double InvLogit(double y, LogitForm form) {
  switch (form) {
    case LogitForm::kLogOdds:
      if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
      {
        const double e = std::exp(y);
        return e / (1.0 + e);
      }
    case LogitForm::kNegLogComplement:
      return -std::expm1(-y);
  }
  throw std::logic_error("unknown logit form");
}

double ClampAccuracy(double x, bool* clamped) {
  if (std::isnan(x)) throw std::domain_error("accuracy is NaN");
  const double c = std::clamp(x, kMinAccuracy, kMaxAccuracy);
  if (clamped != nullptr) *clamped = (c != x);
  return c;
}

AccuracyPoint MakeAccuracyPoint(double acc_id, double acc_ood, bool* clamped) {
  bool a = false;
  bool b = false;
  AccuracyPoint p{ClampAccuracy(acc_id, &a), ClampAccuracy(acc_ood, &b)};
  if (clamped != nullptr) *clamped = a || b;
  return p;
}

namespace {

struct LogitPair {
  double x;
  double y;
  // Accuracy-space values, used for the MAE.
  double acc_id;
  double acc_ood;
};

bool operator<(const LogitPair& l, const LogitPair& r) {
  return std::tie(l.x, l.y) < std::tie(r.x, r.y);
}

}  // namespace

BetaFit FitBeta(std::span<const AccuracyPoint> points, LogitForm form) {
  const std::size_t n = points.size();
  if (n < 3) {
    throw std::invalid_argument("baseline fit needs at least 3 points, got " +
                                std::to_string(n));
  }
  std::vector<LogitPair> pairs;
  pairs.reserve(n);
  for (const auto& p : points) {
    pairs.push_back({Logit(p.acc_id, form), Logit(p.acc_ood, form), p.acc_id,
                     p.acc_ood});
  }
  // Sums run over a canonical order so the result is independent of input
  // order.
  std::vector<LogitPair> sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front().acc_id == sorted.back().acc_id) {
    throw std::invalid_argument(
        "degenerate regression: all in-domain accuracies are identical");
  }

  const double nd = static_cast<double>(n);
  double sum_x = 0.0;
  double sum_y = 0.0;
  for (const auto& p : sorted) {
    sum_x += p.x;
    sum_y += p.y;
  }
  const double mean_x = sum_x / nd;
  const double mean_y = sum_y / nd;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : sorted) {
    const double dx = p.x - mean_x;
    const double dy = p.y - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument(
        "degenerate regression: in-domain logits have no spread");
  }

  BetaFit out;
  out.fit.w = sxy / sxx;
  out.fit.b = mean_y - out.fit.w * mean_x;
  out.fit.n = n;
  out.fit.form = form;

  auto residual = [&](const LogitPair& p) {
    return p.y - (out.fit.w * p.x + out.fit.b);
  };
  out.stats.residuals.reserve(n);
  for (const auto& p : pairs) out.stats.residuals.push_back(residual(p));

  double ss_res = 0.0;
  double abs_err = 0.0;
  for (const auto& p : sorted) {
    const double r = residual(p);
    ss_res += r * r;
    abs_err += std::abs(p.acc_ood - PredictBeta(out.fit, p.acc_id));
  }
  out.stats.d = std::sqrt(ss_res / (nd - 2.0));
  out.stats.mae_pp = 100.0 * abs_err / nd;
  if (syy > 0.0) {
    out.stats.r2 = 1.0 - ss_res / syy;
  } else {
    out.stats.r2 = ss_res == 0.0 ? 1.0 : 0.0;
  }
  return out;
}

double PredictBeta(const LogitLinearFit& fit, double acc_id) {
  return InvLogit(fit.w * Logit(acc_id, fit.form) + fit.b, fit.form);
}

double BetaLambda(const LogitLinearFit& fit, double d, double lambda,
                  double acc_id) {
  if (d < 0.0) throw std::invalid_argument("residual deviation d must be >= 0");
  return InvLogit(fit.w * Logit(acc_id, fit.form) + fit.b + lambda * d,
                  fit.form);
}

double EffectiveRobustness(const LogitLinearFit& fit,
                           const AccuracyPoint& point) {
  return 100.0 * (point.acc_ood - PredictBeta(fit, point.acc_id));
}

double RelativeRobustness(double intervention_ood, double reference_ood) {
  return 100.0 * (intervention_ood - reference_ood);
}

RobustnessAssessment AssessSignificance(const LogitLinearFit& fit, double d,
                                        const AccuracyPoint& point,
                                        double reference_ood,
                                        const SignificanceConfig& cfg) {
  if (cfg.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  RobustnessAssessment a;
  a.rho_pp = EffectiveRobustness(fit, point);
  a.tau_pp = RelativeRobustness(point.acc_ood, reference_ood);
  a.improves = a.rho_pp > 0.0 && a.tau_pp > 0.0;
  const bool above_shifted =
      point.acc_ood > BetaLambda(fit, d, cfg.lambda, point.acc_id);
  a.significant = above_shifted && a.tau_pp > cfg.gamma;
  return a;
}

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kExtreme: return "extreme";
    case Regime::kLow: return "low";
    case Regime::kModerate: return "moderate";
    case Regime::kHigh: return "high";
    case Regime::kFull: return "full";
  }
  return "unknown";
}

std::optional<Regime> ParseRegime(std::string_view name) {
  for (Regime r : {Regime::kExtreme, Regime::kLow, Regime::kModerate,
                   Regime::kHigh, Regime::kFull}) {
    if (RegimeName(r) == name) return r;
  }
  return std::nullopt;
}

bool AssessAcrossRegimes(std::span<const RegimeVerdict> verdicts) {
  int full_count = 0;
  bool full = false;
  std::size_t low_total = 0;
  std::size_t low_true = 0;
  for (const auto& v : verdicts) {
    if (v.regime == Regime::kFull) {
      ++full_count;
      full = v.significant;
    } else {
      ++low_total;
      if (v.significant) ++low_true;
    }
  }
  if (full_count == 0) {
    throw std::invalid_argument("no full-shot verdict");
  }
  if (full_count > 1) {
    throw std::invalid_argument("duplicate full-shot verdicts");
  }
  if (low_total == 0) {
    throw std::invalid_argument("no low-shot verdicts");
  }
  return full && 2 * low_true > low_total;
}

}  // namespace lsr
