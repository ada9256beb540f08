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

#include "lsr/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "lsr/error.h"

namespace lsr {

double Round2(double v) { return std::round(v * 100.0) / 100.0; }

namespace {

double Round4(double v) { return std::round(v * 10000.0) / 10000.0; }

std::vector<Regime> RegimeOrder(const DatasetProfile& profile) {
  if (!profile.regimes.empty()) return profile.regimes;
  return {Regime::kFull, Regime::kExtreme, Regime::kLow, Regime::kModerate,
          Regime::kHigh};
}

}  // namespace

std::vector<ModelPoint> CollectPoints(const std::vector<AccuracyRecord>& records,
                                      const DatasetProfile& profile,
                                      ModelRole role) {
  std::vector<ModelPoint> points;
  for (const auto& r : records) {
    if (r.role != role || r.split != Split::kId) continue;
    ModelPoint p;
    p.model = r.model;
    p.regime = r.regime;
    p.role = role;
    p.point = MakeAccuracyPoint(
        r.accuracy, AverageOod(records, r.model, r.regime, profile),
        &p.clamped);
    points.push_back(std::move(p));
  }
  return points;
}

FitParameters FitStandardModels(const std::vector<AccuracyRecord>& records,
                                const DatasetProfile& profile) {
  const auto standard = CollectPoints(records, profile, ModelRole::kStandard);
  std::vector<AccuracyPoint> pts;
  pts.reserve(standard.size());
  for (const auto& p : standard) pts.push_back(p.point);
  const BetaFit bf = FitBeta(pts);
  FitParameters out;
  out.dataset = profile.name;
  out.fit = bf.fit;
  out.d = bf.stats.d;
  out.mae_pp = bf.stats.mae_pp;
  out.r2 = bf.stats.r2;
  return out;
}

nlohmann::json FitToJson(const FitParameters& fit) {
  nlohmann::json j;
  j["dataset"] = fit.dataset;
  j["w"] = fit.fit.w;
  j["b"] = fit.fit.b;
  j["d"] = fit.d;
  j["n"] = fit.fit.n;
  j["mae_pp"] = fit.mae_pp;
  j["r2"] = fit.r2;
  return j;
}

FitParameters FitFromJson(const nlohmann::json& j) {
  FitParameters f;
  try {
    f.dataset = j.value("dataset", std::string());
    f.fit.w = j.at("w").get<double>();
    f.fit.b = j.at("b").get<double>();
    f.d = j.at("d").get<double>();
    f.fit.n = j.value("n", std::size_t{0});
    f.mae_pp = j.value("mae_pp", 0.0);
    f.r2 = j.value("r2", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("fit parameters: ") + e.what());
  }
  if (!std::isfinite(f.fit.w) || !std::isfinite(f.fit.b) || !(f.d >= 0.0)) {
    throw Error(ErrorCode::kOutOfRange, "fit parameters must be finite, d >= 0");
  }
  return f;
}

Report BuildReport(const FitParameters& fit,
                   const std::vector<AccuracyRecord>& records,
                   const DatasetProfile& profile,
                   const std::string& reference_model,
                   const SignificanceConfig& cfg) {
  Report report;
  report.dataset = fit.dataset.empty() ? profile.name : fit.dataset;
  report.reference_model = reference_model;
  report.fit = fit;
  report.significance = cfg;

  std::map<Regime, double> reference_ood;
  for (const auto& p :
       CollectPoints(records, profile, ModelRole::kReference)) {
    if (p.model == reference_model) reference_ood[p.regime] = p.point.acc_ood;
  }

  const auto interventions =
      CollectPoints(records, profile, ModelRole::kIntervention);
  std::vector<std::string> models;
  for (const auto& p : interventions) {
    if (std::find(models.begin(), models.end(), p.model) == models.end()) {
      models.push_back(p.model);
    }
  }

  for (const auto& model : models) {
    InterventionRow row;
    row.model = model;
    std::vector<RegimeVerdict> verdicts;
    for (Regime regime : RegimeOrder(profile)) {
      auto it = std::find_if(
          interventions.begin(), interventions.end(), [&](const ModelPoint& p) {
            return p.model == model && p.regime == regime;
          });
      if (it == interventions.end()) continue;
      auto ref = reference_ood.find(regime);
      if (ref == reference_ood.end()) {
        throw Error(ErrorCode::kMissingReference,
                    "reference model '" + reference_model + "' has no " +
                        std::string(RegimeName(regime)) + " record");
      }
      RegimeEntry e;
      e.regime = regime;
      e.point = it->point;
      e.reference_ood = ref->second;
      e.assessment =
          AssessSignificance(fit.fit, fit.d, e.point, e.reference_ood, cfg);
      verdicts.push_back({regime, e.assessment.significant});
      row.regimes.push_back(e);
    }
    const bool has_full =
        std::any_of(verdicts.begin(), verdicts.end(),
                    [](const RegimeVerdict& v) { return v.regime == Regime::kFull; });
    const bool has_low = verdicts.size() > (has_full ? 1u : 0u);
    row.highlighted = has_full && has_low && AssessAcrossRegimes(verdicts);
    report.rows.push_back(std::move(row));
  }
  return report;
}

nlohmann::json ReportToJson(const Report& report) {
  nlohmann::json j;
  j["schema"] = "lsr.report";
  j["version"] = kReportSchemaVersion;
  j["dataset"] = report.dataset;
  j["reference_model"] = report.reference_model;
  j["fit"] = FitToJson(report.fit);
  j["significance"] = {{"lambda", report.significance.lambda},
                       {"gamma", report.significance.gamma}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["model"] = row.model;
    r["highlighted"] = row.highlighted;
    nlohmann::json regimes = nlohmann::json::array();
    for (const auto& e : row.regimes) {
      regimes.push_back({
          {"regime", std::string(RegimeName(e.regime))},
          {"acc_id_pct", Round4(100.0 * e.point.acc_id)},
          {"acc_ood_pct", Round4(100.0 * e.point.acc_ood)},
          {"reference_ood_pct", Round4(100.0 * e.reference_ood)},
          {"rho_pp", Round2(e.assessment.rho_pp)},
          {"tau_pp", Round2(e.assessment.tau_pp)},
          {"improves", e.assessment.improves},
          {"significant", e.assessment.significant},
      });
    }
    r["regimes"] = std::move(regimes);
    rows.push_back(std::move(r));
  }
  j["interventions"] = std::move(rows);
  return j;
}

Report ReportFromJson(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != "lsr.report") {
      throw Error(ErrorCode::kParse, "not an lsr report");
    }
    const int version = j.at("version").get<int>();
    if (version != kReportSchemaVersion) {
      throw Error(ErrorCode::kUnsupportedVersion,
                  "report version " + std::to_string(version));
    }
    Report report;
    report.dataset = j.at("dataset").get<std::string>();
    report.reference_model = j.at("reference_model").get<std::string>();
    report.fit = FitFromJson(j.at("fit"));
    report.significance.lambda = j.at("significance").at("lambda").get<double>();
    report.significance.gamma = j.at("significance").at("gamma").get<double>();
    for (const auto& r : j.at("interventions")) {
      InterventionRow row;
      row.model = r.at("model").get<std::string>();
      row.highlighted = r.at("highlighted").get<bool>();
      for (const auto& e : r.at("regimes")) {
        RegimeEntry entry;
        const auto regime = ParseRegime(e.at("regime").get<std::string>());
        if (!regime) throw Error(ErrorCode::kUnknownRegime, e.dump());
        entry.regime = *regime;
        entry.point.acc_id = e.at("acc_id_pct").get<double>() / 100.0;
        entry.point.acc_ood = e.at("acc_ood_pct").get<double>() / 100.0;
        entry.reference_ood = e.at("reference_ood_pct").get<double>() / 100.0;
        entry.assessment.rho_pp = e.at("rho_pp").get<double>();
        entry.assessment.tau_pp = e.at("tau_pp").get<double>();
        entry.assessment.improves = e.at("improves").get<bool>();
        entry.assessment.significant = e.at("significant").get<bool>();
        row.regimes.push_back(entry);
      }
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("report: ") + e.what());
  }
}

namespace {

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", Round2(v));
  // Avoid printing "-0.00".
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

}  // namespace

std::string ReportToText(const Report& report, TableColumns columns) {
  std::vector<std::string> header = {"model", "regime", "id%", "ood%", "rho",
                                     "tau"};
  const bool sig = columns == TableColumns::kSignificance;
  if (sig) {
    header.insert(header.end(), {"improves", "significant", "highlight"});
  }
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& row : report.rows) {
    for (const auto& e : row.regimes) {
      std::vector<std::string> line = {
          row.model,
          std::string(RegimeName(e.regime)),
          Fixed2(100.0 * e.point.acc_id),
          Fixed2(100.0 * e.point.acc_ood),
          Fixed2(e.assessment.rho_pp),
          Fixed2(e.assessment.tau_pp)};
      if (sig) {
        line.push_back(e.assessment.improves ? "yes" : "no");
        line.push_back(e.assessment.significant ? "yes" : "no");
        line.push_back(row.highlighted ? "*" : "");
      }
      cells.push_back(std::move(line));
    }
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      width[c] = std::max(width[c], line[c].size());
    }
  }

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "# dataset %s  reference %s  w=%.3f b=%.3f d=%.3f n=%zu\n",
                report.dataset.c_str(), report.reference_model.c_str(),
                report.fit.fit.w, report.fit.fit.b, report.fit.d,
                report.fit.fit.n);
  out += buf;
  if (sig) {
    std::snprintf(buf, sizeof(buf), "# lambda=%g gamma=%g\n",
                  report.significance.lambda, report.significance.gamma);
    out += buf;
  }
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      // Model and regime left-aligned, numbers right-aligned.
      const std::size_t pad = width[c] - line[c].size();
      if (c < 2) {
        text += line[c] + std::string(pad, ' ');
      } else {
        text += std::string(pad, ' ') + line[c];
      }
      if (c + 1 < line.size()) text += "  ";
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + '\n';
  }
  return out;
}

}  // namespace lsr
