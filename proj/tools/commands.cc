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

#include "commands.h"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "lsr/blob.h"
#include "lsr/curation.h"
#include "lsr/ensembles.h"
#include "lsr/error.h"
#include "lsr/io.h"
#include "lsr/plot.h"
#include "lsr/report.h"
#include "lsr/synthetic.h"

namespace lsr::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::uint64_t ResolveSeed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RB_SEED"); env != nullptr && *env) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("RB_SEED must be an unsigned integer, got '" +
                                  std::string(s) + "'");
    }
    return v;
  }
  return 0;
}

namespace {

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFileBytes(path, text);
  }
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

void WarnClamped(const std::vector<ModelPoint>& points) {
  for (const auto& p : points) {
    if (p.clamped) {
      std::cerr << "warning: accuracy of " << p.model << " ("
                << RegimeName(p.regime)
                << ") clamped into [1e-6, 1 - 1e-6] for the logit transform\n";
    }
  }
}

FitParameters LoadOrFit(const AnalysisOptions& o,
                        const std::vector<AccuracyRecord>& records,
                        const DatasetProfile& profile) {
  if (!o.fit.empty()) {
    FitParameters f = FitFromJson(nlohmann::json::parse(ReadFileBytes(o.fit)));
    if (f.dataset.empty()) f.dataset = profile.name;
    return f;
  }
  WarnClamped(CollectPoints(records, profile, ModelRole::kStandard));
  return FitStandardModels(records, profile);
}

}  // namespace

int RunFit(const AnalysisOptions& o) {
  const auto records = LoadAccuracyRecords(o.records);
  const auto profile = LoadProfile(o.profile);
  WarnClamped(CollectPoints(records, profile, ModelRole::kStandard));
  const FitParameters fit = FitStandardModels(records, profile);
  json j;
  j["dataset"] = fit.dataset;
  j["w"] = fit.fit.w;
  j["b"] = fit.fit.b;
  j["d"] = fit.d;
  j["n"] = fit.fit.n;
  j["mae_pp"] = fit.mae_pp;
  j["r2"] = fit.r2;
  WriteOutput(o.out, Dump(j));
  return 0;
}

int RunRobustness(const AnalysisOptions& o, bool with_significance) {
  const auto records = LoadAccuracyRecords(o.records);
  const auto profile = LoadProfile(o.profile);
  const FitParameters fit = LoadOrFit(o, records, profile);
  const Report report =
      BuildReport(fit, records, profile, o.reference, o.significance);
  WriteOutput(o.out, ReportToText(report, with_significance
                                              ? TableColumns::kSignificance
                                              : TableColumns::kRobustness));
  if (!o.json_out.empty()) {
    WriteFileBytes(o.json_out, ReportToJson(report).dump(2) + "\n");
  }
  return 0;
}

int RunReport(const AnalysisOptions& o) {
  const auto records = LoadAccuracyRecords(o.records);
  const auto profile = LoadProfile(o.profile);
  const FitParameters fit = LoadOrFit(o, records, profile);
  const Report report =
      BuildReport(fit, records, profile, o.reference, o.significance);
  const std::string text = ReportToText(report, TableColumns::kSignificance);
  const std::string js = ReportToJson(report).dump(2) + "\n";
  if (o.json_out.empty() && o.text_out.empty()) {
    std::cout << js;
    return 0;
  }
  if (!o.json_out.empty()) WriteFileBytes(o.json_out, js);
  if (!o.text_out.empty()) WriteFileBytes(o.text_out, text);
  return 0;
}

int RunPlot(const PlotCommandOptions& o) {
  const auto& a = o.analysis;
  const auto records = LoadAccuracyRecords(a.records);
  const auto profile = LoadProfile(a.profile);
  const FitParameters fit = LoadOrFit(a, records, profile);

  std::vector<ModelPoint> points =
      CollectPoints(records, profile, ModelRole::kStandard);
  for (auto role : {ModelRole::kReference, ModelRole::kIntervention}) {
    auto more = CollectPoints(records, profile, role);
    points.insert(points.end(), more.begin(), more.end());
  }

  PlotOptions opts;
  opts.width = o.width;
  opts.height = o.height;
  opts.lambda = a.significance.lambda;
  opts.title = o.title.empty() ? fit.dataset : o.title;
  if (!a.reference.empty()) {
    const auto regime = ParseRegime(o.regime);
    if (!regime) throw Error(ErrorCode::kUnknownRegime, o.regime);
    opts.reference_ood = AverageOod(records, a.reference, *regime, profile);
  }
  if (a.out.empty()) throw std::invalid_argument("plot needs --out");
  EmitScatter(fit, points, opts, a.out);
  return 0;
}

int RunCurate(const CurateOptions& o) {
  const Manifest manifest = LoadManifest(o.manifest, o.num_classes);
  SubsetSpec spec;
  spec.scheme = ParseCurationScheme(o.scheme);
  spec.count = o.count;
  spec.ratio = o.ratio;
  spec.min_per_class = o.min_per_class;
  spec.seed = ResolveSeed(o.seed);
  const Manifest subset = Curate(manifest, spec);
  const VerificationReport check = VerifySubset(manifest, subset, spec);

  json side;
  side["schema"] = "lsr.subset";
  side["version"] = 1;
  side["source"] = fs::path(o.manifest).filename().string();
  side["scheme"] = std::string(CurationSchemeName(spec.scheme));
  if (spec.scheme == CurationScheme::kRatio) {
    side["ratio"] = spec.ratio;
  } else {
    side["count"] = spec.count;
  }
  side["min_per_class"] = spec.min_per_class;
  side["seed"] = spec.seed;
  side["num_classes"] = subset.num_classes;
  side["num_items"] = subset.items.size();
  side["per_class_counts"] = subset.ClassCounts();
  side["verified"] = check.passed;

  if (o.out.empty()) {
    std::cout << FormatManifest(subset);
  } else {
    WriteFileBytes(o.out, FormatManifest(subset));
    WriteFileBytes(o.out + ".json", Dump(side));
  }
  if (!check.passed) {
    for (const auto& issue : check.issues) {
      std::cerr << "verification: " << issue.kind << ": " << issue.detail
                << "\n";
    }
    return 1;
  }
  return 0;
}

namespace {

struct EvalSet {
  EmbeddingMatrix x;
  LabelVector y;
};

EvalSet LoadLabeled(const std::string& emb_path, const std::string& labels_path,
                    int num_classes) {
  EvalSet s{LoadEmbeddingFile(emb_path), {}};
  const Manifest m = LoadManifest(labels_path, num_classes);
  if (m.items.size() != s.x.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                labels_path + " has " + std::to_string(m.items.size()) +
                    " labels for " + std::to_string(s.x.rows()) +
                    " embeddings in " + emb_path);
  }
  s.y.num_classes = num_classes;
  for (const auto& item : m.items) s.y.labels.push_back(item.label);
  return s;
}

// "EMB:LABELS"
EvalSet LoadPair(const std::string& spec, int num_classes) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("expected EMB:LABELS, got '" + spec + "'");
  }
  return LoadLabeled(spec.substr(0, colon), spec.substr(colon + 1),
                     num_classes);
}

AccuracyMode ResolveMetric(const std::string& metric,
                           const std::string& profile) {
  if (!metric.empty()) return ParseAccuracyMode(metric);
  if (!profile.empty()) return LoadProfile(profile).metric_mode;
  return AccuracyMode::kTop1;
}

ModelRole ParseRole(const std::string& s) {
  if (s == "standard") return ModelRole::kStandard;
  if (s == "reference") return ModelRole::kReference;
  if (s == "intervention") return ModelRole::kIntervention;
  throw std::invalid_argument("unknown role '" + s + "'");
}

void AppendRecords(const std::string& path,
                   const std::vector<AccuracyRecord>& rows) {
  std::string text = FormatAccuracyRecords(rows);
  if (fs::exists(path) && fs::file_size(path) > 0) {
    // Drop the header; the file already has one.
    text.erase(0, text.find('\n') + 1);
    text = ReadFileBytes(path) + text;
  }
  WriteFileBytes(path, text);
}

int Evaluate(const ClassifierModel& model, const EvalOptions& o) {
  const AccuracyMode mode = ResolveMetric(o.metric, o.profile);
  json j;
  j["model"] = o.model_name;
  j["metric"] = std::string(AccuracyModeName(mode));
  std::vector<AccuracyRecord> rows;
  Regime regime = Regime::kFull;
  if (!o.records_out.empty()) {
    const auto r = ParseRegime(o.regime);
    if (!r) throw Error(ErrorCode::kUnknownRegime, o.regime);
    regime = *r;
    if (o.model_name.empty()) {
      throw std::invalid_argument("--records-out needs --model-name");
    }
  }
  const ModelRole role = ParseRole(o.role);

  if (!o.id_eval.empty()) {
    const EvalSet s = LoadPair(o.id_eval, model.num_classes);
    const double acc = EvaluateAccuracy(s.y, Predict(model, s.x), mode);
    j["id_pct"] = 100.0 * acc;
    rows.push_back({o.model_name, regime, role, Split::kId, o.id_shift, acc});
  }
  if (!o.ood_eval.empty()) {
    json ood = json::object();
    double sum = 0.0;
    for (const auto& spec : o.ood_eval) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("expected SHIFT=EMB:LABELS, got '" + spec +
                                    "'");
      }
      const std::string shift = spec.substr(0, eq);
      const EvalSet s = LoadPair(spec.substr(eq + 1), model.num_classes);
      const double acc = EvaluateAccuracy(s.y, Predict(model, s.x), mode);
      ood[shift] = 100.0 * acc;
      sum += acc;
      rows.push_back({o.model_name, regime, role, Split::kOod, shift, acc});
    }
    j["ood_pct"] = ood;
    j["ood_avg_pct"] = 100.0 * sum / static_cast<double>(o.ood_eval.size());
  }
  if (!o.records_out.empty()) AppendRecords(o.records_out, rows);
  if (!o.metrics_out.empty()) {
    WriteFileBytes(o.metrics_out, Dump(j));
  } else if (!o.id_eval.empty() || !o.ood_eval.empty()) {
    std::cout << Dump(j);
  }
  return 0;
}

}  // namespace

int RunTrain(const TrainOptions& o) {
  const EmbeddingMatrix pool = LoadEmbeddingFile(o.embeddings);
  const Manifest labels = LoadManifest(o.labels);
  if (labels.items.size() != pool.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                o.labels + " has " + std::to_string(labels.items.size()) +
                    " items for " + std::to_string(pool.rows()) +
                    " embeddings");
  }
  std::vector<std::size_t> rows;
  if (o.subset.empty()) {
    rows.resize(pool.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  } else {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.items.size(); ++i) {
      index.emplace(labels.items[i].id, i);
    }
    for (const auto& item : LoadManifest(o.subset, labels.num_classes).items) {
      auto it = index.find(item.id);
      if (it == index.end()) {
        throw Error(ErrorCode::kParse, "subset item '" + item.id +
                                           "' is not in " + o.labels);
      }
      if (labels.items[it->second].label != item.label) {
        throw Error(ErrorCode::kParse,
                    "subset item '" + item.id + "' changes its label");
      }
      rows.push_back(it->second);
    }
  }
  const EmbeddingMatrix x = pool.Select(rows);
  LabelVector y;
  y.num_classes = labels.num_classes;
  for (std::size_t r : rows) y.labels.push_back(labels.items[r].label);

  const ClassifierKind kind = ParseClassifierKind(o.kind);
  TrainConfig cfg = kind == ClassifierKind::kLogistic
                        ? TrainConfig::LogisticDefaults()
                        : TrainConfig::BaselinePPDefaults();
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.learning_rate) cfg.learning_rate = *o.learning_rate;
  if (o.batch_size) cfg.batch_size = *o.batch_size;
  if (o.weight_decay) cfg.weight_decay = *o.weight_decay;
  if (o.momentum) cfg.momentum = *o.momentum;
  if (o.cosine_scale) cfg.cosine_scale = *o.cosine_scale;
  cfg.preprocessing.layer_norm = o.layer_norm;
  cfg.preprocessing.l2_normalize = o.l2_normalize;
  cfg.seed = ResolveSeed(o.seed);

  ClassifierModel model;
  switch (kind) {
    case ClassifierKind::kLogistic:
      model = TrainLogisticRegression(x, y, cfg);
      break;
    case ClassifierKind::kCentroid:
      model = TrainMeanCentroid(x, y, cfg.preprocessing);
      break;
    case ClassifierKind::kBaselinePP:
      model = TrainBaselinePP(x, y, cfg);
      break;
  }
  if (!o.out.empty()) WriteBlob(o.out, ModelToBlob(model));
  return Evaluate(model, o.eval);
}

int RunEvaluate(const EvaluateOptions& o) {
  return Evaluate(BlobToModel(ReadBlob(o.model)), o.eval);
}

namespace {

struct Scorer {
  Blob header;
  ClassifierModel model;
  EvalSet data;
  AccuracyMode mode;

  double operator()(const ParamSet& p) const {
    const ClassifierModel m = BlobToModel(WithParams(header, p));
    return EvaluateAccuracy(data.y, Predict(m, data.x), mode);
  }
};

Scorer MakeScorer(const Blob& header, const std::string& emb,
                  const std::string& labels, AccuracyMode mode) {
  ClassifierModel model = BlobToModel(header);
  return Scorer{header, model,
                LoadLabeled(emb, labels, model.num_classes), mode};
}

void CheckSameHead(const Blob& a, const Blob& b, const std::string& what) {
  if (a.kind != b.kind || a.num_classes != b.num_classes || a.dims != b.dims ||
      a.flags != b.flags || a.cosine_scale != b.cosine_scale) {
    throw Error(ErrorCode::kIncompatible,
                what + " has a different model header");
  }
}

}  // namespace

int RunSoup(const SoupOptions& o) {
  if (o.candidates.empty()) throw std::invalid_argument("no candidates");
  if (!o.tags.empty() && o.tags.size() != o.candidates.size()) {
    throw std::invalid_argument("--tags must match --candidates");
  }
  std::vector<Blob> blobs;
  for (const auto& path : o.candidates) blobs.push_back(ReadBlob(path));
  for (std::size_t i = 1; i < blobs.size(); ++i) {
    CheckSameHead(blobs[0], blobs[i], o.candidates[i]);
  }
  if (blobs.size() > kDefaultSoupPoolSize) {
    std::cerr << "note: " << blobs.size() << " candidates; the usual pool is "
              << kDefaultSoupPoolSize << "\n";
  }

  json summary;
  Blob out = blobs[0];
  if (o.uniform) {
    std::vector<ParamSet> sets;
    for (const auto& b : blobs) sets.push_back(b.params);
    out.params = UniformSoup(sets);
    summary["mode"] = "uniform";
    summary["members"] = o.tags.empty() ? o.candidates : o.tags;
  } else {
    const AccuracyMode mode = ResolveMetric(o.metric, o.profile);
    const Scorer scorer =
        MakeScorer(blobs[0], o.eval_embeddings, o.eval_labels, mode);
    std::vector<SoupCandidate> cands;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
      const std::string tag =
          o.tags.empty() ? fs::path(o.candidates[i]).stem().string() : o.tags[i];
      cands.push_back({blobs[i].params, scorer(blobs[i].params), tag});
    }
    const GreedySoupResult r = GreedySoup(cands, std::cref(scorer));
    out.params = r.params;
    summary["mode"] = "greedy";
    summary["metric"] = std::string(AccuracyModeName(mode));
    json held = json::object();
    for (const auto& c : cands) held[c.tag] = 100.0 * c.held_out_id_acc;
    summary["held_out_id_pct"] = held;
    summary["members"] = r.tags;
    summary["soup_id_pct"] = 100.0 * r.score;
  }
  if (o.out.empty()) throw std::invalid_argument("soup needs --out");
  WriteBlob(o.out, out);
  WriteOutput(o.summary_out, Dump(summary));
  return 0;
}

int RunWiseFt(const WiseFtOptions& o) {
  const Blob b0 = ReadBlob(o.theta0);
  const Blob b1 = ReadBlob(o.theta1);
  CheckSameHead(b0, b1, o.theta1);
  json summary;
  double alpha = o.alpha;
  if (!o.alpha_sweep.empty()) {
    const AccuracyMode mode = ResolveMetric(o.metric, o.profile);
    const Scorer scorer =
        MakeScorer(b0, o.eval_embeddings, o.eval_labels, mode);
    json sweep = json::array();
    double best = -1.0;
    for (double a : o.alpha_sweep) {
      const double s = scorer(Interpolate(b0.params, b1.params, a));
      sweep.push_back({{"alpha", a}, {"id_pct", 100.0 * s}});
      // First alpha wins ties.
      if (s > best) {
        best = s;
        alpha = a;
      }
    }
    summary["sweep"] = sweep;
  }
  summary["alpha"] = alpha;
  Blob out = b0;
  out.params = Interpolate(b0.params, b1.params, alpha);
  if (o.out.empty()) throw std::invalid_argument("wise-ft needs --out");
  WriteBlob(o.out, out);
  WriteOutput(o.summary_out, Dump(summary));
  return 0;
}

int RunSoupConfigs(const SoupConfigsOptions& o) {
  const std::uint64_t base = ResolveSeed(o.seed);
  const SoupConfigRanges ranges;
  std::string text;
  for (std::size_t i = 0; i < o.count; ++i) {
    const SoupConfig c = SampleSoupConfig(ranges, base + i);
    json j;
    j["seed"] = c.seed;
    j["epochs"] = c.epochs;
    j["learning_rate"] = c.learning_rate;
    j["weight_decay"] = c.weight_decay;
    j["label_smoothing"] = c.label_smoothing;
    j["mixup"] = c.mixup;
    j["randaug_m"] = c.randaug_m;
    j["randaug_n"] = c.randaug_n;
    text += j.dump() + "\n";
  }
  WriteOutput(o.out, text);
  return 0;
}

int RunSynth(const SynthOptions& o) {
  SyntheticSpec spec;
  spec.seed = ResolveSeed(o.seed);
  WriteSyntheticDataset(o.out, spec);
  return 0;
}

}  // namespace lsr::cli
