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

#ifndef LSR_TOOLS_COMMANDS_H_
#define LSR_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsr/classifiers.h"
#include "lsr/metrics.h"

namespace lsr::cli {

// --seed beats RB_SEED, which beats 0.
std::uint64_t ResolveSeed(std::optional<std::uint64_t> flag);

struct AnalysisOptions {
  std::string records;
  std::string profile;
  std::string fit;  // empty: fit from the records' standard models
  std::string reference;
  SignificanceConfig significance;
  std::string out;  // empty: stdout
  std::string json_out;
  std::string text_out;
};

int RunFit(const AnalysisOptions& o);
int RunRobustness(const AnalysisOptions& o, bool with_significance);
int RunReport(const AnalysisOptions& o);

struct PlotCommandOptions {
  AnalysisOptions analysis;
  std::string regime = "full";
  std::string title;
  int width = 1000;
  int height = 1000;
};

int RunPlot(const PlotCommandOptions& o);

struct CurateOptions {
  std::string manifest;
  std::optional<int> num_classes;
  std::string scheme = "k-per-class";
  std::size_t count = 1;
  double ratio = 1.0;
  std::size_t min_per_class = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int RunCurate(const CurateOptions& o);

struct EvalOptions {
  // EMB:LABELS
  std::string id_eval;
  // SHIFT=EMB:LABELS
  std::vector<std::string> ood_eval;
  std::string metric;   // overrides the profile's metric mode
  std::string profile;
  std::string metrics_out;
  std::string records_out;
  std::string model_name;
  std::string regime = "full";
  std::string role = "standard";
  std::string id_shift = "val";
};

struct TrainOptions {
  std::string embeddings;
  std::string labels;
  std::string subset;
  std::string kind = "logistic";
  std::optional<int> epochs;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<double> weight_decay;
  std::optional<double> momentum;
  std::optional<double> cosine_scale;
  bool layer_norm = false;
  bool l2_normalize = false;
  std::optional<std::uint64_t> seed;
  std::string out;
  EvalOptions eval;
};

int RunTrain(const TrainOptions& o);

struct EvaluateOptions {
  std::string model;
  EvalOptions eval;
};

int RunEvaluate(const EvaluateOptions& o);

struct SoupOptions {
  std::vector<std::string> candidates;
  std::vector<std::string> tags;
  std::string eval_embeddings;
  std::string eval_labels;
  std::string metric;
  std::string profile;
  bool uniform = false;
  std::string out;
  std::string summary_out;
};

int RunSoup(const SoupOptions& o);

struct WiseFtOptions {
  std::string theta0;
  std::string theta1;
  double alpha = 0.5;
  // Non-empty: pick the alpha with the best held-out ID accuracy.
  std::vector<double> alpha_sweep;
  std::string eval_embeddings;
  std::string eval_labels;
  std::string metric;
  std::string profile;
  std::string out;
  std::string summary_out;
};

int RunWiseFt(const WiseFtOptions& o);

struct SoupConfigsOptions {
  std::size_t count = 9;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int RunSoupConfigs(const SoupConfigsOptions& o);

struct SynthOptions {
  std::string out;
  std::optional<std::uint64_t> seed;
};

int RunSynth(const SynthOptions& o);

}  // namespace lsr::cli

#endif  // LSR_TOOLS_COMMANDS_H_
