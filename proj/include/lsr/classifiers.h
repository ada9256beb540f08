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

// Low-shot classifier heads trained on frozen embeddings: multinomial
// logistic regression, nearest mean centroid, and a cosine-similarity head
// (Baseline++).

#ifndef LSR_CLASSIFIERS_H_
#define LSR_CLASSIFIERS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lsr {

// Dense row-major matrix of finite binary64 values, rows >= 1, dims >= 1.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Throws lsr::Error (kNonFinite / kDimensionMismatch) on invalid input.
  EmbeddingMatrix(std::size_t rows, std::size_t dims, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t dims() const { return dims_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dims_, dims_};
  }
  double at(std::size_t i, std::size_t j) const { return data_[i * dims_ + j]; }
  const std::vector<double>& data() const { return data_; }

  // Rows in the given order.
  EmbeddingMatrix Select(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> data_;
};

struct LabelVector {
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  // Throws std::invalid_argument if a label is outside [0, num_classes).
  void Validate() const;
};

enum class ClassifierKind : std::uint32_t {
  kLogistic = 1,
  kCentroid = 2,
  kBaselinePP = 3,
};

std::string_view ClassifierKindName(ClassifierKind kind);
ClassifierKind ParseClassifierKind(std::string_view name);

struct Preprocessing {
  // Per-sample standardization over dims.
  bool layer_norm = false;
  // Divide each sample by its L2 norm. Applied after layer_norm.
  bool l2_normalize = false;
};

// Applies `pre` to one sample in place. Throws std::domain_error when
// l2_normalize meets a zero vector.
void ApplyPreprocessing(const Preprocessing& pre, std::span<double> sample);

struct ClassifierModel {
  ClassifierKind kind = ClassifierKind::kLogistic;
  int num_classes = 0;
  std::size_t dims = 0;
  // num_classes x dims, row-major. Logistic: weights; centroid: class means;
  // Baseline++: class directions.
  std::vector<double> weights;
  // Logistic only, one per class.
  std::vector<double> bias;
  Preprocessing preprocessing;
  // Baseline++ logit scale.
  double cosine_scale = 0.0;
  // Full-data training objective after each epoch. Not serialized.
  std::vector<double> loss_history;

  std::span<const double> weight_row(int c) const {
    return {weights.data() + static_cast<std::size_t>(c) * dims, dims};
  }
};

struct TrainConfig {
  int epochs = 100;
  double learning_rate = 0.01;
  // A batch size >= rows gives full-batch updates.
  std::size_t batch_size = 16;
  double weight_decay = 0.001;
  double momentum = 0.9;
  std::uint64_t seed = 0;
  double cosine_scale = 10.0;
  Preprocessing preprocessing;

  // Throws std::invalid_argument on out-of-domain fields.
  void Validate() const;

  // 300 epochs, batch 16, weight decay 0.0025, learning rate 0.01.
  static TrainConfig LogisticDefaults();
  // 100 epochs, learning rate 0.01, batch 16, weight decay 0.001.
  static TrainConfig BaselinePPDefaults();
};

ClassifierModel TrainLogisticRegression(const EmbeddingMatrix& x,
                                        const LabelVector& y,
                                        const TrainConfig& cfg);

ClassifierModel TrainMeanCentroid(const EmbeddingMatrix& x,
                                  const LabelVector& y,
                                  const Preprocessing& pre = {});

ClassifierModel TrainBaselinePP(const EmbeddingMatrix& x, const LabelVector& y,
                                const TrainConfig& cfg);

// Per-class scores; argmax gives the prediction. Centroid scores are negated
// squared distances.
std::vector<double> Scores(const ClassifierModel& model,
                           std::span<const double> sample);

// Ties go to the lowest class index.
LabelVector Predict(const ClassifierModel& model, const EmbeddingMatrix& x);

enum class AccuracyMode { kTop1, kPerClassAverage };

std::string_view AccuracyModeName(AccuracyMode mode);
AccuracyMode ParseAccuracyMode(std::string_view name);

// Per-class average skips classes with no true samples.
double EvaluateAccuracy(const LabelVector& truth, const LabelVector& pred,
                        AccuracyMode mode);

// Mean cross-entropy over `x` plus (weight_decay / 2) * ||W||^2 for a
// logistic head with row-major `weights` (C x dims) and `bias` (C). Inputs are
// used as given (no preprocessing). When non-null, the gradients are written
// to grad_weights / grad_bias.
double LogisticObjective(std::span<const double> weights,
                         std::span<const double> bias,
                         const EmbeddingMatrix& x, const LabelVector& y,
                         double weight_decay,
                         std::vector<double>* grad_weights = nullptr,
                         std::vector<double>* grad_bias = nullptr);

}  // namespace lsr

#endif  // LSR_CLASSIFIERS_H_
