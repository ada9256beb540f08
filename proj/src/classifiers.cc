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

#include "lsr/classifiers.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "lsr/error.h"

namespace lsr {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dims,
                                 std::vector<double> data)
    : rows_(rows), dims_(dims), data_(std::move(data)) {
  if (rows_ == 0 || dims_ == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding matrix needs rows >= 1 and dims >= 1");
  }
  if (data_.size() != rows_ * dims_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding payload has " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(rows_ * dims_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::kNonFinite,
                  "non-finite embedding value at row " +
                      std::to_string(i / dims_) + ", dim " +
                      std::to_string(i % dims_));
    }
  }
}

EmbeddingMatrix EmbeddingMatrix::Select(
    std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * dims_);
  for (std::size_t i : indices) {
    if (i >= rows_) throw std::out_of_range("row index out of range");
    const auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return EmbeddingMatrix(indices.size(), dims_, std::move(out));
}

void LabelVector::Validate() const {
  if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw std::invalid_argument("label " + std::to_string(labels[i]) +
                                  " at index " + std::to_string(i) +
                                  " outside [0, " +
                                  std::to_string(num_classes) + ")");
    }
  }
}

std::string_view ClassifierKindName(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kLogistic: return "logistic";
    case ClassifierKind::kCentroid: return "centroid";
    case ClassifierKind::kBaselinePP: return "baselinepp";
  }
  return "unknown";
}

ClassifierKind ParseClassifierKind(std::string_view name) {
  for (auto k : {ClassifierKind::kLogistic, ClassifierKind::kCentroid,
                 ClassifierKind::kBaselinePP}) {
    if (ClassifierKindName(k) == name) return k;
  }
  throw std::invalid_argument("unknown classifier kind '" + std::string(name) +
                              "'");
}

void ApplyPreprocessing(const Preprocessing& pre, std::span<double> sample) {
  if (pre.layer_norm) {
    const double n = static_cast<double>(sample.size());
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    double var = 0.0;
    for (double v : sample) var += (v - mean) * (v - mean);
    var /= n;
    const double inv = 1.0 / std::sqrt(var + 1e-5);
    for (double& v : sample) v = (v - mean) * inv;
  }
  if (pre.l2_normalize) {
    double sq = 0.0;
    for (double v : sample) sq += v * v;
    if (!(sq > 0.0)) {
      throw std::domain_error("cannot L2-normalize a zero embedding");
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : sample) v *= inv;
  }
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid training config: " + what);
  };
  if (epochs < 0) fail("epochs must be >= 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be finite and > 0");
  }
  if (batch_size == 0) fail("batch_size must be >= 1");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    fail("weight_decay must be finite and >= 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) fail("momentum must be in [0, 1)");
  if (!(cosine_scale > 0.0) || !std::isfinite(cosine_scale)) {
    fail("cosine_scale must be finite and > 0");
  }
}

TrainConfig TrainConfig::LogisticDefaults() {
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 16;
  cfg.weight_decay = 0.0025;
  cfg.momentum = 0.9;
  return cfg;
}

TrainConfig TrainConfig::BaselinePPDefaults() {
  TrainConfig cfg;
  cfg.epochs = 100;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 16;
  cfg.weight_decay = 0.001;
  cfg.momentum = 0.9;
  cfg.cosine_scale = 10.0;
  return cfg;
}

namespace {

void CheckTrainingData(const EmbeddingMatrix& x, const LabelVector& y) {
  y.Validate();
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(x.rows()) + " embeddings but " +
                    std::to_string(y.size()) + " labels");
  }
  std::vector<int> counts(static_cast<std::size_t>(y.num_classes), 0);
  for (int l : y.labels) ++counts[static_cast<std::size_t>(l)];
  for (int c = 0; c < y.num_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw std::invalid_argument("class " + std::to_string(c) +
                                  " has no training samples");
    }
  }
}

EmbeddingMatrix Preprocess(const EmbeddingMatrix& x, const Preprocessing& pre) {
  if (!pre.layer_norm && !pre.l2_normalize) return x;
  std::vector<double> data = x.data();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    ApplyPreprocessing(pre, {data.data() + i * x.dims(), x.dims()});
  }
  return EmbeddingMatrix(x.rows(), x.dims(), std::move(data));
}

// In-place softmax; returns log-sum-exp.
double Softmax(std::span<double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& e : v) {
    e = std::exp(e - m);
    sum += e;
  }
  for (double& e : v) e /= sum;
  return m + std::log(sum);
}

double SquaredNorm(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return s;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Mean cross-entropy over `rows` plus the L2 penalty; gradients accumulate
// into grad_w / grad_b when non-null.
double LogisticBatch(std::span<const double> w, std::span<const double> b,
                     const EmbeddingMatrix& x, const LabelVector& y,
                     std::span<const std::size_t> rows, double weight_decay,
                     double* grad_w, double* grad_b) {
  const std::size_t classes = static_cast<std::size_t>(y.num_classes);
  const std::size_t dims = x.dims();
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  std::vector<double> logits(classes);
  double loss = 0.0;
  for (std::size_t i : rows) {
    const auto z = x.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      logits[c] = Dot(w.subspan(c * dims, dims), z) + b[c];
    }
    const std::size_t label = static_cast<std::size_t>(y.labels[i]);
    const double correct = logits[label];
    loss += Softmax(logits) - correct;
    if (grad_w == nullptr) continue;
    for (std::size_t c = 0; c < classes; ++c) {
      const double g = (logits[c] - (c == label ? 1.0 : 0.0)) * inv_n;
      double* gw = grad_w + c * dims;
      for (std::size_t j = 0; j < dims; ++j) gw[j] += g * z[j];
      grad_b[c] += g;
    }
  }
  if (grad_w != nullptr) {
    for (std::size_t k = 0; k < w.size(); ++k) grad_w[k] += weight_decay * w[k];
  }
  return loss * inv_n + 0.5 * weight_decay * SquaredNorm(w);
}

// Cosine-head objective on preprocessed, unit-norm rows.
double CosineBatch(std::span<const double> w, double scale,
                   const EmbeddingMatrix& unit_x, const LabelVector& y,
                   std::span<const std::size_t> rows, double weight_decay,
                   double* grad_w) {
  const std::size_t classes = static_cast<std::size_t>(y.num_classes);
  const std::size_t dims = unit_x.dims();
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  std::vector<double> norms(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    norms[c] = std::sqrt(SquaredNorm(w.subspan(c * dims, dims)));
  }
  std::vector<double> cosines(classes);
  std::vector<double> probs(classes);
  double loss = 0.0;
  for (std::size_t i : rows) {
    const auto z = unit_x.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      cosines[c] = Dot(w.subspan(c * dims, dims), z) / norms[c];
      probs[c] = scale * cosines[c];
    }
    const std::size_t label = static_cast<std::size_t>(y.labels[i]);
    const double correct = probs[label];
    loss += Softmax(probs) - correct;
    if (grad_w == nullptr) continue;
    for (std::size_t c = 0; c < classes; ++c) {
      const double g =
          scale * (probs[c] - (c == label ? 1.0 : 0.0)) * inv_n / norms[c];
      const double* wc = w.data() + c * dims;
      double* gw = grad_w + c * dims;
      for (std::size_t j = 0; j < dims; ++j) {
        gw[j] += g * (z[j] - cosines[c] * wc[j] / norms[c]);
      }
    }
  }
  if (grad_w != nullptr) {
    for (std::size_t k = 0; k < w.size(); ++k) grad_w[k] += weight_decay * w[k];
  }
  return loss * inv_n + 0.5 * weight_decay * SquaredNorm(w);
}

// Momentum SGD step: v = momentum * v + g; p -= lr * v.
void SgdStep(std::vector<double>& params, std::vector<double>& velocity,
             const std::vector<double>& grad, double lr, double momentum) {
  for (std::size_t k = 0; k < params.size(); ++k) {
    velocity[k] = momentum * velocity[k] + grad[k];
    params[k] -= lr * velocity[k];
  }
}

// Calls `step` once per mini-batch of a per-epoch seeded shuffle.
template <typename Step, typename EpochEnd>
void RunEpochs(std::size_t rows, const TrainConfig& cfg, Step step,
               EpochEnd epoch_end) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::span<const std::size_t> all(order);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < rows; start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, rows - start);
      step(all.subspan(start, len));
    }
    epoch_end();
  }
}

std::size_t ArgMax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

}  // namespace

double LogisticObjective(std::span<const double> weights,
                         std::span<const double> bias,
                         const EmbeddingMatrix& x, const LabelVector& y,
                         double weight_decay, std::vector<double>* grad_weights,
                         std::vector<double>* grad_bias) {
  const std::size_t classes = static_cast<std::size_t>(y.num_classes);
  if (weights.size() != classes * x.dims() || bias.size() != classes) {
    throw Error(ErrorCode::kDimensionMismatch, "logistic parameter shape");
  }
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "embeddings vs labels");
  }
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  double* gw = nullptr;
  double* gb = nullptr;
  if (grad_weights != nullptr && grad_bias != nullptr) {
    grad_weights->assign(weights.size(), 0.0);
    grad_bias->assign(bias.size(), 0.0);
    gw = grad_weights->data();
    gb = grad_bias->data();
  }
  return LogisticBatch(weights, bias, x, y, rows, weight_decay, gw, gb);
}

ClassifierModel TrainLogisticRegression(const EmbeddingMatrix& x,
                                        const LabelVector& y,
                                        const TrainConfig& cfg) {
  cfg.Validate();
  CheckTrainingData(x, y);
  const EmbeddingMatrix px = Preprocess(x, cfg.preprocessing);
  const std::size_t classes = static_cast<std::size_t>(y.num_classes);

  ClassifierModel model;
  model.kind = ClassifierKind::kLogistic;
  model.num_classes = y.num_classes;
  model.dims = x.dims();
  model.weights.assign(classes * x.dims(), 0.0);
  model.bias.assign(classes, 0.0);
  model.preprocessing = cfg.preprocessing;

  std::vector<double> vel_w(model.weights.size(), 0.0);
  std::vector<double> vel_b(classes, 0.0);
  std::vector<double> grad_w(model.weights.size());
  std::vector<double> grad_b(classes);
  std::vector<std::size_t> all_rows(x.rows());
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

  RunEpochs(
      x.rows(), cfg,
      [&](std::span<const std::size_t> batch) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        std::fill(grad_b.begin(), grad_b.end(), 0.0);
        LogisticBatch(model.weights, model.bias, px, y, batch,
                      cfg.weight_decay, grad_w.data(), grad_b.data());
        SgdStep(model.weights, vel_w, grad_w, cfg.learning_rate, cfg.momentum);
        SgdStep(model.bias, vel_b, grad_b, cfg.learning_rate, cfg.momentum);
      },
      [&] {
        model.loss_history.push_back(LogisticBatch(model.weights, model.bias,
                                                   px, y, all_rows,
                                                   cfg.weight_decay, nullptr,
                                                   nullptr));
      });
  return model;
}

ClassifierModel TrainMeanCentroid(const EmbeddingMatrix& x,
                                  const LabelVector& y,
                                  const Preprocessing& pre) {
  CheckTrainingData(x, y);
  const EmbeddingMatrix px = Preprocess(x, pre);
  const std::size_t classes = static_cast<std::size_t>(y.num_classes);
  const std::size_t dims = x.dims();

  ClassifierModel model;
  model.kind = ClassifierKind::kCentroid;
  model.num_classes = y.num_classes;
  model.dims = dims;
  model.preprocessing = pre;
  model.weights.assign(classes * dims, 0.0);
  std::vector<std::size_t> counts(classes, 0);
  for (std::size_t i = 0; i < px.rows(); ++i) {
    const std::size_t c = static_cast<std::size_t>(y.labels[i]);
    const auto z = px.row(i);
    for (std::size_t j = 0; j < dims; ++j) model.weights[c * dims + j] += z[j];
    ++counts[c];
  }
  for (std::size_t c = 0; c < classes; ++c) {
    const double n = static_cast<double>(counts[c]);
    for (std::size_t j = 0; j < dims; ++j) model.weights[c * dims + j] /= n;
  }
  return model;
}

ClassifierModel TrainBaselinePP(const EmbeddingMatrix& x, const LabelVector& y,
                                const TrainConfig& cfg) {
  cfg.Validate();
  CheckTrainingData(x, y);
  Preprocessing unit = cfg.preprocessing;
  unit.l2_normalize = true;
  const EmbeddingMatrix px = Preprocess(x, unit);
  const std::size_t classes = static_cast<std::size_t>(y.num_classes);
  const std::size_t dims = x.dims();

  ClassifierModel model;
  model.kind = ClassifierKind::kBaselinePP;
  model.num_classes = y.num_classes;
  model.dims = dims;
  model.preprocessing = unit;
  model.cosine_scale = cfg.cosine_scale;
  model.weights.resize(classes * dims);
  {
    std::mt19937_64 init_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : model.weights) v = dist(init_rng);
  }

  std::vector<double> velocity(model.weights.size(), 0.0);
  std::vector<double> grad(model.weights.size());
  std::vector<std::size_t> all_rows(x.rows());
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

  RunEpochs(
      x.rows(), cfg,
      [&](std::span<const std::size_t> batch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        CosineBatch(model.weights, cfg.cosine_scale, px, y, batch,
                    cfg.weight_decay, grad.data());
        SgdStep(model.weights, velocity, grad, cfg.learning_rate,
                cfg.momentum);
      },
      [&] {
        model.loss_history.push_back(CosineBatch(model.weights,
                                                 cfg.cosine_scale, px, y,
                                                 all_rows, cfg.weight_decay,
                                                 nullptr));
      });
  return model;
}

std::vector<double> Scores(const ClassifierModel& model,
                           std::span<const double> sample) {
  if (sample.size() != model.dims) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sample has " + std::to_string(sample.size()) +
                    " dims, model expects " + std::to_string(model.dims));
  }
  std::vector<double> z(sample.begin(), sample.end());
  ApplyPreprocessing(model.preprocessing, z);
  std::vector<double> scores(static_cast<std::size_t>(model.num_classes));
  for (int c = 0; c < model.num_classes; ++c) {
    const auto w = model.weight_row(c);
    double s = 0.0;
    switch (model.kind) {
      case ClassifierKind::kLogistic:
        s = Dot(w, z) + model.bias[static_cast<std::size_t>(c)];
        break;
      case ClassifierKind::kCentroid:
        for (std::size_t j = 0; j < z.size(); ++j) {
          const double diff = z[j] - w[j];
          s -= diff * diff;
        }
        break;
      case ClassifierKind::kBaselinePP: {
        const double norm = std::sqrt(SquaredNorm(w));
        s = norm > 0.0 ? model.cosine_scale * Dot(w, z) / norm : 0.0;
        break;
      }
    }
    scores[static_cast<std::size_t>(c)] = s;
  }
  return scores;
}

LabelVector Predict(const ClassifierModel& model, const EmbeddingMatrix& x) {
  LabelVector out;
  out.num_classes = model.num_classes;
  out.labels.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    out.labels.push_back(static_cast<int>(ArgMax(Scores(model, x.row(i)))));
  }
  return out;
}

std::string_view AccuracyModeName(AccuracyMode mode) {
  return mode == AccuracyMode::kTop1 ? "top1" : "per-class-average";
}

AccuracyMode ParseAccuracyMode(std::string_view name) {
  if (name == "top1") return AccuracyMode::kTop1;
  if (name == "per-class-average") return AccuracyMode::kPerClassAverage;
  throw std::invalid_argument("unknown accuracy mode '" + std::string(name) +
                              "'");
}

double EvaluateAccuracy(const LabelVector& truth, const LabelVector& pred,
                        AccuracyMode mode) {
  if (truth.size() != pred.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "truth has " + std::to_string(truth.size()) +
                    " labels, predictions " + std::to_string(pred.size()));
  }
  if (truth.size() == 0) throw std::invalid_argument("no labels to evaluate");
  if (mode == AccuracyMode::kTop1) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth.labels[i] == pred.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(truth.size());
  }
  truth.Validate();
  const std::size_t classes = static_cast<std::size_t>(truth.num_classes);
  std::vector<std::size_t> total(classes, 0);
  std::vector<std::size_t> correct(classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::size_t c = static_cast<std::size_t>(truth.labels[i]);
    ++total[c];
    if (pred.labels[i] == truth.labels[i]) ++correct[c];
  }
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (total[c] == 0) continue;
    sum += static_cast<double>(correct[c]) / static_cast<double>(total[c]);
    ++present;
  }
  return sum / static_cast<double>(present);
}

}  // namespace lsr
