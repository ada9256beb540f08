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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "lsr/error.h"

namespace lsr {
namespace {

// Two tight clusters around (-1, 0) and (+1, 0), ten points each.
struct Toy {
  EmbeddingMatrix x;
  LabelVector y;
};

Toy SeparableToy(std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::vector<double> data;
  LabelVector y{{}, 2};
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 10; ++i) {
      data.push_back((c == 0 ? -1.0 : 1.0) + jitter(rng));
      data.push_back(jitter(rng));
      y.labels.push_back(c);
    }
  }
  return {EmbeddingMatrix(20, 2, std::move(data)), y};
}

Toy GaussianBlobs(int classes, int per_class, std::size_t dims,
                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> centers(classes * dims);
  for (double& v : centers) v = 2.0 * n(rng);
  std::vector<double> data;
  LabelVector y{{}, classes};
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      for (std::size_t j = 0; j < dims; ++j) {
        data.push_back(centers[c * dims + j] + n(rng));
      }
      y.labels.push_back(c);
    }
  }
  return {EmbeddingMatrix(y.size(), dims, std::move(data)), y};
}

TEST(EmbeddingMatrix, RejectsBadShapeAndValues) {
  EXPECT_THROW(EmbeddingMatrix(2, 2, {1, 2, 3}), Error);
  EXPECT_THROW(EmbeddingMatrix(1, 2, {1, std::nan("")}), Error);
  EXPECT_THROW(EmbeddingMatrix(1, 1, {INFINITY}), Error);
  const EmbeddingMatrix m(2, 2, {1, 2, 3, 4});
  const std::vector<std::size_t> idx = {1, 0, 1};
  const EmbeddingMatrix s = m.Select(idx);
  EXPECT_EQ(s.data(), (std::vector<double>{3, 4, 1, 2, 3, 4}));
}

TEST(ClassifierKind, Names) {
  for (auto k : {ClassifierKind::kLogistic, ClassifierKind::kCentroid,
                 ClassifierKind::kBaselinePP}) {
    EXPECT_EQ(ParseClassifierKind(ClassifierKindName(k)), k);
  }
  EXPECT_THROW(ParseClassifierKind("svm"), std::invalid_argument);
}

TEST(Preprocessing, LayerNormThenL2) {
  std::vector<double> v = {1.0, 2.0, 3.0, 6.0};
  ApplyPreprocessing({true, false}, v);
  double mean = 0.0, var = 0.0;
  for (double e : v) mean += e;
  mean /= 4.0;
  for (double e : v) var += (e - mean) * (e - mean);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(var / 4.0, 3.5 / (3.5 + 1e-5), 1e-12);

  std::vector<double> w = {3.0, 4.0};
  ApplyPreprocessing({false, true}, w);
  EXPECT_NEAR(w[0], 0.6, 1e-15);
  EXPECT_NEAR(w[1], 0.8, 1e-15);

  std::vector<double> zero = {0.0, 0.0};
  EXPECT_THROW(ApplyPreprocessing({false, true}, zero), std::domain_error);
}

TEST(TrainConfig, Defaults) {
  const auto lr = TrainConfig::LogisticDefaults();
  EXPECT_EQ(lr.epochs, 300);
  EXPECT_EQ(lr.batch_size, 16u);
  EXPECT_DOUBLE_EQ(lr.weight_decay, 0.0025);
  EXPECT_DOUBLE_EQ(lr.learning_rate, 0.01);
  const auto bpp = TrainConfig::BaselinePPDefaults();
  EXPECT_EQ(bpp.epochs, 100);
  EXPECT_DOUBLE_EQ(bpp.weight_decay, 0.001);
  EXPECT_DOUBLE_EQ(bpp.cosine_scale, 10.0);

  TrainConfig bad;
  bad.learning_rate = 0.0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = {};
  bad.batch_size = 0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = {};
  bad.momentum = 1.0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
}

TEST(Logistic, SeparableToyIsFit) {
  const Toy t = SeparableToy();
  TrainConfig cfg;
  cfg.epochs = 100;
  cfg.learning_rate = 0.01;
  cfg.weight_decay = 0.0;
  const ClassifierModel m = TrainLogisticRegression(t.x, t.y, cfg);
  EXPECT_EQ(EvaluateAccuracy(t.y, Predict(m, t.x), AccuracyMode::kTop1), 1.0);
  EXPECT_EQ(m.loss_history.size(), 100u);
  EXPECT_LT(m.loss_history.back(), m.loss_history.front());
}

TEST(BaselinePP, SeparableToyIsFit) {
  const Toy t = SeparableToy();
  TrainConfig cfg = TrainConfig::BaselinePPDefaults();
  cfg.epochs = 100;
  cfg.weight_decay = 0.0;
  const ClassifierModel m = TrainBaselinePP(t.x, t.y, cfg);
  EXPECT_EQ(EvaluateAccuracy(t.y, Predict(m, t.x), AccuracyMode::kTop1), 1.0);
  EXPECT_TRUE(m.preprocessing.l2_normalize);
  EXPECT_EQ(m.cosine_scale, 10.0);
  // Scores are scaled cosines.
  const auto s = Scores(m, t.x.row(0));
  for (double v : s) EXPECT_LE(std::abs(v), 10.0 + 1e-9);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  const Toy t = GaussianBlobs(3, 7, 4, 21);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(12), b(3);
    for (double& v : w) v = n(rng);
    for (double& v : b) v = n(rng);
    std::vector<double> gw, gb;
    LogisticObjective(w, b, t.x, t.y, 0.01, &gw, &gb);
    const double h = 1e-6;
    auto check = [&](std::vector<double>& p, const std::vector<double>& g) {
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double keep = p[k];
        p[k] = keep + h;
        const double up = LogisticObjective(w, b, t.x, t.y, 0.01);
        p[k] = keep - h;
        const double dn = LogisticObjective(w, b, t.x, t.y, 0.01);
        p[k] = keep;
        const double fd = (up - dn) / (2.0 * h);
        EXPECT_NEAR(g[k], fd, 1e-5 * std::max(1.0, std::abs(fd)))
            << trial << ":" << k;
      }
    };
    check(w, gw);
    check(b, gb);
  }
}

TEST(Logistic, WeightDecaySkipsBias) {
  const Toy t = SeparableToy();
  const std::vector<double> w(4, 0.0), b = {1.0, -1.0};
  const double plain = LogisticObjective(w, b, t.x, t.y, 0.0);
  const double decayed = LogisticObjective(w, b, t.x, t.y, 5.0);
  EXPECT_EQ(plain, decayed);
  const std::vector<double> w2 = {1.0, 0.0, 0.0, 2.0};
  EXPECT_NEAR(LogisticObjective(w2, b, t.x, t.y, 0.5) -
                  LogisticObjective(w2, b, t.x, t.y, 0.0),
              0.25 * 5.0, 1e-12);
}

TEST(Logistic, ZeroEpochsGivesUniformScores) {
  const Toy t = GaussianBlobs(4, 3, 3, 2);
  TrainConfig cfg;
  cfg.epochs = 0;
  const ClassifierModel m = TrainLogisticRegression(t.x, t.y, cfg);
  for (std::size_t i = 0; i < t.x.rows(); ++i) {
    const auto s = Scores(m, t.x.row(i));
    for (double v : s) EXPECT_EQ(v, 0.0);
  }
  // Ties resolve to class 0.
  for (int p : Predict(m, t.x).labels) EXPECT_EQ(p, 0);
}

TEST(Logistic, FullBatchLossIsMonotone) {
  const Toy t = GaussianBlobs(3, 10, 5, 8);
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.learning_rate = 0.01;
  cfg.momentum = 0.0;
  cfg.batch_size = 1000;
  const ClassifierModel m = TrainLogisticRegression(t.x, t.y, cfg);
  for (std::size_t e = 1; e < m.loss_history.size(); ++e) {
    EXPECT_LE(m.loss_history[e], m.loss_history[e - 1] + 1e-12) << e;
  }
}

TEST(Training, DeterministicInSeed) {
  const Toy t = GaussianBlobs(3, 8, 4, 4);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.seed = 42;
  const auto a = TrainLogisticRegression(t.x, t.y, cfg);
  const auto b = TrainLogisticRegression(t.x, t.y, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
  const auto c = TrainBaselinePP(t.x, t.y, cfg);
  const auto d = TrainBaselinePP(t.x, t.y, cfg);
  EXPECT_EQ(c.weights, d.weights);
  cfg.seed = 43;
  EXPECT_NE(TrainBaselinePP(t.x, t.y, cfg).weights, c.weights);
}

TEST(Training, MissingClassIsAnError) {
  const EmbeddingMatrix x(2, 1, {0.0, 1.0});
  const LabelVector y{{0, 0}, 2};
  EXPECT_THROW(TrainMeanCentroid(x, y), std::invalid_argument);
  EXPECT_THROW(TrainLogisticRegression(x, y, {}), std::invalid_argument);
  const LabelVector wrong_len{{0}, 1};
  EXPECT_THROW(TrainMeanCentroid(x, wrong_len), Error);
}

// Brute-force oracle: class means computed directly, then nearest mean.
TEST(Centroid, MatchesDirectComputation) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int classes = 2 + static_cast<int>(seed % 5);
    const std::size_t dims = 1 + seed % 4;
    const Toy t = GaussianBlobs(classes, 6, dims, seed + 100);
    const ClassifierModel m = TrainMeanCentroid(t.x, t.y);
    std::vector<double> means(classes * dims, 0.0);
    for (std::size_t i = 0; i < t.x.rows(); ++i) {
      for (std::size_t j = 0; j < dims; ++j) {
        means[t.y.labels[i] * dims + j] += t.x.at(i, j) / 6.0;
      }
    }
    for (std::size_t k = 0; k < means.size(); ++k) {
      EXPECT_NEAR(m.weights[k], means[k], 1e-12);
    }
    const LabelVector pred = Predict(m, t.x);
    for (std::size_t i = 0; i < t.x.rows(); ++i) {
      int best = 0;
      double best_d = INFINITY;
      for (int c = 0; c < classes; ++c) {
        double dist = 0.0;
        for (std::size_t j = 0; j < dims; ++j) {
          const double diff = t.x.at(i, j) - means[c * dims + j];
          dist += diff * diff;
        }
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      EXPECT_EQ(pred.labels[i], best) << seed << ":" << i;
    }
  }
}

TEST(Centroid, SingleSampleCentroidsEqualSamples) {
  const EmbeddingMatrix x(3, 2, {1, 2, -3, 4, 5, -6});
  const LabelVector y{{2, 0, 1}, 3};
  const ClassifierModel m = TrainMeanCentroid(x, y);
  EXPECT_EQ(m.weights, (std::vector<double>{-3, 4, 5, -6, 1, 2}));
}

TEST(Centroid, EquidistantTieGoesToLowestIndex) {
  const EmbeddingMatrix x(2, 1, {-1.0, 1.0});
  const LabelVector y{{1, 0}, 2};
  const ClassifierModel m = TrainMeanCentroid(x, y);
  const EmbeddingMatrix probe(1, 1, {0.0});
  EXPECT_EQ(Predict(m, probe).labels[0], 0);
}

TEST(EvaluateAccuracy, Modes) {
  const LabelVector truth{{0, 0, 0, 1}, 2};
  const LabelVector pred{{0, 0, 0, 0}, 2};
  EXPECT_DOUBLE_EQ(EvaluateAccuracy(truth, pred, AccuracyMode::kTop1), 0.75);
  EXPECT_DOUBLE_EQ(
      EvaluateAccuracy(truth, pred, AccuracyMode::kPerClassAverage), 0.5);

  // Class 2 never appears in truth and is skipped.
  const LabelVector t3{{0, 1, 1}, 3};
  const LabelVector p3{{0, 1, 2}, 3};
  EXPECT_DOUBLE_EQ(EvaluateAccuracy(t3, p3, AccuracyMode::kPerClassAverage),
                   0.75);
  EXPECT_EQ(ParseAccuracyMode("per-class-average"),
            AccuracyMode::kPerClassAverage);
  EXPECT_THROW(ParseAccuracyMode("macro"), std::invalid_argument);
  EXPECT_THROW(EvaluateAccuracy(truth, LabelVector{{0}, 2}, AccuracyMode::kTop1),
               Error);
}

}  // namespace
}  // namespace lsr
