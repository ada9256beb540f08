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

#include "lsr/synthetic.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "lsr/io.h"

namespace lsr {

namespace {

struct BackboneSpec {
  const char* name;
  double feature_noise;
  // Latent dimensions [0, skip) are invisible to this backbone.
  int skip_latent;
};

constexpr BackboneSpec kBackbones[] = {
    {"bb0", 0.6, 0},
    {"bb1", 1.2, 0},
    {"bb2", 2.0, 0},
    {"robust", 0.5, 2},
};

struct ShiftSpec {
  const char* name;
  double offset_scale;
  double noise_scale;
};

constexpr ShiftSpec kShifts[] = {
    {"shift-a", 2.0, 1.2},
    {"shift-b", 2.5, 1.4},
};

// Gaussian draws from raw engine output so files do not depend on the
// standard library's distribution implementations.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = Uniform();
    const double u2 = Uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  // (0, 1]
  double Uniform() {
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

using Matrix = std::vector<std::vector<double>>;

Matrix RandomMatrix(Gaussian& g, int rows, int cols, double scale) {
  Matrix m(static_cast<std::size_t>(rows), std::vector<double>(cols));
  for (auto& row : m) {
    for (double& v : row) v = scale * g();
  }
  return m;
}

struct LatentSplit {
  std::vector<std::vector<double>> z;
  std::vector<int> labels;
};

LatentSplit SampleLatent(Gaussian& g, const SyntheticSpec& spec,
                         const Matrix& means, const Matrix* offsets,
                         double noise, int per_class) {
  LatentSplit out;
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int k = 0; k < per_class; ++k) {
      std::vector<double> z(static_cast<std::size_t>(spec.latent_dims));
      for (int j = 0; j < spec.latent_dims; ++j) {
        z[j] = means[c][j] + noise * g();
        if (offsets != nullptr) z[j] += (*offsets)[c][j];
      }
      out.z.push_back(std::move(z));
      out.labels.push_back(c);
    }
  }
  return out;
}

EmbeddingMatrix Project(Gaussian& g, const LatentSplit& split,
                        const Matrix& map, const BackboneSpec& bb) {
  const std::size_t dims = map.size();
  std::vector<double> data;
  data.reserve(split.z.size() * dims);
  for (const auto& z : split.z) {
    for (std::size_t i = 0; i < dims; ++i) {
      double f = 0.0;
      for (std::size_t j = static_cast<std::size_t>(bb.skip_latent);
           j < z.size(); ++j) {
        f += map[i][j] * z[j];
      }
      data.push_back(f + bb.feature_noise * g());
    }
  }
  return EmbeddingMatrix(split.z.size(), dims, std::move(data));
}

Manifest MakeManifest(const std::string& prefix, const LatentSplit& split,
                      int num_classes) {
  Manifest m;
  m.num_classes = num_classes;
  for (std::size_t i = 0; i < split.labels.size(); ++i) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%05zu", prefix.c_str(), i);
    m.items.push_back({id, split.labels[i]});
  }
  return m;
}

}  // namespace

std::vector<std::string> SyntheticBackbones() {
  std::vector<std::string> out;
  for (const auto& b : kBackbones) out.emplace_back(b.name);
  return out;
}

std::vector<std::string> SyntheticShifts() {
  std::vector<std::string> out;
  for (const auto& s : kShifts) out.emplace_back(s.name);
  return out;
}

void WriteSyntheticDataset(const std::filesystem::path& dir,
                           const SyntheticSpec& spec) {
  std::filesystem::create_directories(dir);
  Gaussian g(spec.seed);
  const Matrix means =
      RandomMatrix(g, spec.num_classes, spec.latent_dims, 1.6);

  struct Split {
    std::string name;
    LatentSplit latent;
  };
  std::vector<Split> splits;
  splits.push_back({"train", SampleLatent(g, spec, means, nullptr, 1.0,
                                          spec.train_per_class)});
  splits.push_back(
      {"val", SampleLatent(g, spec, means, nullptr, 1.0, spec.val_per_class)});
  for (const auto& shift : kShifts) {
    // Offsets only touch the first two latent dimensions.
    Matrix offsets(static_cast<std::size_t>(spec.num_classes),
                   std::vector<double>(spec.latent_dims, 0.0));
    for (auto& row : offsets) {
      for (int j = 0; j < std::min(2, spec.latent_dims); ++j) {
        row[j] = shift.offset_scale * g();
      }
    }
    splits.push_back({shift.name,
                      SampleLatent(g, spec, means, &offsets, shift.noise_scale,
                                   spec.ood_per_class)});
  }

  for (const auto& s : splits) {
    WriteFileBytes(dir / (s.name + ".tsv"),
                   FormatManifest(MakeManifest(s.name, s.latent,
                                               spec.num_classes)));
  }
  for (const auto& bb : kBackbones) {
    const Matrix map =
        RandomMatrix(g, spec.feature_dims, spec.latent_dims,
                     1.0 / std::sqrt(static_cast<double>(spec.latent_dims)));
    for (const auto& s : splits) {
      WriteEmbeddingFile(dir / (std::string(bb.name) + "_" + s.name + ".emb"),
                         Project(g, s.latent, map, bb),
                         EmbeddingDtype::kFloat32);
    }
  }

  nlohmann::ordered_json profile;
  profile["name"] = "synthetic";
  profile["metric_mode"] = "per-class-average";
  profile["ood_shifts"] = SyntheticShifts();
  profile["regimes"] = {"extreme", "moderate", "high", "full"};
  WriteFileBytes(dir / "profile.json", profile.dump(2) + "\n");
}

}  // namespace lsr
