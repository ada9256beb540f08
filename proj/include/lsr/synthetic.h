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

// Deterministic synthetic dataset for end-to-end runs of the harness.
//
// Samples come from a latent class-conditional Gaussian model. Each backbone
// is a fixed random linear map from latent to feature space plus its own
// feature noise. OOD splits add a class-dependent offset to a few latent
// dimensions; the "robust" backbone ignores those dimensions.

#ifndef LSR_SYNTHETIC_H_
#define LSR_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lsr {

struct SyntheticSpec {
  int num_classes = 8;
  int latent_dims = 8;
  int feature_dims = 16;
  int train_per_class = 40;
  int val_per_class = 25;
  int ood_per_class = 25;
  std::uint64_t seed = 0;
};

// Backbone names written by WriteSyntheticDataset.
std::vector<std::string> SyntheticBackbones();
// OOD shift names written by WriteSyntheticDataset.
std::vector<std::string> SyntheticShifts();

// Writes train/val/<shift> manifests, `<backbone>_<split>.emb` files
// (binary32) and profile.json into `dir`.
void WriteSyntheticDataset(const std::filesystem::path& dir,
                           const SyntheticSpec& spec = {});

}  // namespace lsr

#endif  // LSR_SYNTHETIC_H_
