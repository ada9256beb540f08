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

// Weight-space ensembling: linear interpolation between two weight sets
// (WiSE-FT), uniform and greedy model soups, and random soup configs.

#ifndef LSR_ENSEMBLES_H_
#define LSR_ENSEMBLES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace lsr {

struct ParamSet {
  std::map<std::string, std::vector<double>> entries;

  bool operator==(const ParamSet&) const = default;
};

// Empty when compatible; otherwise one line per mismatched name or length.
std::vector<std::string> CompatibilityProblems(const ParamSet& a,
                                               const ParamSet& b);

// Throws lsr::Error(kIncompatible) listing every mismatch.
void CheckCompatible(const ParamSet& a, const ParamSet& b);

// Throws lsr::Error(kNonFinite) on NaN or infinite entries.
void CheckFinite(const ParamSet& p);

inline constexpr double kDefaultWiseFtAlpha = 0.5;

// (1 - alpha) * theta0 + alpha * theta1. alpha = 0 and alpha = 1 return the
// endpoints bit-exactly.
ParamSet Interpolate(const ParamSet& theta0, const ParamSet& theta1,
                     double alpha);

// Elementwise mean. Each element is summed in sorted order, so the result is
// bit-identical under any permutation of `members`.
ParamSet UniformSoup(std::span<const ParamSet> members);

struct SoupCandidate {
  ParamSet params;
  double held_out_id_acc = 0.0;
  std::string tag;
};

struct GreedySoupResult {
  ParamSet params;
  std::vector<std::string> tags;
  double score = 0.0;
};

using SoupEvalFn = std::function<double(const ParamSet&)>;

inline constexpr std::size_t kDefaultSoupPoolSize = 9;

// Candidates are visited by held-out accuracy, descending (stable). The soup
// starts with the best one; each later candidate is kept only if the uniform
// average of the members plus that candidate strictly raises eval_fn.
// eval_fn is called sequentially, once per visited candidate.
GreedySoupResult GreedySoup(std::span<const SoupCandidate> candidates,
                            const SoupEvalFn& eval_fn);

struct SoupConfigRanges {
  int epochs_min = 4;
  int epochs_max = 16;
  double learning_rate_min = 1e-6;
  double learning_rate_max = 1e-4;
  double weight_decay_min = 1e-4;
  double weight_decay_max = 0.630957344480193;  // 10^-0.2
  double label_smoothing_min = 0.0;
  double label_smoothing_max = 0.25;
  double mixup_min = 0.0;
  double mixup_max = 0.9;
  int randaug_m_min = 0;
  int randaug_m_max = 20;
  int randaug_n_min = 0;
  int randaug_n_max = 2;

  void Validate() const;
};

struct SoupConfig {
  std::uint64_t seed = 0;
  int epochs = 0;
  double learning_rate = 0.0;
  double weight_decay = 0.0;
  double label_smoothing = 0.0;
  double mixup = 0.0;
  int randaug_m = 0;
  int randaug_n = 0;
};

// Integer fields uniform over the closed range, learning rate and weight
// decay log-uniform, the rest uniform. Deterministic in `seed`.
SoupConfig SampleSoupConfig(const SoupConfigRanges& ranges, std::uint64_t seed);

}  // namespace lsr

#endif  // LSR_ENSEMBLES_H_
