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

#include "lsr/ensembles.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lsr/error.h"

namespace lsr {

std::vector<std::string> CompatibilityProblems(const ParamSet& a,
                                               const ParamSet& b) {
  std::vector<std::string> problems;
  for (const auto& [name, values] : a.entries) {
    auto it = b.entries.find(name);
    if (it == b.entries.end()) {
      problems.push_back("'" + name + "' missing from second set");
    } else if (it->second.size() != values.size()) {
      problems.push_back("'" + name + "' length " +
                         std::to_string(values.size()) + " vs " +
                         std::to_string(it->second.size()));
    }
  }
  for (const auto& [name, values] : b.entries) {
    if (!a.entries.contains(name)) {
      problems.push_back("'" + name + "' missing from first set");
    }
  }
  return problems;
}

void CheckCompatible(const ParamSet& a, const ParamSet& b) {
  const auto problems = CompatibilityProblems(a, b);
  if (problems.empty()) return;
  std::string msg = "parameter sets are incompatible:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw Error(ErrorCode::kIncompatible, msg);
}

void CheckFinite(const ParamSet& p) {
  for (const auto& [name, values] : p.entries) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw Error(ErrorCode::kNonFinite,
                    "'" + name + "'[" + std::to_string(i) + "] is not finite");
      }
    }
  }
}

ParamSet Interpolate(const ParamSet& theta0, const ParamSet& theta1,
                     double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must be in [0, 1]");
  }
  CheckCompatible(theta0, theta1);
  if (alpha == 0.0) return theta0;
  if (alpha == 1.0) return theta1;
  ParamSet out;
  for (const auto& [name, a] : theta0.entries) {
    const auto& b = theta1.entries.at(name);
    std::vector<double> mixed(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      mixed[i] = (1.0 - alpha) * a[i] + alpha * b[i];
    }
    out.entries.emplace(name, std::move(mixed));
  }
  return out;
}

ParamSet UniformSoup(std::span<const ParamSet> members) {
  if (members.empty()) throw std::invalid_argument("soup of zero models");
  for (std::size_t m = 1; m < members.size(); ++m) {
    CheckCompatible(members[0], members[m]);
  }
  if (members.size() == 1) return members[0];
  const double n = static_cast<double>(members.size());
  std::vector<double> column(members.size());
  ParamSet out;
  for (const auto& [name, first] : members[0].entries) {
    std::vector<double> mean(first.size());
    std::vector<const std::vector<double>*> sources;
    sources.reserve(members.size());
    for (const auto& m : members) sources.push_back(&m.entries.at(name));
    for (std::size_t i = 0; i < first.size(); ++i) {
      for (std::size_t m = 0; m < sources.size(); ++m) {
        column[m] = (*sources[m])[i];
      }
      std::sort(column.begin(), column.end());
      mean[i] = std::accumulate(column.begin(), column.end(), 0.0) / n;
    }
    out.entries.emplace(name, std::move(mean));
  }
  return out;
}

GreedySoupResult GreedySoup(std::span<const SoupCandidate> candidates,
                            const SoupEvalFn& eval_fn) {
  if (candidates.empty()) {
    throw std::invalid_argument("greedy soup needs at least one candidate");
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) {
                     return candidates[l].held_out_id_acc >
                            candidates[r].held_out_id_acc;
                   });
  for (std::size_t i = 1; i < order.size(); ++i) {
    CheckCompatible(candidates[order[0]].params, candidates[order[i]].params);
  }

  std::vector<ParamSet> members{candidates[order[0]].params};
  GreedySoupResult result;
  result.params = members.front();
  result.tags.push_back(candidates[order[0]].tag);
  result.score = eval_fn(result.params);

  for (std::size_t i = 1; i < order.size(); ++i) {
    const SoupCandidate& cand = candidates[order[i]];
    members.push_back(cand.params);
    ParamSet trial = UniformSoup(members);
    const double score = eval_fn(trial);
    if (score > result.score) {
      result.params = std::move(trial);
      result.score = score;
      result.tags.push_back(cand.tag);
    } else {
      members.pop_back();
    }
  }
  return result;
}

void SoupConfigRanges::Validate() const {
  auto fail = [](const char* what) {
    throw std::invalid_argument(std::string("invalid soup range: ") + what);
  };
  if (epochs_min > epochs_max) fail("epochs");
  if (!(learning_rate_min > 0.0 && learning_rate_min <= learning_rate_max)) {
    fail("learning_rate");
  }
  if (!(weight_decay_min > 0.0 && weight_decay_min <= weight_decay_max)) {
    fail("weight_decay");
  }
  if (label_smoothing_min > label_smoothing_max) fail("label_smoothing");
  if (mixup_min > mixup_max) fail("mixup");
  if (randaug_m_min > randaug_m_max) fail("randaug_m");
  if (randaug_n_min > randaug_n_max) fail("randaug_n");
}

namespace {

double UniformIn(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double LogUniformIn(std::mt19937_64& rng, double lo, double hi) {
  const double v = std::exp(UniformIn(rng, std::log(lo), std::log(hi)));
  // exp(log(x)) may land a hair outside the range.
  return std::clamp(v, lo, hi);
}

}  // namespace

SoupConfig SampleSoupConfig(const SoupConfigRanges& ranges,
                            std::uint64_t seed) {
  ranges.Validate();
  std::mt19937_64 rng(seed);
  SoupConfig c;
  c.seed = seed;
  c.epochs =
      std::uniform_int_distribution<int>(ranges.epochs_min, ranges.epochs_max)(
          rng);
  c.learning_rate =
      LogUniformIn(rng, ranges.learning_rate_min, ranges.learning_rate_max);
  c.weight_decay =
      LogUniformIn(rng, ranges.weight_decay_min, ranges.weight_decay_max);
  c.label_smoothing =
      UniformIn(rng, ranges.label_smoothing_min, ranges.label_smoothing_max);
  c.mixup = UniformIn(rng, ranges.mixup_min, ranges.mixup_max);
  c.randaug_m = std::uniform_int_distribution<int>(ranges.randaug_m_min,
                                                   ranges.randaug_m_max)(rng);
  c.randaug_n = std::uniform_int_distribution<int>(ranges.randaug_n_min,
                                                   ranges.randaug_n_max)(rng);
  return c;
}

}  // namespace lsr
