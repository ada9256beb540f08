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

#include "lsr/curation.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace lsr {

void Manifest::Validate() const {
  if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  std::unordered_set<std::string_view> seen;
  for (const auto& item : items) {
    if (item.label < 0 || item.label >= num_classes) {
      throw std::invalid_argument("item '" + item.id + "' has label " +
                                  std::to_string(item.label) +
                                  " outside [0, " +
                                  std::to_string(num_classes) + ")");
    }
    if (!seen.insert(item.id).second) {
      throw std::invalid_argument("duplicate item id '" + item.id + "'");
    }
  }
}

std::vector<std::size_t> Manifest::ClassCounts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (const auto& item : items) {
    if (item.label >= 0 && item.label < num_classes) {
      ++counts[static_cast<std::size_t>(item.label)];
    }
  }
  return counts;
}

std::string_view CurationSchemeName(CurationScheme scheme) {
  switch (scheme) {
    case CurationScheme::kKPerClass: return "k-per-class";
    case CurationScheme::kRatio: return "ratio";
    case CurationScheme::kFixedPerClass: return "fixed-per-class";
  }
  return "unknown";
}

CurationScheme ParseCurationScheme(std::string_view name) {
  for (auto s : {CurationScheme::kKPerClass, CurationScheme::kRatio,
                 CurationScheme::kFixedPerClass}) {
    if (CurationSchemeName(s) == name) return s;
  }
  throw std::invalid_argument("unknown curation scheme '" + std::string(name) +
                              "'");
}

void SubsetSpec::Validate() const {
  if (scheme == CurationScheme::kRatio) {
    if (!(ratio > 0.0 && ratio <= 1.0)) {
      throw std::invalid_argument("ratio must be in (0, 1], got " +
                                  std::to_string(ratio));
    }
  } else if (count < 1) {
    throw std::invalid_argument("per-class count must be >= 1");
  }
}

std::size_t TargetCount(const SubsetSpec& spec, std::size_t available) {
  if (spec.scheme != CurationScheme::kRatio) {
    return std::min(spec.count, available);
  }
  const auto rounded = static_cast<std::size_t>(
      std::llround(spec.ratio * static_cast<double>(available)));
  return std::min(available, std::max(spec.min_per_class, rounded));
}

namespace {

bool NeedsEveryClass(const SubsetSpec& spec) {
  return spec.scheme != CurationScheme::kRatio || spec.min_per_class >= 1;
}

std::mt19937_64 ClassRng(std::uint64_t seed, int label) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(label)};
  return std::mt19937_64(seq);
}

}  // namespace

Manifest Curate(const Manifest& manifest, const SubsetSpec& spec) {
  spec.Validate();
  manifest.Validate();
  const std::size_t classes = static_cast<std::size_t>(manifest.num_classes);
  std::vector<std::vector<std::size_t>> members(classes);
  for (std::size_t i = 0; i < manifest.items.size(); ++i) {
    members[static_cast<std::size_t>(manifest.items[i].label)].push_back(i);
  }

  Manifest out;
  out.num_classes = manifest.num_classes;
  for (std::size_t c = 0; c < classes; ++c) {
    auto& pool = members[c];
    if (pool.empty()) {
      if (NeedsEveryClass(spec)) {
        throw std::invalid_argument("class " + std::to_string(c) +
                                    " has no items in the manifest");
      }
      continue;
    }
    const std::size_t take = TargetCount(spec, pool.size());
    auto rng = ClassRng(spec.seed, static_cast<int>(c));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
    for (std::size_t i : pool) out.items.push_back(manifest.items[i]);
  }
  return out;
}

VerificationReport VerifySubset(const Manifest& manifest,
                                const Manifest& subset,
                                const SubsetSpec& spec) {
  VerificationReport report;
  auto issue = [&](std::string kind, std::string detail) {
    report.passed = false;
    report.issues.push_back({std::move(kind), std::move(detail)});
  };

  std::unordered_map<std::string_view, int> source;
  for (const auto& item : manifest.items) source.emplace(item.id, item.label);

  const std::size_t classes =
      static_cast<std::size_t>(std::max(manifest.num_classes, 0));
  std::vector<std::size_t> actual(classes, 0);
  std::unordered_set<std::string_view> seen;
  for (const auto& item : subset.items) {
    if (!seen.insert(item.id).second) {
      issue("duplicate", "item '" + item.id + "' appears more than once");
      continue;
    }
    auto it = source.find(item.id);
    if (it == source.end()) {
      issue("not-in-manifest", "item '" + item.id + "'");
      continue;
    }
    if (it->second != item.label) {
      issue("label-mismatch", "item '" + item.id + "' has label " +
                                  std::to_string(item.label) +
                                  ", manifest says " +
                                  std::to_string(it->second));
      continue;
    }
    if (item.label < 0 || static_cast<std::size_t>(item.label) >= classes) {
      issue("invalid-label", "item '" + item.id + "'");
      continue;
    }
    ++actual[static_cast<std::size_t>(item.label)];
  }

  const auto available = manifest.ClassCounts();
  for (std::size_t c = 0; c < classes; ++c) {
    ClassDiagnostic diag;
    diag.label = static_cast<int>(c);
    diag.available = available[c];
    diag.expected = TargetCount(spec, available[c]);
    diag.actual = actual[c];
    report.per_class.push_back(diag);
    if (diag.actual == 0 && spec.min_per_class >= 1) {
      issue("class-empty", "class " + std::to_string(c) + " has no items");
    } else if (diag.actual != diag.expected) {
      issue("count-mismatch", "class " + std::to_string(c) + " has " +
                                  std::to_string(diag.actual) +
                                  " items, expected " +
                                  std::to_string(diag.expected));
    }
  }
  return report;
}

}  // namespace lsr
