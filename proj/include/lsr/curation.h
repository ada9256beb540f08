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

// Class-balanced low-shot subset curation from a labeled manifest.

#ifndef LSR_CURATION_H_
#define LSR_CURATION_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lsr {

struct ManifestItem {
  std::string id;
  int label = 0;

  bool operator==(const ManifestItem&) const = default;
};

struct Manifest {
  std::vector<ManifestItem> items;
  int num_classes = 0;

  // Throws std::invalid_argument on duplicate ids or out-of-range labels.
  void Validate() const;
  std::vector<std::size_t> ClassCounts() const;
};

enum class CurationScheme { kKPerClass, kRatio, kFixedPerClass };

std::string_view CurationSchemeName(CurationScheme scheme);
CurationScheme ParseCurationScheme(std::string_view name);

struct SubsetSpec {
  CurationScheme scheme = CurationScheme::kKPerClass;
  // k for kKPerClass, the per-class count for kFixedPerClass.
  std::size_t count = 1;
  // For kRatio, in (0, 1].
  double ratio = 1.0;
  std::size_t min_per_class = 1;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Items the spec assigns to a class holding `available` items.
// kKPerClass / kFixedPerClass: min(count, available).
// kRatio: min(available, max(min_per_class, round(ratio * available))).
std::size_t TargetCount(const SubsetSpec& spec, std::size_t available);

// Seeded uniform sampling without replacement inside each class. Each class
// draws from its own generator keyed by (seed, class), so classes do not
// perturb each other. Output is ordered by class, then manifest order.
// Throws std::invalid_argument for an empty class when the scheme needs at
// least one item from it.
Manifest Curate(const Manifest& manifest, const SubsetSpec& spec);

struct ClassDiagnostic {
  int label = 0;
  std::size_t available = 0;
  std::size_t expected = 0;
  std::size_t actual = 0;
};

struct VerificationIssue {
  // "not-in-manifest", "label-mismatch", "duplicate", "count-mismatch",
  // "class-empty", "invalid-label".
  std::string kind;
  std::string detail;
};

struct VerificationReport {
  bool passed = true;
  std::vector<ClassDiagnostic> per_class;
  std::vector<VerificationIssue> issues;
};

VerificationReport VerifySubset(const Manifest& manifest,
                                const Manifest& subset,
                                const SubsetSpec& spec);

}  // namespace lsr

#endif  // LSR_CURATION_H_
