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

// File formats for the harness:
//   * embedding files: 16-byte header ("EMB1", u32 rows, u32 dims, u32 dtype
//     with 0 = binary32 and 1 = binary64), little-endian row-major payload;
//   * manifests: `item_id<TAB>class_index` lines;
//   * accuracy records: CSV with header
//     `model,regime,role,split,shift,accuracy_pct`.

#ifndef LSR_IO_H_
#define LSR_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsr/classifiers.h"
#include "lsr/curation.h"
#include "lsr/metrics.h"

namespace lsr {

// Little-endian encoder independent of host byte order.
class ByteWriter {
 public:
  void Raw(const void* data, std::size_t size);
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void F32(float v);
  void F64(double v);
  std::string Take() { return std::move(bytes_); }

 private:
  std::string bytes_;
};

// Throws lsr::Error(kTruncated) when reading past the end.
class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}
  void Raw(void* out, std::size_t size);
  std::uint32_t U32();
  std::uint64_t U64();
  float F32();
  double F64();
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

enum class EmbeddingDtype : std::uint32_t { kFloat32 = 0, kFloat64 = 1 };

// Errors: kBadMagic, kUnknownDtype, kTruncated, kTrailingData, kNonFinite.
EmbeddingMatrix DecodeEmbeddings(std::string_view bytes);
EmbeddingMatrix LoadEmbeddingFile(const std::filesystem::path& path);
std::string EncodeEmbeddings(const EmbeddingMatrix& m, EmbeddingDtype dtype);
void WriteEmbeddingFile(const std::filesystem::path& path,
                        const EmbeddingMatrix& m,
                        EmbeddingDtype dtype = EmbeddingDtype::kFloat64);

// `num_classes` defaults to max label + 1.
Manifest ParseManifest(std::string_view text,
                       std::optional<int> num_classes = std::nullopt);
Manifest LoadManifest(const std::filesystem::path& path,
                      std::optional<int> num_classes = std::nullopt);
std::string FormatManifest(const Manifest& m);

enum class ModelRole { kStandard, kReference, kIntervention };
enum class Split { kId, kOod };

std::string_view ModelRoleName(ModelRole role);
std::string_view SplitName(Split split);

struct AccuracyRecord {
  std::string model;
  Regime regime = Regime::kFull;
  ModelRole role = ModelRole::kStandard;
  Split split = Split::kId;
  std::string shift;
  // Fraction in [0, 1]; files carry percentages.
  double accuracy = 0.0;
};

// Errors: kParse (bad header, field count, number, role or split),
// kUnknownRegime, kOutOfRange (outside [0, 100]), kDuplicateKey on a
// repeated (model, regime, split, shift).
std::vector<AccuracyRecord> ParseAccuracyRecords(std::string_view text);
std::vector<AccuracyRecord> LoadAccuracyRecords(
    const std::filesystem::path& path);
std::string FormatAccuracyRecords(const std::vector<AccuracyRecord>& records);

// Percentage with 12 significant digits ("%.12g"). Short values such as
// 67.93 print as written.
std::string FormatPercent(double fraction);

struct DatasetProfile {
  std::string name;
  AccuracyMode metric_mode = AccuracyMode::kTop1;
  std::vector<std::string> ood_shifts;
  std::vector<Regime> regimes;

  void Validate() const;
};

// "imagenet", "iwildcam", "camelyon".
std::optional<DatasetProfile> BuiltinProfile(std::string_view name);
// Built-in name, or a JSON file
// {"name", "metric_mode", "ood_shifts": [...], "regimes": [...]}.
DatasetProfile LoadProfile(const std::string& name_or_path);

// Unweighted mean of the OOD accuracies of one model in one regime over the
// profile's shifts. Throws lsr::Error(kMissingShift) naming absent shifts.
double AverageOod(const std::vector<AccuracyRecord>& records,
                  std::string_view model, Regime regime,
                  const DatasetProfile& profile);

// ID accuracy of one model in one regime. Throws lsr::Error(kParse) unless
// exactly one ID record exists.
double IdAccuracy(const std::vector<AccuracyRecord>& records,
                  std::string_view model, Regime regime);

}  // namespace lsr

#endif  // LSR_IO_H_
