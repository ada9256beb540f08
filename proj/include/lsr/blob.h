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

// Versioned little-endian binary blob shared by classifier models and plain
// parameter sets.
//
//   offset  size  field
//   0       4     magic "LSRB"
//   4       4     u32 format version (1)
//   8       4     u32 kind (0 param set, 1 logistic, 2 centroid, 3 baseline++)
//   12      4     u32 num_classes (0 for param sets)
//   16      4     u32 dims (0 for param sets)
//   20      4     u32 flags (bit 0 layer norm, bit 1 L2 normalize)
//   24      8     f64 cosine scale (0 unless baseline++)
//   32      4     u32 entry count
//   36      ...   name table: per entry u32 name length, name bytes,
//                 u64 value count
//   ...           payload: every entry's values as f64, in table order
//
// Classifier models store their weights under "weight" and, for logistic
// heads, "bias".

#ifndef LSR_BLOB_H_
#define LSR_BLOB_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "lsr/classifiers.h"
#include "lsr/ensembles.h"

namespace lsr {

inline constexpr std::uint32_t kBlobVersion = 1;
inline constexpr std::uint32_t kBlobKindParamSet = 0;

struct Blob {
  std::uint32_t kind = kBlobKindParamSet;
  std::uint32_t num_classes = 0;
  std::uint32_t dims = 0;
  std::uint32_t flags = 0;
  double cosine_scale = 0.0;
  ParamSet params;
};

std::string EncodeBlob(const Blob& blob);
// Throws lsr::Error on malformed input.
Blob DecodeBlob(const std::string& bytes);

Blob ReadBlob(const std::filesystem::path& path);
void WriteBlob(const std::filesystem::path& path, const Blob& blob);

Blob ModelToBlob(const ClassifierModel& model);
ClassifierModel BlobToModel(const Blob& blob);

// Replaces the parameters of a classifier blob, checking that the shapes
// match the header.
Blob WithParams(const Blob& header, ParamSet params);

}  // namespace lsr

#endif  // LSR_BLOB_H_
