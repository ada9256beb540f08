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

#include "lsr/blob.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lsr/error.h"
#include "lsr/io.h"

namespace lsr {

namespace {

constexpr char kMagic[4] = {'L', 'S', 'R', 'B'};
constexpr std::uint32_t kFlagLayerNorm = 1u << 0;
constexpr std::uint32_t kFlagL2 = 1u << 1;

}  // namespace

std::string EncodeBlob(const Blob& blob) {
  CheckFinite(blob.params);
  ByteWriter w;
  w.Raw(kMagic, 4);
  w.U32(kBlobVersion);
  w.U32(blob.kind);
  w.U32(blob.num_classes);
  w.U32(blob.dims);
  w.U32(blob.flags);
  w.F64(blob.cosine_scale);
  w.U32(static_cast<std::uint32_t>(blob.params.entries.size()));
  for (const auto& [name, values] : blob.params.entries) {
    w.U32(static_cast<std::uint32_t>(name.size()));
    w.Raw(name.data(), name.size());
    w.U64(values.size());
  }
  for (const auto& [name, values] : blob.params.entries) {
    for (double v : values) w.F64(v);
  }
  return w.Take();
}

Blob DecodeBlob(const std::string& bytes) {
  ByteReader r(bytes);
  char magic[4];
  r.Raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an LSRB blob");
  }
  const std::uint32_t version = r.U32();
  if (version != kBlobVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "blob version " + std::to_string(version));
  }
  Blob blob;
  blob.kind = r.U32();
  blob.num_classes = r.U32();
  blob.dims = r.U32();
  blob.flags = r.U32();
  blob.cosine_scale = r.F64();
  const std::uint32_t count = r.U32();
  std::vector<std::pair<std::string, std::uint64_t>> table;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = r.U32();
    std::string name(len, '\0');
    r.Raw(name.data(), len);
    table.emplace_back(std::move(name), r.U64());
  }
  for (const auto& [name, n] : table) {
    if (n > r.remaining() / 8) {
      throw Error(ErrorCode::kTruncated, "payload for '" + name + "'");
    }
    std::vector<double> values(n);
    for (auto& v : values) v = r.F64();
    if (!blob.params.entries.emplace(name, std::move(values)).second) {
      throw Error(ErrorCode::kDuplicateKey, "entry '" + name + "'");
    }
  }
  if (r.remaining() != 0) {
    throw Error(ErrorCode::kTrailingData,
                std::to_string(r.remaining()) + " bytes after payload");
  }
  CheckFinite(blob.params);
  return blob;
}

Blob ReadBlob(const std::filesystem::path& path) {
  return DecodeBlob(ReadFileBytes(path));
}

void WriteBlob(const std::filesystem::path& path, const Blob& blob) {
  WriteFileBytes(path, EncodeBlob(blob));
}

Blob ModelToBlob(const ClassifierModel& model) {
  Blob blob;
  blob.kind = static_cast<std::uint32_t>(model.kind);
  blob.num_classes = static_cast<std::uint32_t>(model.num_classes);
  blob.dims = static_cast<std::uint32_t>(model.dims);
  blob.flags = (model.preprocessing.layer_norm ? kFlagLayerNorm : 0u) |
               (model.preprocessing.l2_normalize ? kFlagL2 : 0u);
  blob.cosine_scale =
      model.kind == ClassifierKind::kBaselinePP ? model.cosine_scale : 0.0;
  blob.params.entries["weight"] = model.weights;
  if (model.kind == ClassifierKind::kLogistic) {
    blob.params.entries["bias"] = model.bias;
  }
  return blob;
}

ClassifierModel BlobToModel(const Blob& blob) {
  if (blob.kind < 1 || blob.kind > 3) {
    throw Error(ErrorCode::kIncompatible,
                "blob kind " + std::to_string(blob.kind) +
                    " is not a classifier model");
  }
  ClassifierModel m;
  m.kind = static_cast<ClassifierKind>(blob.kind);
  m.num_classes = static_cast<int>(blob.num_classes);
  m.dims = blob.dims;
  m.preprocessing.layer_norm = (blob.flags & kFlagLayerNorm) != 0;
  m.preprocessing.l2_normalize = (blob.flags & kFlagL2) != 0;
  m.cosine_scale = blob.cosine_scale;
  const std::size_t expected =
      static_cast<std::size_t>(blob.num_classes) * blob.dims;
  auto it = blob.params.entries.find("weight");
  if (it == blob.params.entries.end() || it->second.size() != expected) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model blob needs a 'weight' entry of " +
                    std::to_string(expected) + " values");
  }
  m.weights = it->second;
  if (m.kind == ClassifierKind::kLogistic) {
    auto b = blob.params.entries.find("bias");
    if (b == blob.params.entries.end() ||
        b->second.size() != blob.num_classes) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "logistic blob needs a 'bias' entry of " +
                      std::to_string(blob.num_classes) + " values");
    }
    m.bias = b->second;
  }
  if (m.kind == ClassifierKind::kBaselinePP && !(m.cosine_scale > 0.0)) {
    throw Error(ErrorCode::kOutOfRange, "baseline++ blob has no cosine scale");
  }
  return m;
}

Blob WithParams(const Blob& header, ParamSet params) {
  CheckCompatible(header.params, params);
  Blob out = header;
  out.params = std::move(params);
  return out;
}

}  // namespace lsr
