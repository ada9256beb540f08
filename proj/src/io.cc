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

#include "lsr/io.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "lsr/error.h"

namespace lsr {

void ByteWriter::Raw(const void* data, std::size_t size) {
  bytes_.append(static_cast<const char*>(data), size);
}

void ByteWriter::U32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>(v >> (8 * i)));
}

void ByteWriter::U64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>(v >> (8 * i)));
}

void ByteWriter::F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
void ByteWriter::F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

void ByteReader::Raw(void* out, std::size_t size) {
  if (size > remaining()) {
    throw Error(ErrorCode::kTruncated,
                "need " + std::to_string(size) + " bytes at offset " +
                    std::to_string(pos_) + ", have " +
                    std::to_string(remaining()));
  }
  std::memcpy(out, bytes_.data() + pos_, size);
  pos_ += size;
}

std::uint32_t ByteReader::U32() {
  unsigned char b[4];
  Raw(b, 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t ByteReader::U64() {
  unsigned char b[8];
  Raw(b, 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

float ByteReader::F32() { return std::bit_cast<float>(U32()); }
double ByteReader::F64() { return std::bit_cast<double>(U64()); }

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

namespace {

constexpr char kEmbeddingMagic[4] = {'E', 'M', 'B', '1'};

}  // namespace

EmbeddingMatrix DecodeEmbeddings(std::string_view bytes) {
  ByteReader r(bytes);
  char magic[4];
  r.Raw(magic, 4);
  if (std::memcmp(magic, kEmbeddingMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "embedding file must start with EMB1");
  }
  const std::uint64_t rows = r.U32();
  const std::uint64_t dims = r.U32();
  const std::uint32_t dtype = r.U32();
  std::size_t width = 0;
  if (dtype == static_cast<std::uint32_t>(EmbeddingDtype::kFloat32)) {
    width = 4;
  } else if (dtype == static_cast<std::uint32_t>(EmbeddingDtype::kFloat64)) {
    width = 8;
  } else {
    throw Error(ErrorCode::kUnknownDtype,
                "dtype code " + std::to_string(dtype));
  }
  const std::uint64_t expected = rows * dims * width;
  if (r.remaining() < expected) {
    throw Error(ErrorCode::kTruncated,
                "header declares " + std::to_string(rows) + "x" +
                    std::to_string(dims) + " values (" +
                    std::to_string(expected) + " bytes), payload has " +
                    std::to_string(r.remaining()));
  }
  if (r.remaining() > expected) {
    throw Error(ErrorCode::kTrailingData,
                std::to_string(r.remaining() - expected) +
                    " bytes after the payload");
  }
  std::vector<double> data(rows * dims);
  for (auto& v : data) v = width == 4 ? static_cast<double>(r.F32()) : r.F64();
  return EmbeddingMatrix(rows, dims, std::move(data));
}

EmbeddingMatrix LoadEmbeddingFile(const std::filesystem::path& path) {
  return DecodeEmbeddings(ReadFileBytes(path));
}

std::string EncodeEmbeddings(const EmbeddingMatrix& m, EmbeddingDtype dtype) {
  ByteWriter w;
  w.Raw(kEmbeddingMagic, 4);
  w.U32(static_cast<std::uint32_t>(m.rows()));
  w.U32(static_cast<std::uint32_t>(m.dims()));
  w.U32(static_cast<std::uint32_t>(dtype));
  for (double v : m.data()) {
    if (dtype == EmbeddingDtype::kFloat32) {
      w.F32(static_cast<float>(v));
    } else {
      w.F64(v);
    }
  }
  return w.Take();
}

void WriteEmbeddingFile(const std::filesystem::path& path,
                        const EmbeddingMatrix& m, EmbeddingDtype dtype) {
  WriteFileBytes(path, EncodeEmbeddings(m, dtype));
}

namespace {

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    fields.push_back(line.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string Where(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

}  // namespace

Manifest ParseManifest(std::string_view text, std::optional<int> num_classes) {
  Manifest m;
  int max_label = -1;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = SplitFields(line, '\t');
    int label = 0;
    if (fields.size() != 2 || fields[0].empty() ||
        !ParseNumber(fields[1], label)) {
      throw Error(ErrorCode::kParse,
                  Where(line_no) + ": expected item_id<TAB>class_index");
    }
    if (label < 0) {
      throw Error(ErrorCode::kOutOfRange, Where(line_no) + ": negative label");
    }
    max_label = std::max(max_label, label);
    m.items.push_back({std::string(fields[0]), label});
  }
  m.num_classes = num_classes.value_or(max_label + 1);
  if (max_label >= m.num_classes) {
    throw Error(ErrorCode::kOutOfRange,
                "label " + std::to_string(max_label) + " >= num_classes " +
                    std::to_string(m.num_classes));
  }
  try {
    m.Validate();
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::kDuplicateKey, e.what());
  }
  return m;
}

Manifest LoadManifest(const std::filesystem::path& path,
                      std::optional<int> num_classes) {
  return ParseManifest(ReadFileBytes(path), num_classes);
}

std::string FormatManifest(const Manifest& m) {
  std::string out;
  for (const auto& item : m.items) {
    out += item.id;
    out += '\t';
    out += std::to_string(item.label);
    out += '\n';
  }
  return out;
}

std::string_view ModelRoleName(ModelRole role) {
  switch (role) {
    case ModelRole::kStandard: return "standard";
    case ModelRole::kReference: return "reference";
    case ModelRole::kIntervention: return "intervention";
  }
  return "unknown";
}

std::string_view SplitName(Split split) {
  return split == Split::kId ? "id" : "ood";
}

namespace {

constexpr std::string_view kRecordHeader =
    "model,regime,role,split,shift,accuracy_pct";

}  // namespace

std::vector<AccuracyRecord> ParseAccuracyRecords(std::string_view text) {
  const auto lines = SplitLines(text);
  if (lines.empty() || Trim(lines[0]) != kRecordHeader) {
    throw Error(ErrorCode::kParse,
                "accuracy records must start with header '" +
                    std::string(kRecordHeader) + "'");
  }
  std::vector<AccuracyRecord> records;
  std::map<std::tuple<std::string, Regime, Split, std::string>, std::size_t>
      keys;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (Trim(lines[i]).empty()) continue;
    auto fields = SplitFields(lines[i], ',');
    if (fields.size() != 6) {
      throw Error(ErrorCode::kParse, Where(line_no) + ": expected 6 fields, got " +
                                         std::to_string(fields.size()));
    }
    for (auto& f : fields) f = Trim(f);
    AccuracyRecord r;
    r.model = std::string(fields[0]);
    if (r.model.empty()) {
      throw Error(ErrorCode::kParse, Where(line_no) + ": empty model name");
    }
    const auto regime = ParseRegime(fields[1]);
    if (!regime) {
      throw Error(ErrorCode::kUnknownRegime,
                  Where(line_no) + ": unknown regime '" +
                      std::string(fields[1]) + "'");
    }
    r.regime = *regime;
    if (fields[2] == "standard") {
      r.role = ModelRole::kStandard;
    } else if (fields[2] == "reference") {
      r.role = ModelRole::kReference;
    } else if (fields[2] == "intervention") {
      r.role = ModelRole::kIntervention;
    } else {
      throw Error(ErrorCode::kParse, Where(line_no) + ": unknown role '" +
                                         std::string(fields[2]) + "'");
    }
    if (fields[3] == "id") {
      r.split = Split::kId;
    } else if (fields[3] == "ood") {
      r.split = Split::kOod;
    } else {
      throw Error(ErrorCode::kParse, Where(line_no) + ": unknown split '" +
                                         std::string(fields[3]) + "'");
    }
    r.shift = std::string(fields[4]);
    double pct = 0.0;
    if (!ParseNumber(fields[5], pct) || !std::isfinite(pct)) {
      throw Error(ErrorCode::kParse, Where(line_no) + ": bad accuracy '" +
                                         std::string(fields[5]) + "'");
    }
    if (pct < 0.0 || pct > 100.0) {
      throw Error(ErrorCode::kOutOfRange,
                  Where(line_no) + ": accuracy_pct " + std::string(fields[5]) +
                      " outside [0, 100]");
    }
    r.accuracy = pct / 100.0;
    auto key = std::make_tuple(r.model, r.regime, r.split, r.shift);
    auto [it, inserted] = keys.emplace(key, line_no);
    if (!inserted) {
      throw Error(ErrorCode::kDuplicateKey,
                  Where(line_no) + ": (" + r.model + ", " +
                      std::string(RegimeName(r.regime)) + ", " +
                      std::string(SplitName(r.split)) + ", " + r.shift +
                      ") already defined on " + Where(it->second));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<AccuracyRecord> LoadAccuracyRecords(
    const std::filesystem::path& path) {
  return ParseAccuracyRecords(ReadFileBytes(path));
}

std::string FormatPercent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", 100.0 * fraction);
  return buf;
}

std::string FormatAccuracyRecords(const std::vector<AccuracyRecord>& records) {
  std::string out(kRecordHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.model + ',' + std::string(RegimeName(r.regime)) + ',' +
           std::string(ModelRoleName(r.role)) + ',' +
           std::string(SplitName(r.split)) + ',' + r.shift + ',' +
           FormatPercent(r.accuracy) + '\n';
  }
  return out;
}

void DatasetProfile::Validate() const {
  if (ood_shifts.empty()) {
    throw std::invalid_argument("profile '" + name + "' lists no OOD shifts");
  }
}

std::optional<DatasetProfile> BuiltinProfile(std::string_view name) {
  const std::vector<Regime> all = {Regime::kExtreme, Regime::kLow,
                                   Regime::kModerate, Regime::kHigh,
                                   Regime::kFull};
  if (name == "imagenet") {
    return DatasetProfile{"imagenet", AccuracyMode::kTop1,
                          {"imagenet-v2", "imagenet-r", "imagenet-sketch",
                           "imagenet-a", "objectnet"},
                          all};
  }
  if (name == "iwildcam") {
    return DatasetProfile{"iwildcam", AccuracyMode::kPerClassAverage,
                          {"val-ood"}, all};
  }
  if (name == "camelyon") {
    return DatasetProfile{"camelyon", AccuracyMode::kPerClassAverage,
                          {"val-ood"}, all};
  }
  return std::nullopt;
}

DatasetProfile LoadProfile(const std::string& name_or_path) {
  if (auto builtin = BuiltinProfile(name_or_path)) return *builtin;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFileBytes(name_or_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                "profile " + name_or_path + ": " + e.what());
  }
  DatasetProfile p;
  try {
    p.name = j.at("name").get<std::string>();
    p.metric_mode = ParseAccuracyMode(
        j.value("metric_mode", std::string("top1")));
    p.ood_shifts = j.at("ood_shifts").get<std::vector<std::string>>();
    for (const auto& r : j.value("regimes", std::vector<std::string>{})) {
      const auto regime = ParseRegime(r);
      if (!regime) throw Error(ErrorCode::kUnknownRegime, r);
      p.regimes.push_back(*regime);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                "profile " + name_or_path + ": " + e.what());
  }
  p.Validate();
  return p;
}

double AverageOod(const std::vector<AccuracyRecord>& records,
                  std::string_view model, Regime regime,
                  const DatasetProfile& profile) {
  profile.Validate();
  std::map<std::string_view, double> by_shift;
  for (const auto& r : records) {
    if (r.model == model && r.regime == regime && r.split == Split::kOod) {
      by_shift.emplace(r.shift, r.accuracy);
    }
  }
  double sum = 0.0;
  std::vector<std::string> missing;
  for (const auto& shift : profile.ood_shifts) {
    auto it = by_shift.find(shift);
    if (it == by_shift.end()) {
      missing.push_back(shift);
    } else {
      sum += it->second;
    }
  }
  if (!missing.empty()) {
    std::string msg = std::string(model) + " (" +
                      std::string(RegimeName(regime)) +
                      ") lacks OOD shifts:";
    for (const auto& m : missing) msg += " " + m;
    throw Error(ErrorCode::kMissingShift, msg);
  }
  return sum / static_cast<double>(profile.ood_shifts.size());
}

double IdAccuracy(const std::vector<AccuracyRecord>& records,
                  std::string_view model, Regime regime) {
  std::optional<double> found;
  for (const auto& r : records) {
    if (r.model == model && r.regime == regime && r.split == Split::kId) {
      if (found) {
        throw Error(ErrorCode::kParse,
                    std::string(model) + " (" +
                        std::string(RegimeName(regime)) +
                        ") has more than one ID record");
      }
      found = r.accuracy;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kParse, std::string(model) + " (" +
                                       std::string(RegimeName(regime)) +
                                       ") has no ID record");
  }
  return *found;
}

}  // namespace lsr
