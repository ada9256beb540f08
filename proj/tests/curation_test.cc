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

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace lsr {
namespace {

// Items are interleaved across classes so that manifest order differs from
// class order.
Manifest MakeManifest(const std::vector<std::size_t>& counts) {
  Manifest m;
  m.num_classes = static_cast<int>(counts.size());
  std::vector<std::size_t> left = counts;
  bool any = true;
  std::size_t serial = 0;
  while (any) {
    any = false;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (left[c] == 0) continue;
      --left[c];
      any = true;
      m.items.push_back({"img" + std::to_string(serial++), static_cast<int>(c)});
    }
  }
  return m;
}

std::vector<std::size_t> Counts(const Manifest& m) { return m.ClassCounts(); }

SubsetSpec Ratio(double r, std::size_t min = 1, std::uint64_t seed = 0) {
  SubsetSpec s;
  s.scheme = CurationScheme::kRatio;
  s.ratio = r;
  s.min_per_class = min;
  s.seed = seed;
  return s;
}

SubsetSpec PerClass(CurationScheme scheme, std::size_t k, std::uint64_t seed = 0) {
  SubsetSpec s;
  s.scheme = scheme;
  s.count = k;
  s.seed = seed;
  return s;
}

TEST(Curate, RatioRounding) {
  const Manifest m = MakeManifest({100, 3, 50});
  const Manifest out = Curate(m, Ratio(0.10));
  EXPECT_EQ(Counts(out), (std::vector<std::size_t>{10, 1, 5}));
  EXPECT_EQ(out.items.size(), 16u);
}

TEST(Curate, FixedPerClassTwoClasses) {
  const Manifest m = MakeManifest({4000, 2500});
  const Manifest out = Curate(m, PerClass(CurationScheme::kFixedPerClass, 1500));
  EXPECT_EQ(Counts(out), (std::vector<std::size_t>{1500, 1500}));
  EXPECT_EQ(out.items.size(), 3000u);
}

TEST(Curate, OnePerClassOnThousandClasses) {
  const Manifest m = MakeManifest(std::vector<std::size_t>(1000, 5));
  const Manifest out = Curate(m, PerClass(CurationScheme::kKPerClass, 1));
  EXPECT_EQ(out.items.size(), 1000u);
  for (std::size_t c : Counts(out)) EXPECT_EQ(c, 1u);
}

TEST(Curate, KLargerThanClassTakesAll) {
  const Manifest m = MakeManifest({2, 7});
  const Manifest out = Curate(m, PerClass(CurationScheme::kKPerClass, 5));
  EXPECT_EQ(Counts(out), (std::vector<std::size_t>{2, 5}));
}

TEST(Curate, OrderedByClassThenManifestOrder) {
  const Manifest m = MakeManifest({20, 20, 20});
  const Manifest out = Curate(m, PerClass(CurationScheme::kKPerClass, 5, 9));
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < m.items.size(); ++i) pos[m.items[i].id] = i;
  for (std::size_t i = 1; i < out.items.size(); ++i) {
    const auto& a = out.items[i - 1];
    const auto& b = out.items[i];
    EXPECT_TRUE(a.label < b.label ||
                (a.label == b.label && pos[a.id] < pos[b.id]));
  }
}

TEST(Curate, DeterministicPerSeed) {
  const Manifest m = MakeManifest({50, 40, 30});
  for (std::uint64_t seed : {0ull, 1ull, 0xffffffff00000001ull}) {
    const SubsetSpec s = PerClass(CurationScheme::kKPerClass, 5, seed);
    EXPECT_EQ(Curate(m, s).items, Curate(m, s).items);
  }
  EXPECT_NE(Curate(m, PerClass(CurationScheme::kKPerClass, 5, 1)).items,
            Curate(m, PerClass(CurationScheme::kKPerClass, 5, 2)).items);
}

TEST(Curate, ClassesDoNotPerturbEachOther) {
  // Adding items to class 1 leaves the class 0 draw unchanged.
  Manifest a = MakeManifest({30, 10});
  Manifest b = a;
  b.items.push_back({"extra", 1});
  const SubsetSpec s = PerClass(CurationScheme::kKPerClass, 4, 5);
  std::vector<ManifestItem> ca, cb;
  for (const auto& it : Curate(a, s).items) if (it.label == 0) ca.push_back(it);
  for (const auto& it : Curate(b, s).items) if (it.label == 0) cb.push_back(it);
  EXPECT_EQ(ca, cb);
}

TEST(Curate, Errors) {
  const Manifest empty_class = MakeManifest({5, 0, 3});
  EXPECT_THROW(Curate(empty_class, PerClass(CurationScheme::kKPerClass, 1)),
               std::invalid_argument);
  EXPECT_THROW(Curate(empty_class, Ratio(0.5)), std::invalid_argument);
  const Manifest m = MakeManifest({5, 5});
  EXPECT_THROW(Curate(m, Ratio(0.0)), std::invalid_argument);
  EXPECT_THROW(Curate(m, Ratio(1.5)), std::invalid_argument);
  EXPECT_THROW(Curate(m, PerClass(CurationScheme::kKPerClass, 0)),
               std::invalid_argument);
  Manifest dup = m;
  dup.items.push_back(dup.items.front());
  EXPECT_THROW(Curate(dup, PerClass(CurationScheme::kKPerClass, 1)),
               std::invalid_argument);
  EXPECT_THROW(ParseCurationScheme("stratified"), std::invalid_argument);
}

// Brute-force recount against the rounding rule on random manifests.
TEST(Curate, RatioCountsOnRandomManifests) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> classes(1, 12);
  std::uniform_int_distribution<std::size_t> size(1, 300);
  std::uniform_real_distribution<double> ratio(0.001, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> counts(classes(rng));
    for (auto& c : counts) c = size(rng);
    const Manifest m = MakeManifest(counts);
    const SubsetSpec s = Ratio(ratio(rng), 1, trial);
    const Manifest out = Curate(m, s);
    const auto got = Counts(out);
    for (std::size_t c = 0; c < counts.size(); ++c) {
      const double raw = s.ratio * static_cast<double>(counts[c]);
      std::size_t want = static_cast<std::size_t>(std::floor(raw + 0.5));
      if (want < 1) want = 1;
      if (want > counts[c]) want = counts[c];
      EXPECT_EQ(got[c], want) << trial << ":" << c;
      EXPECT_GE(got[c], 1u);
    }
    EXPECT_TRUE(VerifySubset(m, out, s).passed);
  }
}

TEST(VerifySubset, ReportsEveryProblem) {
  const Manifest m = MakeManifest({10, 10, 10});
  const SubsetSpec s = PerClass(CurationScheme::kKPerClass, 2, 3);
  Manifest sub = Curate(m, s);
  const auto ok = VerifySubset(m, sub, s);
  EXPECT_TRUE(ok.passed);
  ASSERT_EQ(ok.per_class.size(), 3u);
  EXPECT_EQ(ok.per_class[1].available, 10u);
  EXPECT_EQ(ok.per_class[1].expected, 2u);
  EXPECT_EQ(ok.per_class[1].actual, 2u);

  sub.items.push_back({"ghost", 0});
  sub.items.push_back(sub.items.front());
  std::set<std::string> kinds;
  for (const auto& i : VerifySubset(m, sub, s).issues) kinds.insert(i.kind);
  EXPECT_TRUE(kinds.count("not-in-manifest"));
  EXPECT_TRUE(kinds.count("duplicate"));

  Manifest bad_label = Curate(m, s);
  bad_label.items[0].label = 1;
  kinds.clear();
  for (const auto& i : VerifySubset(m, bad_label, s).issues) kinds.insert(i.kind);
  EXPECT_TRUE(kinds.count("label-mismatch"));

  Manifest missing = Curate(m, s);
  std::erase_if(missing.items, [](const auto& it) { return it.label == 2; });
  const auto r = VerifySubset(m, missing, s);
  EXPECT_FALSE(r.passed);
  kinds.clear();
  for (const auto& i : r.issues) kinds.insert(i.kind);
  EXPECT_TRUE(kinds.count("class-empty"));

  Manifest short_one = Curate(m, s);
  short_one.items.erase(short_one.items.begin());
  kinds.clear();
  for (const auto& i : VerifySubset(m, short_one, s).issues) kinds.insert(i.kind);
  EXPECT_TRUE(kinds.count("count-mismatch"));
}

}  // namespace
}  // namespace lsr
