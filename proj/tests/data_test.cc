// Copyright 2026 The plkb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "plkb/dataset.h"
#include "plkb/synthetic.h"
#include "test_util.h"

namespace plkb {
namespace {

Dataset Labelled(int n_pos, int n_neg) {
  std::vector<Instance> instances;
  for (int i = 0; i < n_pos + n_neg; ++i) {
    instances.push_back({{std::to_string(i)}, i < n_pos});
  }
  return Dataset::Create({"id"}, std::move(instances)).value();
}

TEST(CsvTest, MinimalFile) {
  ASSERT_OK_AND_ASSIGN(Dataset ds, ParseCsv("a1,lbl\n0,yes\n1,no\n", "lbl", "yes"));
  EXPECT_EQ(ds.features(), std::vector<std::string>{"a1"});
  EXPECT_EQ(ds.domains().at("a1"), (std::set<std::string>{"0", "1"}));
  EXPECT_EQ(ds.Labels(), (std::vector<bool>{true, false}));
}

TEST(CsvTest, ToyStrings) {
  const std::string csv =
      "a1,a2,a3,a4,label\n"
      "0,0,0,0,pos\n1,1,1,1,pos\n1,0,1,0,pos\n1,1,0,0,pos\n"
      "0,0,1,0,neg\n0,1,0,0,neg\n1,1,1,0,neg\n1,0,0,0,neg\n";
  ASSERT_OK_AND_ASSIGN(Dataset ds, ParseCsv(csv, "label", "pos"));
  EXPECT_EQ(ds.size(), 8u);
  EXPECT_EQ(ds.CountPositive(), 4u);
  EXPECT_EQ(ds, testing::ToyDataset());
}

TEST(CsvTest, RaggedRowIsAnError) {
  EXPECT_FALSE(ParseCsv("a1,lbl\n0,yes,extra\n", "lbl", "yes").ok());
}

TEST(CsvTest, MissingLabelColumnIsAnError) {
  EXPECT_FALSE(ParseCsv("a1,lbl\n0,yes\n", "label", "yes").ok());
}

TEST(CsvTest, QuotedCells) {
  ASSERT_OK_AND_ASSIGN(Dataset ds, ParseCsv("\"a1\",lbl\n\"x\",yes\n", "lbl", "yes"));
  EXPECT_EQ(ds.instances()[0].values[0], "x");
  // Values become atom symbols, which cannot hold separators.
  EXPECT_FALSE(ParseCsv("a1,lbl\n\"x,y\",yes\n", "lbl", "yes").ok());
}

TEST(CsvTest, RoundTrip) {
  const Dataset toy = testing::ToyDataset();
  ASSERT_OK_AND_ASSIGN(Dataset back, ParseCsv(ToCsv(toy, "label", "pos", "neg"),
                                               "label", "pos"));
  EXPECT_EQ(back, toy);
}

TEST(BalanceTest, AlreadyBalancedIsUnchanged) {
  const Dataset ds = Labelled(3, 3);
  ASSERT_OK_AND_ASSIGN(Dataset out, Balance(ds, 7));
  EXPECT_EQ(out, ds);
}

TEST(BalanceTest, ReplicatesMinority) {
  const Dataset ds = Labelled(5, 2);
  ASSERT_OK_AND_ASSIGN(Dataset out, Balance(ds, 7));
  ASSERT_EQ(out.size(), 10u);
  EXPECT_EQ(out.CountPositive(), 5u);
  for (size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(out.instances()[i], ds.instances()[i]);
  for (size_t i = ds.size(); i < out.size(); ++i) {
    const Instance& added = out.instances()[i];
    EXPECT_FALSE(added.label);
    EXPECT_TRUE(added.values[0] == "5" || added.values[0] == "6");
  }
  ASSERT_OK_AND_ASSIGN(Dataset again, Balance(ds, 7));
  EXPECT_EQ(again, out);
}

TEST(BalanceTest, SingleClassIsAnError) {
  EXPECT_FALSE(Balance(Labelled(3, 0), 1).ok());
}

TEST(SplitTest, SeventyThirty) {
  ASSERT_OK_AND_ASSIGN(auto parts, Split(Labelled(5, 5), 0.7, 3));
  EXPECT_EQ(parts.first.size(), 7u);
  EXPECT_EQ(parts.second.size(), 3u);
  std::set<std::string> ids;
  for (const auto* part : {&parts.first, &parts.second}) {
    for (const Instance& inst : part->instances()) ids.insert(inst.values[0]);
  }
  EXPECT_EQ(ids.size(), 10u);
  ASSERT_OK_AND_ASSIGN(auto again, Split(Labelled(5, 5), 0.7, 3));
  EXPECT_EQ(again.first, parts.first);
  EXPECT_EQ(again.second, parts.second);
}

TEST(SplitTest, HalfOfTwo) {
  ASSERT_OK_AND_ASSIGN(auto parts, Split(Labelled(1, 1), 0.5, 1));
  EXPECT_EQ(parts.first.size(), 1u);
  EXPECT_EQ(parts.second.size(), 1u);
}

TEST(SplitTest, RejectsBadFraction) {
  EXPECT_FALSE(Split(Labelled(1, 1), 0.0, 1).ok());
  EXPECT_FALSE(Split(Labelled(1, 1), 1.5, 1).ok());
}

const SeedSpec kSpec{"3232411132", 10, 4, 5};

TEST(SyntheticTest, LabelsByMatchCount) {
  EXPECT_TRUE(LabelSynthetic("3133421242", kSpec).value());
  // Six agreeing positions.
  EXPECT_FALSE(LabelSynthetic("3133421232", kSpec).value());
  const SeedSpec full{"3232411132", 10, 4, 10};
  EXPECT_TRUE(LabelSynthetic("3232411132", full).value());
}

TEST(SyntheticTest, RejectsBadStrings) {
  EXPECT_FALSE(LabelSynthetic("313342124", kSpec).ok());
  EXPECT_FALSE(LabelSynthetic("313342124x", kSpec).ok());
  EXPECT_FALSE((SeedSpec{"3232411132", 10, 4, 11}).Validate().ok());
  EXPECT_FALSE((SeedSpec{"3232411152", 10, 4, 5}).Validate().ok());
}

TEST(SyntheticTest, FeatureNames) {
  EXPECT_EQ(SyntheticFeatureName(0), "a1");
  EXPECT_EQ(SyntheticPosition("a10").value(), 9);
  EXPECT_FALSE(SyntheticPosition("b1").ok());
}

TEST(SyntheticTest, GeneratesBalancedConsistentData) {
  ASSERT_OK_AND_ASSIGN(Dataset ds, GenerateSynthetic(kSpec, 2000, 11));
  EXPECT_EQ(ds.size(), 2000u);
  EXPECT_EQ(ds.CountPositive(), 1000u);
  for (size_t i = 0; i < ds.size(); ++i) {
    ASSERT_EQ(LabelSynthetic(SyntheticString(ds, i), kSpec).value(),
              ds.instances()[i].label);
  }
  ASSERT_OK_AND_ASSIGN(Dataset again, GenerateSynthetic(kSpec, 2000, 11));
  EXPECT_EQ(again, ds);
}

TEST(SyntheticTest, TwoSamples) {
  ASSERT_OK_AND_ASSIGN(Dataset ds, GenerateSynthetic(kSpec, 2, 5));
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.CountPositive(), 1u);
}

TEST(SyntheticTest, RandomSeedIsValid) {
  ASSERT_OK_AND_ASSIGN(SeedSpec spec, SeedSpec::Random(12, 8, 6, 3));
  EXPECT_TRUE(spec.Validate().ok());
  EXPECT_EQ(spec.seed.size(), 12u);
}

TEST(SyntheticTest, ExportRoundTrip) {
  ASSERT_OK_AND_ASSIGN(Dataset ds, GenerateSynthetic(kSpec, 20, 2));
  const std::string dir =
      (std::filesystem::temp_directory_path() / "plkb_data_test_export").string();
  ASSERT_OK(WriteSyntheticExport(dir, ds, kSpec));
  ASSERT_OK_AND_ASSIGN(SyntheticExport back, ReadSyntheticExport(dir));
  EXPECT_EQ(back.data, ds);
  EXPECT_EQ(back.spec.seed, kSpec.seed);
  EXPECT_EQ(back.spec.match_count, kSpec.match_count);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace plkb
