// Copyright 2026 The foodframe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "foodframe/error.h"
#include "foodframe/lexicon.h"
#include "foodframe/text.h"
#include "json.hpp"
#include "test_util.h"

namespace foodframe {
namespace {

// Independent normalization: lowercase, drop hyphens and spaces.
std::string Canon(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// "(un)hygienic" stands for both "hygienic" and "unhygienic".
std::set<std::string> ExpandCanonical(const std::vector<std::string>& words) {
  static const std::regex optional_prefix(R"(^\((\w+)\)(\w+)$)");
  std::set<std::string> out;
  for (const auto& w : words) {
    std::smatch m;
    if (std::regex_match(w, m, optional_prefix)) {
      out.insert(Canon(m[2].str()));
      out.insert(Canon(m[1].str() + m[2].str()));
    } else {
      out.insert(Canon(w));
    }
  }
  return out;
}

LexiconSet Shipped() { return LexiconSet::Load(testing::DataPath("lexicons.txt").string()); }

TEST(LexiconFidelityTest, ShippedListsEqualCanonical) {
  const auto canonical = nlohmann::json::parse(
      ReadFile(testing::FixturePath("lexicons/canonical.json").string()))["frames"];
  const auto set = Shipped();
  ASSERT_EQ(set.lexicons().size(), canonical.size());
  for (const auto& [name, words] : canonical.items()) {
    const auto frame = ParseFrame(name);
    ASSERT_TRUE(frame) << name;
    const auto* lex = set.Find(*frame);
    ASSERT_NE(lex, nullptr) << name;
    std::set<std::string> loaded;
    for (const auto& [key, entry] : lex->entries()) loaded.insert(Canon(entry.display));
    EXPECT_EQ(loaded, ExpandCanonical(words.get<std::vector<std::string>>())) << name;
  }
  EXPECT_TRUE(set.SharedEntries().empty());
}

TEST(LexiconFidelityTest, ConstructsAndSubsets) {
  const auto set = Shipped();
  EXPECT_EQ(set.Find(Frame::kExoticism)->construct(), Construct::kOthering);
  EXPECT_EQ(set.Find(Frame::kLuxury)->construct(), Construct::kStatusHigh);
  EXPECT_EQ(set.Find(Frame::kHygiene)->construct(), Construct::kStatusLow);
  const auto* hygiene = set.Find(Frame::kHygiene);
  EXPECT_EQ(hygiene->Find("spotless")->subset, FrameSubset::kClean);
  EXPECT_EQ(hygiene->Find("unsanitary")->subset, FrameSubset::kDirty);
  const auto* cost = set.Find(Frame::kCost);
  EXPECT_EQ(cost->Find("low-priced")->subset, FrameSubset::kCheap);
  EXPECT_EQ(cost->Find("pricey")->subset, FrameSubset::kExpensive);
  for (const auto* lex : {hygiene, cost}) {
    for (const auto& [key, e] : lex->entries()) EXPECT_TRUE(e.subset) << key;
  }
}

TEST(LexiconTest, NormalizationCollapsesSpellings) {
  EXPECT_EQ(NormalizeEntry("Hand-Made"), "handmade");
  EXPECT_EQ(NormalizeEntry("low priced"), "lowpriced");
  FrameLexicon lex(Frame::kAuthenticity, Construct::kOthering);
  lex.Add("hand-made");
  lex.Add("handmade");
  EXPECT_EQ(lex.entries().size(), 1u);
  EXPECT_EQ(lex.Find("hand made")->display, "hand-made");
  FrameLexicon h(Frame::kHygiene, Construct::kStatusLow);
  h.Add("clean", FrameSubset::kClean);
  EXPECT_THROW(h.Add("clean", FrameSubset::kDirty), ConfigError);
}

TEST(LexiconTest, ReadRejectsBadFormat) {
  std::istringstream no_section("clean\n");
  EXPECT_THROW(LexiconSet::Read(no_section), ConfigError);
  std::istringstream bad_frame("[tastiness othering]\nyum\n");
  EXPECT_THROW(LexiconSet::Read(bad_frame), ConfigError);
  std::istringstream bad_subset("[hygiene status_low]\nclean @shiny\n");
  EXPECT_THROW(LexiconSet::Read(bad_subset), ConfigError);
}

TEST(LexiconTest, SharedEntriesReported) {
  std::istringstream in("[exoticism othering]\nodd\n[prototypicality othering]\nodd\n");
  const auto set = LexiconSet::Read(in);
  const auto shared = set.SharedEntries();
  ASSERT_EQ(shared.size(), 1u);
  EXPECT_EQ(shared.at("odd").size(), 2u);
}

FramingFeature Feat(const std::string& lemma, int token = 1) {
  FramingFeature f;
  f.review_id = "r";
  f.adjective_lemma = lemma;
  f.token = token;
  return f;
}

TEST(ScoreTest, WorkedExample) {
  const auto scored = ScoreReview("r", {Feat("authentic"), Feat("clean"), Feat("clean")}, Shipped());
  EXPECT_EQ(scored.score.count(Frame::kAuthenticity), 1);
  EXPECT_EQ(scored.score.count(Frame::kHygiene), 2);
  EXPECT_EQ(scored.score.subset_count(FrameSubset::kClean), 2);
  EXPECT_EQ(scored.score.subset_count(FrameSubset::kDirty), 0);
  EXPECT_EQ(scored.score.count(Frame::kExoticism), 0);
  EXPECT_EQ(scored.matches.size(), 3u);
}

TEST(ScoreTest, UnlistedWordMatchesNothing) {
  for (const auto& lex : Shipped().lexicons()) EXPECT_FALSE(MatchEntry(Feat("delicious"), nullptr, lex));
}

TEST(ScoreTest, BigramNeedsContext) {
  // the tacos are the real deal: "real" modifies "deal"
  Sentence s = {{1, "the", "the", "DET", 2, "det"},     {2, "tacos", "taco", "NOUN", 6, "nsubj"},
                {3, "are", "be", "AUX", 6, "cop"},      {4, "the", "the", "DET", 6, "det"},
                {5, "real", "real", "ADJ", 6, "amod"},  {6, "deal", "deal", "NOUN", 0, "root"}};
  const auto* auth = Shipped().Find(Frame::kAuthenticity);
  const auto with = MatchFeature(Feat("real", 5), &s, *auth);
  ASSERT_TRUE(with);
  EXPECT_EQ(with->entry, "real deal");
  const auto without = MatchFeature(Feat("real", 5), nullptr, *auth);
  ASSERT_TRUE(without);
  EXPECT_EQ(without->entry, "real");
}

TEST(ScoreCsvTest, RoundTrip) {
  const auto scored = ScoreReview("r9", {Feat("cheap"), Feat("odd")}, Shipped());
  testing::TempDir dir;
  {
    std::ofstream out(dir / "s.csv");
    WriteScoresCsvHeader(out);
    WriteScoreCsv(out, scored.score);
  }
  const auto back = ReadScoresCsv((dir / "s.csv").string());
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].review_id, "r9");
  EXPECT_EQ(back[0].counts, scored.score.counts);
  EXPECT_EQ(back[0].subset_counts, scored.score.subset_counts);
  {
    std::ofstream out(dir / "m.csv");
    WriteMatchesCsvHeader(out);
    WriteMatchesCsv(out, scored.matches);
  }
  const auto matches = ReadMatchesCsv((dir / "m.csv").string());
  ASSERT_EQ(matches.size(), 2u);
  EXPECT_EQ(matches[0].entry, scored.matches[0].entry);
}

}  // namespace
}  // namespace foodframe
