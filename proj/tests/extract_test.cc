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

#include <algorithm>
#include <sstream>

#include "foodframe/conllu.h"
#include "foodframe/error.h"
#include "foodframe/extract.h"
#include "foodframe/text.h"
#include "json.hpp"
#include "test_util.h"

namespace foodframe {
namespace {

AnchorLexicon ShippedAnchors() {
  return AnchorLexicon::Load(testing::DataPath("anchors_food.txt").string(),
                             testing::DataPath("anchors_staff.txt").string(),
                             testing::DataPath("anchors_venue.txt").string());
}

ExtractorConfig ShippedConfig() {
  ExtractorConfig c;
  c.dish_names = ExtractorConfig::LoadDishNames(testing::DataPath("dish_names.txt").string());
  return c;
}

std::string Key(const FramingFeature& f) {
  return f.review_id + "," + f.adjective_lemma + "," + std::string(AnchorCategoryName(f.anchor_category)) +
         "," + std::to_string(f.sentence) + "," + std::string(ExtractionPathName(f.path)) + "," +
         std::to_string(f.token) + "," + std::to_string(f.anchor_token);
}

TEST(GoldenExtractionTest, ZeroMismatches) {
  const auto corpus = ReadConllu(testing::FixturePath("golden/golden.conllu").string(),
                                 testing::FixturePath("golden/golden_coref.jsonl").string());
  const auto manifest = nlohmann::json::parse(
      ReadFile(testing::FixturePath("golden/golden_manifest.json").string()));
  ASSERT_EQ(corpus.reviews.size(), manifest["reviews"].get<std::size_t>());
  ASSERT_TRUE(corpus.diagnostics.empty());

  const auto anchors = ShippedAnchors();
  const auto config = ShippedConfig();
  std::vector<std::string> got;
  for (const auto& r : corpus.reviews) {
    EXPECT_EQ(r.TokenCount(), manifest["token_counts"][r.review_id].get<std::size_t>())
        << r.review_id;
    for (const auto& f : ExtractFeatures(r, anchors, config)) got.push_back(Key(f));
  }
  std::vector<std::string> want;
  for (const auto& f : ReadFeaturesCsv(testing::FixturePath("golden/golden_features.csv").string())) {
    want.push_back(Key(f));
  }
  ASSERT_EQ(want.size(), manifest["features"].get<std::size_t>());
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  std::vector<std::string> missing, extra;
  std::set_difference(want.begin(), want.end(), got.begin(), got.end(), std::back_inserter(missing));
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(extra));
  for (const auto& m : missing) ADD_FAILURE() << "missing " << m;
  for (const auto& e : extra) ADD_FAILURE() << "extra " << e;
  EXPECT_EQ(missing.size() + extra.size(), 0u);
}

// Minimal UD builder: tokens given as (form, lemma, upos, head, deprel).
struct Tok {
  const char* form;
  const char* lemma;
  const char* upos;
  int head;
  const char* deprel;
};

ParsedReview One(const std::vector<Tok>& toks) {
  ParsedReview r;
  r.review_id = "t";
  Sentence s;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    s.push_back({static_cast<int>(i + 1), toks[i].form, toks[i].lemma, toks[i].upos, toks[i].head,
                 toks[i].deprel});
  }
  r.sentences.push_back(s);
  return r;
}

TEST(ExtractTest, CleanAndCheapPlace) {
  // The place was clean and cheap
  const auto r = One({{"The", "the", "DET", 2, "det"},
                      {"place", "place", "NOUN", 4, "nsubj"},
                      {"was", "be", "AUX", 4, "cop"},
                      {"clean", "clean", "ADJ", 0, "root"},
                      {"and", "and", "CCONJ", 6, "cc"},
                      {"cheap", "cheap", "ADJ", 4, "conj"}});
  const auto f = ExtractFeatures(r, ShippedAnchors(), ShippedConfig());
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].adjective_lemma, "clean");
  EXPECT_EQ(f[0].anchor_category, AnchorCategory::kVenue);
  EXPECT_EQ(f[0].path, ExtractionPath::kPredicative);
  EXPECT_EQ(f[1].adjective_lemma, "cheap");
  EXPECT_EQ(f[1].anchor_category, AnchorCategory::kVenue);
  EXPECT_EQ(f[1].path, ExtractionPath::kConjoined);
}

TEST(ExtractTest, NegatedPredicateDropped) {
  // The place wasn't very clean
  const auto r = One({{"The", "the", "DET", 2, "det"},
                      {"place", "place", "NOUN", 6, "nsubj"},
                      {"was", "be", "AUX", 6, "cop"},
                      {"n't", "not", "PART", 6, "advmod"},
                      {"very", "very", "ADV", 6, "advmod"},
                      {"clean", "clean", "ADJ", 0, "root"}});
  EXPECT_TRUE(InNegationScope(r.sentences[0], 6, ShippedConfig()));
  EXPECT_TRUE(ExtractFeatures(r, ShippedAnchors(), ShippedConfig()).empty());
}

TEST(ExtractTest, AttributiveAndDishGuard) {
  // great stinky tofu
  const auto r = One({{"great", "great", "ADJ", 3, "amod"},
                      {"stinky", "stinky", "ADJ", 3, "amod"},
                      {"tofu", "tofu", "NOUN", 0, "root"}});
  const auto f = ExtractFeatures(r, ShippedAnchors(), ShippedConfig());
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].adjective_lemma, "great");
  EXPECT_EQ(f[0].path, ExtractionPath::kAttributive);
}

TEST(ExtractTest, ClearNlpAcomp) {
  // The waiter was rude (copula heads nsubj and acomp)
  const auto r = One({{"The", "the", "DET", 2, "det"},
                      {"waiter", "waiter", "NOUN", 3, "nsubj"},
                      {"was", "be", "VERB", 0, "ROOT"},
                      {"rude", "rude", "ADJ", 3, "acomp"}});
  const auto f = ExtractFeatures(r, ShippedAnchors(), ShippedConfig());
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].anchor_category, AnchorCategory::kStaff);
  EXPECT_EQ(f[0].path, ExtractionPath::kPredicative);
}

TEST(ExtractTest, NonAnchorIgnored) {
  const auto r = One({{"big", "big", "ADJ", 2, "amod"}, {"parking", "parking", "NOUN", 0, "root"}});
  EXPECT_TRUE(ExtractFeatures(r, ShippedAnchors(), ShippedConfig()).empty());
}

TEST(AnchorLexiconTest, OverlapRejected) {
  EXPECT_THROW(AnchorLexicon({{AnchorCategory::kFood, {"x"}},
                              {AnchorCategory::kStaff, {"x"}},
                              {AnchorCategory::kVenue, {"y"}}}),
               ConfigError);
  EXPECT_THROW(AnchorLexicon({{AnchorCategory::kFood, {"x"}},
                              {AnchorCategory::kStaff, {}},
                              {AnchorCategory::kVenue, {"y"}}}),
               ConfigError);
}

TEST(FeaturesCsvTest, RoundTrip) {
  const std::vector<FramingFeature> fs = {
      {"r1", "clean", AnchorCategory::kVenue, 0, ExtractionPath::kPredicative, 4, 2},
      {"r1", "rude", AnchorCategory::kStaff, 1, ExtractionPath::kCoref, 3, 1}};
  testing::TempDir dir;
  {
    std::ofstream out(dir / "f.csv");
    WriteFeaturesCsvHeader(out);
    WriteFeaturesCsv(out, fs);
  }
  EXPECT_EQ(ReadFeaturesCsv((dir / "f.csv").string()), fs);
}

}  // namespace
}  // namespace foodframe
