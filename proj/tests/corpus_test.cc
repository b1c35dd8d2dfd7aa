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

#include <sstream>

#include "foodframe/corpus.h"
#include "foodframe/error.h"
#include "foodframe/text.h"
#include "test_util.h"

namespace foodframe {
namespace {

using nlohmann::json;

std::string BusinessLine(const std::string& id, const std::string& name, const std::string& cats,
                         int price = 2, double stars = 4.0, const std::string& zip = "15213") {
  json j = {{"business_id", id},   {"name", name},         {"state", "PA"},
            {"postal_code", zip},  {"latitude", 40.4},     {"longitude", -79.9},
            {"stars", stars},      {"review_count", 12},   {"categories", cats},
            {"attributes", {{"RestaurantsPriceRange2", std::to_string(price)}}}};
  return j.dump() + "\n";
}

BusinessTable Load(const std::string& ndjson, DropReport& report,
                   const FilterConfig& filters = {}) {
  std::istringstream in(ndjson);
  return LoadBusinesses(in, CuisineRegionMap::Default(), filters, report);
}

TEST(CuisineMapTest, ShippedFileMatchesDefault) {
  const auto shipped = CuisineRegionMap::Load(testing::DataPath("cuisine_regions.json").string());
  const auto def = CuisineRegionMap::Default();
  EXPECT_EQ(shipped.entries, def.entries);
  EXPECT_EQ(shipped.excluded_tags, def.excluded_tags);
  EXPECT_EQ(def.entries.size() + def.excluded_tags.size(), 25u);
  for (const char* tag : {"asian fusion", "ethnic food", "caribbean", "middle eastern", "tex-mex"}) {
    EXPECT_TRUE(def.IsExcluded(tag)) << tag;
  }
}

TEST(CuisineMapTest, RejectsDuplicateAndOverlap) {
  EXPECT_THROW(CuisineRegionMap::FromJson(json::parse(R"({"regions": {"US": ["a"], "AS": ["a"]}})")),
               ConfigError);
  EXPECT_THROW(CuisineRegionMap::FromJson(
                   json::parse(R"({"regions": {"US": ["a"]}, "excluded": ["a"]})")),
               ConfigError);
  EXPECT_THROW(CuisineRegionMap::FromJson(json::parse(R"({"regions": {"XX": ["a"]}})")),
               ConfigError);
}

TEST(LoadBusinessesTest, MexicanMapsToLat) {
  DropReport report;
  const auto t = Load(BusinessLine("b1", "La Palma", "Mexican, Restaurants"), report);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.businesses()[0].region, Region::kLAT);
  EXPECT_EQ(t.businesses()[0].cuisine_tags, std::vector<std::string>{"mexican"});
}

TEST(LoadBusinessesTest, MultiRegionDropped) {
  DropReport report;
  const auto t = Load(BusinessLine("b1", "Iberia", "Mexican, Spanish, Restaurants"), report);
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(report.drops[DropReason::kMultiRegion], 1u);
}

TEST(LoadBusinessesTest, NoCuisineDropped) {
  DropReport report;
  const auto t = Load(BusinessLine("b1", "Plain", "Restaurants, Bars"), report);
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(report.drops[DropReason::kNoCuisine], 1u);
}

TEST(LoadBusinessesTest, UnknownTagsIgnoredForRegion) {
  DropReport report;
  const auto t = Load(BusinessLine("b1", "Bar Thai", "Thai, Restaurants, Bars, Cocktail Bars"),
                      report);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.businesses()[0].region, Region::kAS);
}

TEST(LoadBusinessesTest, FilterReasonsAndAccounting) {
  std::string nd;
  nd += BusinessLine("b1", "Corner Cafe", "Cafes, Restaurants, Italian");
  nd += BusinessLine("b2", "Fusion Box", "Asian Fusion, Chinese, Restaurants");
  nd += BusinessLine("b3", "Nail Spa", "Beauty & Spas, Italian");
  for (int i = 0; i < 5; ++i) nd += BusinessLine("k" + std::to_string(i), "Burger Barn", "Restaurants, Southern");
  nd += "{broken\n";
  nd += R"({"business_id": "m1", "name": "No Stars"})" "\n";
  nd += BusinessLine("b4", "Zip Plus", "Italian, Restaurants", 2, 4.0, "15213-1234");
  nd += BusinessLine("b5", "Bad Zip", "Italian, Restaurants", 2, 4.0, "1521");
  nd += BusinessLine("b6", "Bad Stars", "Italian, Restaurants", 2, 5.5);
  nd += BusinessLine("b4", "Zip Plus Again", "Italian, Restaurants");
  DropReport report;
  const auto t = Load(nd, report);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.businesses()[0].zipcode, "15213");
  EXPECT_EQ(report.drops[DropReason::kExcludedVenue], 1u);
  EXPECT_EQ(report.drops[DropReason::kExcludedCuisine], 1u);
  EXPECT_EQ(report.drops[DropReason::kNotRestaurant], 1u);
  EXPECT_EQ(report.drops[DropReason::kChain], 5u);
  EXPECT_EQ(report.drops[DropReason::kMalformed], 1u);
  EXPECT_EQ(report.drops[DropReason::kMissingField], 1u);
  EXPECT_EQ(report.drops[DropReason::kInvalidField], 3u);
  EXPECT_EQ(report.input, report.retained + report.TotalDropped());
  EXPECT_NE(report.log.front().find("line"), std::string::npos);
}

TEST(LoadBusinessesTest, ChainThresholdConfigurable) {
  std::string nd;
  for (int i = 0; i < 3; ++i) nd += BusinessLine("k" + std::to_string(i), "Taco Spot", "Mexican, Restaurants");
  FilterConfig f;
  DropReport r1;
  EXPECT_EQ(Load(nd, r1, f).size(), 3u);
  f.chain_threshold = 3;
  DropReport r2;
  EXPECT_EQ(Load(nd, r2, f).size(), 0u);
  EXPECT_THROW(FilterConfig::FromJson(json{{"chain_threshold", 1}}), ConfigError);
}

TEST(LoadBusinessesTest, CajunSwitch) {
  const std::string nd = BusinessLine("b1", "Bayou", "Cajun/Creole, Restaurants");
  FilterConfig f;
  DropReport r1;
  EXPECT_EQ(Load(nd, r1, f).size(), 1u);
  f.include_cajun_creole = false;
  DropReport r2;
  EXPECT_EQ(Load(nd, r2, f).size(), 0u);
}

TEST(LoadBusinessesTest, FilteringIsIdempotent) {
  std::string nd;
  nd += BusinessLine("b1", "A", "Italian, Restaurants");
  nd += BusinessLine("b2", "B", "Thai, Restaurants", 3);
  nd += BusinessLine("b3", "C", "Mexican, Spanish, Restaurants");
  DropReport r1;
  const auto once = Load(nd, r1);
  DropReport r2;
  const auto twice = FilterBusinesses(once.businesses(), CuisineRegionMap::Default(), {}, r2);
  ASSERT_EQ(twice.size(), once.size());
  EXPECT_EQ(r2.TotalDropped(), 0u);
  std::size_t sum = 0;
  for (const auto& [region, n] : once.RegionCounts()) sum += n;
  EXPECT_EQ(sum, once.size());
}

BusinessTable TwoBusinesses() {
  DropReport report;
  return Load(BusinessLine("b1", "A", "Italian, Restaurants") +
                  BusinessLine("b2", "B", "Thai, Restaurants"),
              report);
}

TEST(LoadReviewsTest, RetainsOnlyReviewsOfRetainedBusinesses) {
  const auto businesses = TwoBusinesses();
  std::string nd;
  nd += json{{"review_id", "r1"}, {"business_id", "b1"}, {"user_id", "u"}, {"stars", 5},
             {"text", "Great  food here ."}}.dump() + "\n";
  nd += json{{"review_id", "r2"}, {"business_id", "zz"}, {"user_id", "u"}, {"stars", 5},
             {"text", "Orphan"}}.dump() + "\n";
  nd += std::string(R"({"review_id": "r3", "business_id": "b1", "user_id": "u", "stars": 4, "text": "bad )") +
        "\xff" + "\"}\n";
  nd += R"({"review_id": "r4", "business_id": "b1", "user_id": "u", "text": "no stars"})" "\n";
  nd += R"({"review_id": "r5", "business_id": "b2", "user_id": "u", "stars": 2.5, "text": "x"})" "\n";
  nd += "not json\n";
  std::istringstream in(nd);
  ReviewLoadReport report;
  const auto t = LoadReviews(in, businesses, report);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.reviews()[0].token_count, 4u);
  EXPECT_EQ(report.orphan, 1u);
  EXPECT_EQ(report.invalid_utf8, 1u);
  EXPECT_EQ(report.missing_field, 1u);
  EXPECT_EQ(report.invalid_field, 1u);
  EXPECT_EQ(report.malformed, 1u);
  EXPECT_EQ(report.input, 6u);
}

ReviewTable Texts(const std::vector<std::string>& texts) {
  std::vector<Review> v;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Review r;
    r.review_id = "r" + std::to_string(i);
    r.business_id = "b1";
    r.text = texts[i];
    v.push_back(r);
  }
  return ReviewTable(std::move(v));
}

TEST(NonlocalTest, ShippedPatterns) {
  const auto patterns = ReadListFile(testing::DataPath("nonlocal_patterns.txt").string());
  const auto res = ExcludeNonlocal(Texts({"I'm from out of state but loved it", "Great local spot"}),
                                   patterns);
  ASSERT_EQ(res.kept.size(), 1u);
  EXPECT_EQ(res.kept.reviews()[0].text, "Great local spot");
  EXPECT_EQ(res.removed, 1u);
}

TEST(NonlocalTest, EmptyPatternsIsIdentity) {
  const auto in = Texts({"a", "b"});
  const auto res = ExcludeNonlocal(in, {});
  EXPECT_EQ(res.kept.size(), 2u);
  EXPECT_EQ(res.removed, 0u);
}

TEST(NonlocalTest, InvalidRegexFailsUpFront) {
  EXPECT_THROW(ExcludeNonlocal(Texts({"a"}), {"(bad"}), ConfigError);
}

TEST(NonlocalTest, MarkKeepsEverything) {
  const auto marked = MarkNonlocal(Texts({"visiting from Ohio", "local"}), {"visiting from"});
  ASSERT_EQ(marked.size(), 2u);
  EXPECT_TRUE(marked.reviews()[0].nonlocal);
  EXPECT_FALSE(marked.reviews()[1].nonlocal);
}

TEST(SampleTest, SeededAndOrderPreserving) {
  std::vector<std::string> texts;
  for (int i = 0; i < 100; ++i) texts.push_back(std::to_string(i));
  const auto all = Texts(texts);
  const auto a = SampleReviews(all, 10, 42);
  const auto b = SampleReviews(all, 10, 42);
  const auto c = SampleReviews(all, 10, 43);
  ASSERT_EQ(a.size(), 10u);
  std::vector<std::string> ia, ib, ic;
  for (const auto& r : a.reviews()) ia.push_back(r.review_id);
  for (const auto& r : b.reviews()) ib.push_back(r.review_id);
  for (const auto& r : c.reviews()) ic.push_back(r.review_id);
  EXPECT_EQ(ia, ib);
  EXPECT_NE(ia, ic);
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_LT(std::stoi(a.reviews()[i - 1].text), std::stoi(a.reviews()[i].text));
  }
  EXPECT_EQ(SampleReviews(all, 1000, 1).size(), 100u);
}

}  // namespace
}  // namespace foodframe
