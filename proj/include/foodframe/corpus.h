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

// Corpus ingestion: Yelp open-dataset business and review NDJSON, cuisine to
// region mapping and the restaurant inclusion rules.
//
// A business is retained when it is a restaurant, is not a chain, carries no
// excluded venue tag (cafes, fast food, ...), carries no cuisine tag from the
// ambiguous-cuisine exclusion list, and all of its recognised cuisine tags map
// to one region. Tags outside the cuisine map are ignored for region
// resolution; a business with no recognised cuisine tag is dropped.

#ifndef FOODFRAME_CORPUS_H_
#define FOODFRAME_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace foodframe {

enum class Region { kUS, kEUR, kLAT, kAS };

inline constexpr std::array<Region, 4> kAllRegions = {Region::kUS, Region::kEUR,
                                                      Region::kLAT, Region::kAS};

std::string_view RegionName(Region r);
// Accepts "US", "EUR", "LAT", "AS" (case-insensitive).
std::optional<Region> ParseRegion(std::string_view s);
inline bool IsImmigrant(Region r) { return r != Region::kUS; }

// Lowercases a Yelp category, drops parentheses and collapses whitespace:
// "American (Traditional)" -> "american traditional".
std::string NormalizeCategory(std::string_view raw);

struct CuisineRegionMap {
  std::map<std::string, Region> entries;
  std::set<std::string> excluded_tags;

  std::optional<Region> RegionOf(const std::string& tag) const;
  bool IsExcluded(const std::string& tag) const { return excluded_tags.count(tag) > 0; }

  // JSON: {"regions": {"US": [...], ...}, "excluded": [...]}.
  static CuisineRegionMap FromJson(const nlohmann::json& j);
  static CuisineRegionMap Load(const std::string& path);
  // The shipped top-25 table.
  static CuisineRegionMap Default();
};

struct FilterConfig {
  // A name seen with at least this many distinct business ids is a chain.
  int chain_threshold = 5;
  std::set<std::string> excluded_venue_tags = {"cafes", "fast food", "coffee & tea"};
  bool require_restaurant_tag = true;
  bool include_cajun_creole = true;

  static FilterConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct Business {
  std::string business_id;
  std::string name;
  std::string state;
  std::string zipcode;
  double latitude = 0.0;
  double longitude = 0.0;
  std::vector<std::string> categories;  // all normalized tags
  std::vector<std::string> cuisine_tags;
  Region region = Region::kUS;
  int price_tier = 0;
  double mean_stars = 0.0;
  std::int64_t review_count = 0;
};

enum class DropReason {
  kMalformed,
  kMissingField,
  kInvalidField,
  kNotRestaurant,
  kExcludedVenue,
  kChain,
  kExcludedCuisine,
  kNoCuisine,
  kMultiRegion,
};

std::string_view DropReasonName(DropReason r);

struct DropReport {
  std::size_t input = 0;
  std::size_t retained = 0;
  std::map<DropReason, std::size_t> drops;
  std::vector<std::string> log;

  std::size_t TotalDropped() const;
  void Drop(DropReason reason, std::string message = {});
  nlohmann::json ToJson() const;
};

// Immutable after construction.
class BusinessTable {
 public:
  BusinessTable() = default;
  explicit BusinessTable(std::vector<Business> businesses);

  const std::vector<Business>& businesses() const { return businesses_; }
  std::size_t size() const { return businesses_.size(); }
  const Business* Find(const std::string& business_id) const;
  std::map<Region, std::size_t> RegionCounts() const;

 private:
  std::vector<Business> businesses_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Parses one Yelp business JSON object into a candidate (region unresolved).
// Throws InputError naming the missing or invalid field.
Business ParseBusiness(const nlohmann::json& j);

// Applies the inclusion rules to candidates. Idempotent.
BusinessTable FilterBusinesses(std::vector<Business> candidates, const CuisineRegionMap& map,
                               const FilterConfig& filters, DropReport& report);

BusinessTable LoadBusinesses(std::istream& in, const CuisineRegionMap& map,
                             const FilterConfig& filters, DropReport& report);
BusinessTable LoadBusinesses(const std::string& path, const CuisineRegionMap& map,
                             const FilterConfig& filters, DropReport& report);

struct Review {
  std::string review_id;
  std::string business_id;
  std::string user_id;
  int stars = 0;
  std::string text;
  std::size_t token_count = 0;  // whitespace tokens of text
  bool nonlocal = false;
};

struct ReviewLoadReport {
  std::size_t input = 0;
  std::size_t retained = 0;
  std::size_t malformed = 0;
  std::size_t missing_field = 0;
  std::size_t invalid_field = 0;
  std::size_t orphan = 0;
  std::size_t invalid_utf8 = 0;
  std::vector<std::string> log;

  nlohmann::json ToJson() const;
};

class ReviewTable {
 public:
  ReviewTable() = default;
  explicit ReviewTable(std::vector<Review> reviews);

  const std::vector<Review>& reviews() const { return reviews_; }
  std::size_t size() const { return reviews_.size(); }
  const Review* Find(const std::string& review_id) const;

 private:
  std::vector<Review> reviews_;
  std::unordered_map<std::string, std::size_t> index_;
};

ReviewTable LoadReviews(std::istream& in, const BusinessTable& businesses,
                        ReviewLoadReport& report);
ReviewTable LoadReviews(const std::string& path, const BusinessTable& businesses,
                        ReviewLoadReport& report);

// Case-insensitive search of raw review text for self-declared non-locals
// ("I'm from out of state"). Patterns are compiled up front, so an invalid
// regex fails before any review is processed.
class NonlocalFilter {
 public:
  explicit NonlocalFilter(const std::vector<std::string>& patterns);
  bool Matches(const std::string& text) const;
  bool empty() const { return patterns_.empty(); }

 private:
  std::vector<std::regex> patterns_;
};

struct NonlocalResult {
  ReviewTable kept;
  std::size_t removed = 0;
};

NonlocalResult ExcludeNonlocal(const ReviewTable& reviews,
                               const std::vector<std::string>& patterns);

// Same matching, but keeps every review and sets Review::nonlocal instead.
ReviewTable MarkNonlocal(const ReviewTable& reviews, const std::vector<std::string>& patterns);

// Seeded subsample of n reviews, original order preserved. n >= size is identity.
ReviewTable SampleReviews(const ReviewTable& reviews, std::size_t n, std::uint64_t seed);

void WriteBusinessesCsv(std::ostream& out, const BusinessTable& table);
void WriteReviewsCsv(std::ostream& out, const ReviewTable& table);

}  // namespace foodframe

#endif  // FOODFRAME_CORPUS_H_
