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

#include "foodframe/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>

#include "foodframe/csv.h"
#include "foodframe/error.h"
#include "foodframe/random.h"
#include "foodframe/text.h"

namespace foodframe {

using nlohmann::json;

std::string_view RegionName(Region r) {
  switch (r) {
    case Region::kUS:
      return "US";
    case Region::kEUR:
      return "EUR";
    case Region::kLAT:
      return "LAT";
    case Region::kAS:
      return "AS";
  }
  return "?";
}

std::optional<Region> ParseRegion(std::string_view s) {
  const std::string lower = ToLower(Trim(s));
  if (lower == "us") return Region::kUS;
  if (lower == "eur") return Region::kEUR;
  if (lower == "lat") return Region::kLAT;
  if (lower == "as") return Region::kAS;
  return std::nullopt;
}

std::string NormalizeCategory(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) {
    if (c == '(' || c == ')') continue;
    s.push_back(c);
  }
  return CollapseWhitespace(ToLower(s));
}

// ---------------------------------------------------------------------------
// CuisineRegionMap

std::optional<Region> CuisineRegionMap::RegionOf(const std::string& tag) const {
  auto it = entries.find(tag);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

CuisineRegionMap CuisineRegionMap::FromJson(const json& j) {
  CuisineRegionMap map;
  if (!j.contains("regions") || !j["regions"].is_object()) {
    throw ConfigError("cuisine map: missing 'regions' object");
  }
  for (const auto& [name, tags] : j["regions"].items()) {
    const auto region = ParseRegion(name);
    if (!region) throw ConfigError("cuisine map: unknown region '" + name + "'");
    for (const auto& t : tags) {
      const std::string tag = NormalizeCategory(t.get<std::string>());
      if (!map.entries.emplace(tag, *region).second) {
        throw ConfigError("cuisine map: tag '" + tag + "' listed twice");
      }
    }
  }
  if (j.contains("excluded")) {
    for (const auto& t : j["excluded"]) {
      map.excluded_tags.insert(NormalizeCategory(t.get<std::string>()));
    }
  }
  for (const auto& tag : map.excluded_tags) {
    if (map.entries.count(tag)) {
      throw ConfigError("cuisine map: tag '" + tag + "' is both mapped and excluded");
    }
  }
  return map;
}

CuisineRegionMap CuisineRegionMap::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cuisine map: " + path);
  try {
    return FromJson(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("cuisine map " + path + ": " + e.what());
  }
}

CuisineRegionMap CuisineRegionMap::Default() {
  static const json kDefault = {
      {"regions",
       {{"US", {"american traditional", "american new", "cajun/creole", "southern", "soul food"}},
        {"LAT", {"mexican", "latin american", "cuban"}},
        {"EUR", {"italian", "mediterranean", "greek", "french", "irish", "spanish"}},
        {"AS", {"chinese", "japanese", "thai", "vietnamese", "indian", "korean"}}}},
      {"excluded", {"asian fusion", "ethnic food", "caribbean", "middle eastern", "tex-mex"}}};
  return FromJson(kDefault);
}

// ---------------------------------------------------------------------------
// FilterConfig

FilterConfig FilterConfig::FromJson(const json& j) {
  FilterConfig f;
  if (j.contains("chain_threshold")) f.chain_threshold = j["chain_threshold"].get<int>();
  if (j.contains("excluded_venue_tags")) {
    f.excluded_venue_tags.clear();
    for (const auto& t : j["excluded_venue_tags"]) {
      f.excluded_venue_tags.insert(NormalizeCategory(t.get<std::string>()));
    }
  }
  if (j.contains("require_restaurant_tag")) {
    f.require_restaurant_tag = j["require_restaurant_tag"].get<bool>();
  }
  if (j.contains("include_cajun_creole")) {
    f.include_cajun_creole = j["include_cajun_creole"].get<bool>();
  }
  if (f.chain_threshold < 2) throw ConfigError("chain_threshold must be >= 2");
  return f;
}

json FilterConfig::ToJson() const {
  return {{"chain_threshold", chain_threshold},
          {"excluded_venue_tags", excluded_venue_tags},
          {"require_restaurant_tag", require_restaurant_tag},
          {"include_cajun_creole", include_cajun_creole}};
}

// ---------------------------------------------------------------------------
// DropReport

std::string_view DropReasonName(DropReason r) {
  switch (r) {
    case DropReason::kMalformed:
      return "malformed";
    case DropReason::kMissingField:
      return "missing_field";
    case DropReason::kInvalidField:
      return "invalid_field";
    case DropReason::kNotRestaurant:
      return "not_restaurant";
    case DropReason::kExcludedVenue:
      return "excluded_venue";
    case DropReason::kChain:
      return "chain";
    case DropReason::kExcludedCuisine:
      return "excluded_cuisine";
    case DropReason::kNoCuisine:
      return "no_cuisine";
    case DropReason::kMultiRegion:
      return "multi_region";
  }
  return "?";
}

std::size_t DropReport::TotalDropped() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : drops) n += count;
  return n;
}

void DropReport::Drop(DropReason reason, std::string message) {
  ++drops[reason];
  if (!message.empty()) log.push_back(std::move(message));
}

json DropReport::ToJson() const {
  json d = json::object();
  for (const auto& [reason, count] : drops) d[std::string(DropReasonName(reason))] = count;
  return {{"input", input}, {"retained", retained}, {"dropped", d}, {"log", log}};
}

// ---------------------------------------------------------------------------
// BusinessTable

BusinessTable::BusinessTable(std::vector<Business> businesses)
    : businesses_(std::move(businesses)) {
  for (std::size_t i = 0; i < businesses_.size(); ++i) {
    index_.emplace(businesses_[i].business_id, i);
  }
}

const Business* BusinessTable::Find(const std::string& business_id) const {
  auto it = index_.find(business_id);
  return it == index_.end() ? nullptr : &businesses_[it->second];
}

std::map<Region, std::size_t> BusinessTable::RegionCounts() const {
  std::map<Region, std::size_t> counts;
  for (Region r : kAllRegions) counts[r] = 0;
  for (const auto& b : businesses_) ++counts[b.region];
  return counts;
}

namespace {

template <typename T>
T Require(const json& j, const char* field) {
  if (!j.contains(field) || j[field].is_null()) {
    throw InputError(std::string("missing field '") + field + "'");
  }
  try {
    return j[field].get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("invalid field '") + field + "'");
  }
}

bool IsFiveDigits(const std::string& s) {
  return s.size() == 5 &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

int ParsePriceTier(const json& j) {
  if (!j.contains("attributes") || !j["attributes"].is_object()) return 0;
  const auto& attrs = j["attributes"];
  if (!attrs.contains("RestaurantsPriceRange2")) return 0;
  const auto& v = attrs["RestaurantsPriceRange2"];
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    const std::string s(Trim(v.get<std::string>()));
    if (s.size() == 1 && std::isdigit(static_cast<unsigned char>(s[0]))) return s[0] - '0';
    return -1;
  }
  return v.is_null() ? 0 : -1;
}

std::string NameKey(const std::string& name) { return CollapseWhitespace(ToLower(name)); }

}  // namespace

Business ParseBusiness(const json& j) {
  if (!j.is_object()) throw InputError("record is not a JSON object");
  Business b;
  b.business_id = Require<std::string>(j, "business_id");
  b.name = Require<std::string>(j, "name");
  b.state = Require<std::string>(j, "state");
  b.zipcode = std::string(Trim(Require<std::string>(j, "postal_code")));
  // ZIP+4 -> 5-digit ZIP.
  if (b.zipcode.size() == 10 && b.zipcode[5] == '-') b.zipcode.resize(5);
  b.latitude = Require<double>(j, "latitude");
  b.longitude = Require<double>(j, "longitude");
  b.mean_stars = Require<double>(j, "stars");
  b.review_count = Require<std::int64_t>(j, "review_count");
  if (j.contains("categories") && j["categories"].is_string()) {
    for (const auto& part : Split(j["categories"].get<std::string>(), ',')) {
      std::string tag = NormalizeCategory(part);
      if (!tag.empty()) b.categories.push_back(std::move(tag));
    }
  } else if (j.contains("categories") && j["categories"].is_array()) {
    for (const auto& t : j["categories"]) b.categories.push_back(NormalizeCategory(t.get<std::string>()));
  }
  b.price_tier = ParsePriceTier(j);
  return b;
}

BusinessTable FilterBusinesses(std::vector<Business> candidates, const CuisineRegionMap& map,
                               const FilterConfig& filters, DropReport& report) {
  report.input += candidates.size();

  std::unordered_map<std::string, std::set<std::string>> ids_by_name;
  for (const auto& b : candidates) ids_by_name[NameKey(b.name)].insert(b.business_id);

  std::vector<Business> kept;
  std::set<std::string> seen_ids;
  for (auto& b : candidates) {
    const auto has = [&](const std::string& tag) {
      return std::find(b.categories.begin(), b.categories.end(), tag) != b.categories.end();
    };
    const std::string who = "business " + b.business_id + ": ";

    if (!seen_ids.insert(b.business_id).second) {
      report.Drop(DropReason::kInvalidField, who + "duplicate business_id");
      continue;
    }
    if (filters.require_restaurant_tag && !has("restaurants")) {
      report.Drop(DropReason::kNotRestaurant);
      continue;
    }
    if (std::any_of(filters.excluded_venue_tags.begin(), filters.excluded_venue_tags.end(), has)) {
      report.Drop(DropReason::kExcludedVenue);
      continue;
    }
    if (ids_by_name[NameKey(b.name)].size() >= static_cast<std::size_t>(filters.chain_threshold)) {
      report.Drop(DropReason::kChain);
      continue;
    }

    std::vector<std::string> cuisines;
    std::set<Region> regions;
    bool excluded = false;
    for (const auto& tag : b.categories) {
      if (map.IsExcluded(tag) || (!filters.include_cajun_creole && tag == "cajun/creole")) {
        excluded = true;
        break;
      }
      if (auto r = map.RegionOf(tag)) {
        cuisines.push_back(tag);
        regions.insert(*r);
      }
    }
    if (excluded) {
      report.Drop(DropReason::kExcludedCuisine);
      continue;
    }
    if (cuisines.empty()) {
      report.Drop(DropReason::kNoCuisine);
      continue;
    }
    if (regions.size() > 1) {
      report.Drop(DropReason::kMultiRegion);
      continue;
    }

    if (b.price_tier == 0) {
      report.Drop(DropReason::kMissingField, who + "missing price tier");
      continue;
    }
    if (b.price_tier < 1 || b.price_tier > 4) {
      report.Drop(DropReason::kInvalidField, who + "price tier out of range");
      continue;
    }
    if (!(b.mean_stars >= 1.0 && b.mean_stars <= 5.0)) {
      report.Drop(DropReason::kInvalidField, who + "stars out of range");
      continue;
    }
    if (b.review_count < 0) {
      report.Drop(DropReason::kInvalidField, who + "negative review_count");
      continue;
    }
    if (!IsFiveDigits(b.zipcode)) {
      report.Drop(DropReason::kInvalidField, who + "zipcode '" + b.zipcode + "' is not 5 digits");
      continue;
    }

    b.cuisine_tags = std::move(cuisines);
    b.region = *regions.begin();
    kept.push_back(std::move(b));
  }
  report.retained += kept.size();
  return BusinessTable(std::move(kept));
}

BusinessTable LoadBusinesses(std::istream& in, const CuisineRegionMap& map,
                             const FilterConfig& filters, DropReport& report) {
  std::vector<Business> candidates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      ++report.input;
      report.Drop(DropReason::kMalformed,
                  "line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
      continue;
    }
    try {
      candidates.push_back(ParseBusiness(j));
    } catch (const InputError& e) {
      ++report.input;
      const bool missing = std::string_view(e.what()).starts_with("missing");
      report.Drop(missing ? DropReason::kMissingField : DropReason::kInvalidField,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return FilterBusinesses(std::move(candidates), map, filters, report);
}

BusinessTable LoadBusinesses(const std::string& path, const CuisineRegionMap& map,
                             const FilterConfig& filters, DropReport& report) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open business file: " + path);
  return LoadBusinesses(in, map, filters, report);
}

// ---------------------------------------------------------------------------
// Reviews

json ReviewLoadReport::ToJson() const {
  return {{"input", input},
          {"retained", retained},
          {"dropped",
           {{"malformed", malformed},
            {"missing_field", missing_field},
            {"invalid_field", invalid_field},
            {"orphan", orphan},
            {"invalid_utf8", invalid_utf8}}},
          {"log", log}};
}

ReviewTable::ReviewTable(std::vector<Review> reviews) : reviews_(std::move(reviews)) {
  for (std::size_t i = 0; i < reviews_.size(); ++i) index_.emplace(reviews_[i].review_id, i);
}

const Review* ReviewTable::Find(const std::string& review_id) const {
  auto it = index_.find(review_id);
  return it == index_.end() ? nullptr : &reviews_[it->second];
}

ReviewTable LoadReviews(std::istream& in, const BusinessTable& businesses,
                        ReviewLoadReport& report) {
  std::vector<Review> kept;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    ++report.input;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!IsValidUtf8(line)) {
      ++report.invalid_utf8;
      report.log.push_back(where + "invalid UTF-8");
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      ++report.malformed;
      report.log.push_back(where + "malformed JSON: " + e.what());
      continue;
    }
    Review r;
    try {
      if (!j.is_object()) throw InputError("missing field 'review_id'");
      r.review_id = Require<std::string>(j, "review_id");
      r.business_id = Require<std::string>(j, "business_id");
      r.user_id = Require<std::string>(j, "user_id");
      r.text = Require<std::string>(j, "text");
      const double stars = Require<double>(j, "stars");
      if (stars != std::floor(stars) || stars < 1 || stars > 5) {
        throw InputError("invalid field 'stars'");
      }
      r.stars = static_cast<int>(stars);
    } catch (const InputError& e) {
      const bool missing = std::string_view(e.what()).starts_with("missing");
      ++(missing ? report.missing_field : report.invalid_field);
      report.log.push_back(where + e.what());
      continue;
    }
    if (businesses.Find(r.business_id) == nullptr) {
      ++report.orphan;
      continue;
    }
    if (!seen.insert(r.review_id).second) {
      ++report.invalid_field;
      report.log.push_back(where + "duplicate review_id " + r.review_id);
      continue;
    }
    r.token_count = CountWhitespaceTokens(r.text);
    kept.push_back(std::move(r));
  }
  report.retained += kept.size();
  return ReviewTable(std::move(kept));
}

ReviewTable LoadReviews(const std::string& path, const BusinessTable& businesses,
                        ReviewLoadReport& report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open review file: " + path);
  return LoadReviews(in, businesses, report);
}

NonlocalFilter::NonlocalFilter(const std::vector<std::string>& patterns)
    : patterns_(CompilePatterns(patterns)) {}

bool NonlocalFilter::Matches(const std::string& text) const { return AnyMatch(patterns_, text); }

NonlocalResult ExcludeNonlocal(const ReviewTable& reviews,
                               const std::vector<std::string>& patterns) {
  const NonlocalFilter filter(patterns);
  NonlocalResult result;
  std::vector<Review> kept;
  kept.reserve(reviews.size());
  for (const auto& r : reviews.reviews()) {
    if (!filter.empty() && filter.Matches(r.text)) {
      ++result.removed;
    } else {
      kept.push_back(r);
    }
  }
  result.kept = ReviewTable(std::move(kept));
  return result;
}

ReviewTable MarkNonlocal(const ReviewTable& reviews, const std::vector<std::string>& patterns) {
  const NonlocalFilter filter(patterns);
  std::vector<Review> out = reviews.reviews();
  for (auto& r : out) r.nonlocal = !filter.empty() && filter.Matches(r.text);
  return ReviewTable(std::move(out));
}

ReviewTable SampleReviews(const ReviewTable& reviews, std::size_t n, std::uint64_t seed) {
  if (n >= reviews.size()) return reviews;
  std::mt19937_64 rng(seed);
  std::vector<Review> out;
  out.reserve(n);
  for (std::size_t i : SampleIndices(reviews.size(), n, rng)) out.push_back(reviews.reviews()[i]);
  return ReviewTable(std::move(out));
}

void WriteBusinessesCsv(std::ostream& out, const BusinessTable& table) {
  CsvWriter w(out);
  w.WriteRow({"business_id", "name", "state", "zipcode", "latitude", "longitude", "cuisine_tags",
              "region", "price_tier", "mean_stars", "review_count"});
  for (const auto& b : table.businesses()) {
    std::string tags;
    for (const auto& t : b.cuisine_tags) {
      if (!tags.empty()) tags += '|';
      tags += t;
    }
    w.WriteRow({b.business_id, b.name, b.state, b.zipcode, FormatDouble(b.latitude),
                FormatDouble(b.longitude), tags, std::string(RegionName(b.region)),
                std::to_string(b.price_tier), FormatDouble(b.mean_stars),
                std::to_string(b.review_count)});
  }
}

void WriteReviewsCsv(std::ostream& out, const ReviewTable& table) {
  CsvWriter w(out);
  w.WriteRow({"review_id", "business_id", "user_id", "stars", "token_count", "nonlocal"});
  for (const auto& r : table.reviews()) {
    w.WriteRow({r.review_id, r.business_id, r.user_id, std::to_string(r.stars),
                std::to_string(r.token_count), r.nonlocal ? "1" : "0"});
  }
}

}  // namespace foodframe
