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

// Canned model specifications over merged review records.
//
//   study1a        othering frames ~ region(ref US) + length + price(ref $$)
//                  + stars + income + diversity
//   study1b        othering frames within AS (resp. LAT) reviews, local
//                  reviewers only ~ asian (resp. hispanic) share hi/lo (ref hi)
//                  + length + price + stars + income + diversity
//   study2         status frames and subsets ~ study1a covariates, region ref EUR
//   glass_ceiling  study2 on price tiers $$$ and $$$$ without the price term
//   study3         synthetic reviews: all frames ~ region(ref US) + sentiment
//                  (ref neutral); plus an immigrant-vs-US variant

#ifndef FOODFRAME_STUDIES_H_
#define FOODFRAME_STUDIES_H_

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "foodframe/census.h"
#include "foodframe/corpus.h"
#include "foodframe/lexicon.h"
#include "foodframe/regression.h"

namespace foodframe {

enum class StudyKind { kStudy1A, kStudy1B, kStudy2, kGlassCeiling, kStudy3 };

inline constexpr std::array<StudyKind, 5> kAllStudies = {
    StudyKind::kStudy1A, StudyKind::kStudy1B, StudyKind::kStudy2, StudyKind::kGlassCeiling,
    StudyKind::kStudy3};

std::string_view StudyName(StudyKind s);  // "study1a", ..., "glass_ceiling"
std::optional<StudyKind> ParseStudy(std::string_view s);

// "$" .. "$$$$" for tiers 1..4.
std::string PriceLabel(int tier);

inline constexpr std::array<std::string_view, 5> kSentiments = {
    "very negative", "negative", "neutral", "positive", "very positive"};

// One observed review joined with its business, neighborhood and score.
struct ReviewRecord {
  std::string review_id;
  std::string business_id;
  std::string user_id;
  Region region = Region::kUS;
  int price_tier = 0;
  double business_stars = 0.0;
  double length = 0.0;  // whitespace tokens
  bool nonlocal = false;
  bool has_census = false;
  double income = 0.0;
  double diversity = 0.0;
  double pct_asian = 0.0;
  double pct_hispanic = 0.0;
  FramingScore score;
};

struct MergeReport {
  std::size_t reviews = 0;
  std::size_t missing_business = 0;
  std::size_t missing_census = 0;  // flagged, kept, excluded from models
  std::size_t missing_score = 0;   // treated as all-zero counts
};

std::vector<ReviewRecord> MergeRecords(const BusinessTable& businesses, const ReviewTable& reviews,
                                       const CensusTable& census,
                                       const std::vector<FramingScore>& scores,
                                       MergeReport* report = nullptr);

// One generated review: prompt fields plus its score.
struct SyntheticRecord {
  std::string review_id;
  Region region = Region::kUS;
  std::string sentiment;  // one of kSentiments
  FramingScore score;
};

struct StudyOptions {
  std::size_t min_n = 30;
  bool standardize = true;
  bool cluster_by_business = false;
  bool within_user = false;  // approximation; see DemeanWithinGroups
  double vif_threshold = 2.0;
  bool vif_strict = false;  // throw InputError when a VIF reaches the threshold
};

struct ModelOutcome {
  std::string study;
  std::string model;  // "exoticism", "AS:authenticity", "immigrant:luxury"
  std::string outcome;
  std::optional<RegressionResult> result;
  std::string skipped;  // reason, when result is empty
  std::vector<std::string> warnings;
  std::vector<std::string> vif_terms;
  std::vector<double> vif;
  bool vif_ok = true;
};

// Models run concurrently; each fit is single-threaded.
std::vector<ModelOutcome> RunStudy(StudyKind kind, const std::vector<ReviewRecord>& records,
                                   const StudyOptions& options = {});
std::vector<ModelOutcome> RunSyntheticStudy(const std::vector<SyntheticRecord>& records,
                                            const StudyOptions& options = {});

// Exposed for tests: the specs a study fits, and the table they read.
std::vector<RegressionSpec> StudySpecs(StudyKind kind, bool standardize);
ModelData BuildModelData(const std::vector<ReviewRecord>& records);
ModelData BuildSyntheticModelData(const std::vector<SyntheticRecord>& records);

struct WaldRow {
  std::string study;
  std::string model;
  std::string term_a;
  std::string term_b;
  WaldResult wald;
};

// Pairwise comparisons between the region coefficients of every fitted model.
std::vector<WaldRow> RegionWaldComparisons(const std::vector<ModelOutcome>& outcomes);

void WriteStudyCsvHeader(std::ostream& out);
void WriteStudyCsv(std::ostream& out, const std::vector<ModelOutcome>& outcomes);
nlohmann::json StudyToJson(const std::vector<ModelOutcome>& outcomes);
void WriteWaldCsv(std::ostream& out, const std::vector<WaldRow>& rows);

}  // namespace foodframe

#endif  // FOODFRAME_STUDIES_H_
