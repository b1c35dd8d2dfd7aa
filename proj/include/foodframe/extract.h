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

// Adjectival framing features attached to food, staff and venue anchors.
//
// Anchors are nominal tokens whose lemma is in one of three anchor sets, plus
// tokens coreferent with them. An adjective is emitted for an anchor when it
//
//   ATTRIBUTIVE  modifies the anchor directly (amod),
//   PREDICATIVE  is predicated of the anchor as subject: "the place was
//                clean" in either the UD analysis (adjective heads nsubj and
//                cop) or the ClearNLP/spaCy one (copula heads nsubj and
//                acomp); also xcomp of a linking verb and amod of a
//                nominal predicate ("the tacos are the real deal"),
//   CONJOINED    is conjoined to an adjective already emitted ("clean and
//                cheap"),
//
// and it is not under negation. Features whose anchor was reached only
// through a coreference chain carry path COREF instead.
//
// Both dependency schemes are handled because the parse adapter may emit
// either; relation labels are compared lowercased.

#ifndef FOODFRAME_EXTRACT_H_
#define FOODFRAME_EXTRACT_H_

#include <array>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "foodframe/conllu.h"

namespace foodframe {

enum class AnchorCategory { kFood, kStaff, kVenue };

inline constexpr std::array<AnchorCategory, 3> kAllAnchorCategories = {
    AnchorCategory::kFood, AnchorCategory::kStaff, AnchorCategory::kVenue};

std::string_view AnchorCategoryName(AnchorCategory c);
std::optional<AnchorCategory> ParseAnchorCategory(std::string_view s);

struct AnchorSet {
  AnchorCategory category;
  std::set<std::string> lemmas;
};

// The three anchor sets; nonempty and pairwise disjoint (checked).
class AnchorLexicon {
 public:
  explicit AnchorLexicon(std::vector<AnchorSet> sets);

  // One lemma per line, '#' comments.
  static AnchorLexicon Load(const std::string& food_path, const std::string& staff_path,
                            const std::string& venue_path);

  std::optional<AnchorCategory> CategoryOf(const std::string& lemma) const;
  const std::vector<AnchorSet>& sets() const { return sets_; }

 private:
  std::vector<AnchorSet> sets_;
};

struct AnchorMention {
  int sentence = 0;
  int token = 0;
  AnchorCategory category = AnchorCategory::kFood;
  bool via_coref = false;

  friend auto operator<=>(const AnchorMention&, const AnchorMention&) = default;
};

enum class ExtractionPath { kAttributive, kPredicative, kConjoined, kCoref };

std::string_view ExtractionPathName(ExtractionPath p);
std::optional<ExtractionPath> ParseExtractionPath(std::string_view s);

struct FramingFeature {
  std::string review_id;
  std::string adjective_lemma;
  AnchorCategory anchor_category = AnchorCategory::kFood;
  int sentence = 0;
  ExtractionPath path = ExtractionPath::kAttributive;
  int token = 0;         // adjective token id
  int anchor_token = 0;  // anchor token id

  friend bool operator==(const FramingFeature&, const FramingFeature&) = default;
};

struct ExtractorConfig {
  std::set<std::string> negation_cues = {"not", "n't", "never", "no", "nothing", "hardly", "without"};
  int negation_hops = 2;
  // "adjective noun" lemma bigrams naming dishes ("stinky tofu", "hot pot").
  std::set<std::string> dish_names;

  static std::set<std::string> LoadDishNames(const std::string& path);
};

// Direct nominal lemma matches plus coreference extensions. A chain whose
// direct matches disagree on category contributes nothing; it is reported
// through `warnings` when given. Result is sorted and unique by position.
std::vector<AnchorMention> ResolveAnchorMentions(const ParsedReview& review,
                                                 const AnchorLexicon& anchors,
                                                 std::vector<std::string>* warnings = nullptr);

std::vector<FramingFeature> ExtractAdjectives(const ParsedReview& review,
                                              const std::vector<AnchorMention>& mentions,
                                              const ExtractorConfig& config);

// True iff the adjective, its governor, or an ancestor within
// config.negation_hops has a negation dependent (or is itself a negation
// cue). Climbing stops at a coordinated clause that has its own subject.
bool InNegationScope(const Sentence& sentence, int adjective, const ExtractorConfig& config);

// ResolveAnchorMentions + ExtractAdjectives.
std::vector<FramingFeature> ExtractFeatures(const ParsedReview& review,
                                            const AnchorLexicon& anchors,
                                            const ExtractorConfig& config,
                                            std::vector<std::string>* warnings = nullptr);

// CSV: review_id,lemma,category,sentence,path,token,anchor_token.
void WriteFeaturesCsvHeader(std::ostream& out);
void WriteFeaturesCsv(std::ostream& out, const std::vector<FramingFeature>& features);
std::vector<FramingFeature> ReadFeaturesCsv(const std::string& path);

}  // namespace foodframe

#endif  // FOODFRAME_EXTRACT_H_
