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

// Weighted log-odds ratios with an informative prior ("Fightin' Words").
//
// For word w, group C, complement C' (every other group) and prior P:
//
//   L(w,C)  = (N(w,C) + N(w,P)) / (sum_x N(x,C) - N(w,C) + sum_x N(x,P) - N(w,P))
//   L(w,C') = (N(w,C') + N(w,P)) / (sum_x N(x,C') - N(w,C') + sum_x N(x,P) - N(w,P))
//   delta   = log(L(w,C) / L(w,C')) / sqrt(1/(N(w,C) + N(w,P)) + 1/(N(w,C') + N(w,P)))
//
// delta is a z-score; positive values mean w is over-represented in C.

#ifndef FOODFRAME_LOG_ODDS_H_
#define FOODFRAME_LOG_ODDS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "foodframe/corpus.h"
#include "foodframe/extract.h"
#include "foodframe/lexicon.h"

namespace foodframe {

class CountTable {
 public:
  void Add(const std::string& group, const std::string& word, std::int64_t count = 1);
  void AddPrior(const std::string& word, std::int64_t count = 1);
  // Registers a group with no counts yet.
  void AddGroup(const std::string& group);
  // Sets the prior to the summed counts of all groups.
  void UseCorpusPrior();

  const std::map<std::string, std::map<std::string, std::int64_t>>& groups() const {
    return groups_;
  }
  const std::map<std::string, std::int64_t>& prior() const { return prior_; }
  std::int64_t GroupTotal(const std::string& group) const;
  std::int64_t PriorTotal() const { return prior_total_; }

  // Words present in some group but absent from the prior.
  std::vector<std::string> UncoveredWords() const;

 private:
  std::map<std::string, std::map<std::string, std::int64_t>> groups_;
  std::map<std::string, std::int64_t> group_totals_;
  std::map<std::string, std::int64_t> prior_;
  std::int64_t prior_total_ = 0;
};

struct LogOddsEntry {
  std::string word;
  double delta = 0.0;
  std::int64_t n_c = 0;
  std::int64_t n_notc = 0;
  std::int64_t n_prior = 0;
};

// One entry per vocabulary word, sorted by delta descending (ties by word).
// Words with an undefined variance term (zero prior and zero counts on one
// side) or a nonpositive L denominator are left out. Throws ContractViolation
// when the group is unknown or the prior does not cover the vocabulary.
std::vector<LogOddsEntry> WeightedLogOdds(const CountTable& table, const std::string& group);

// At most k leading entries with delta >= z_min; entries must be sorted.
std::vector<LogOddsEntry> TopAssociated(const std::vector<LogOddsEntry>& entries, std::size_t k,
                                        double z_min = 2.0);

using RegionLookup = std::function<std::optional<Region>(const std::string& review_id)>;

// Counts of lexicon entries matched in each region's reviews; group = the
// region, complement = all other regions, prior = all reviews. Matches from
// other frames, or from reviews without a region, are ignored.
std::vector<LogOddsEntry> FrameFilteredLogOdds(const std::vector<FrameMatch>& matches,
                                               const FrameLexicon& lexicon, Region group,
                                               const RegionLookup& region_of);

// Same over every extracted adjective lemma, no lexicon restriction.
std::vector<LogOddsEntry> FeatureLogOdds(const std::vector<FramingFeature>& features,
                                         Region group, const RegionLookup& region_of);

// group,word,delta,n_c,n_notc,n_prior
void WriteLogOddsCsvHeader(std::ostream& out);
void WriteLogOddsCsv(std::ostream& out, const std::string& group,
                     const std::vector<LogOddsEntry>& entries);

}  // namespace foodframe

#endif  // FOODFRAME_LOG_ODDS_H_
