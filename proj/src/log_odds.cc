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

#include "foodframe/log_odds.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "foodframe/csv.h"
#include "foodframe/error.h"

namespace foodframe {

void CountTable::Add(const std::string& group, const std::string& word, std::int64_t count) {
  if (count < 0) throw ContractViolation("count table: negative count");
  groups_[group][word] += count;
  group_totals_[group] += count;
}

void CountTable::AddPrior(const std::string& word, std::int64_t count) {
  if (count < 0) throw ContractViolation("count table: negative prior count");
  prior_[word] += count;
  prior_total_ += count;
}

void CountTable::AddGroup(const std::string& group) {
  groups_[group];
  group_totals_[group];
}

void CountTable::UseCorpusPrior() {
  prior_.clear();
  prior_total_ = 0;
  for (const auto& [group, words] : groups_) {
    for (const auto& [word, n] : words) AddPrior(word, n);
  }
}

std::int64_t CountTable::GroupTotal(const std::string& group) const {
  auto it = group_totals_.find(group);
  return it == group_totals_.end() ? 0 : it->second;
}

std::vector<std::string> CountTable::UncoveredWords() const {
  std::set<std::string> missing;
  for (const auto& [group, words] : groups_) {
    for (const auto& [word, n] : words) {
      if (n > 0 && !prior_.count(word)) missing.insert(word);
    }
  }
  return {missing.begin(), missing.end()};
}

std::vector<LogOddsEntry> WeightedLogOdds(const CountTable& table, const std::string& group) {
  const auto git = table.groups().find(group);
  if (git == table.groups().end()) {
    throw ContractViolation("weighted log odds: unknown group '" + group + "'");
  }
  if (const auto missing = table.UncoveredWords(); !missing.empty()) {
    throw ContractViolation("weighted log odds: prior does not cover '" + missing.front() + "'");
  }

  // Complement counts: all other groups pooled.
  std::map<std::string, std::int64_t> other;
  std::int64_t other_total = 0;
  std::set<std::string> vocab;
  for (const auto& [name, words] : table.groups()) {
    for (const auto& [word, n] : words) {
      vocab.insert(word);
      if (name != group) {
        other[word] += n;
        other_total += n;
      }
    }
  }
  for (const auto& [word, n] : table.prior()) vocab.insert(word);

  const auto lookup = [](const std::map<std::string, std::int64_t>& m, const std::string& w) {
    auto it = m.find(w);
    return it == m.end() ? std::int64_t{0} : it->second;
  };

  const double total_c = static_cast<double>(table.GroupTotal(group));
  const double total_notc = static_cast<double>(other_total);
  const double total_p = static_cast<double>(table.PriorTotal());

  std::vector<LogOddsEntry> out;
  for (const std::string& w : vocab) {
    LogOddsEntry e{w, 0.0, lookup(git->second, w), lookup(other, w), lookup(table.prior(), w)};
    const double n_c = static_cast<double>(e.n_c);
    const double n_notc = static_cast<double>(e.n_notc);
    const double n_p = static_cast<double>(e.n_prior);
    const double num_c = n_c + n_p;
    const double num_notc = n_notc + n_p;
    const double den_c = total_c - n_c + total_p - n_p;
    const double den_notc = total_notc - n_notc + total_p - n_p;
    if (num_c <= 0 || num_notc <= 0 || den_c <= 0 || den_notc <= 0) continue;
    const double l_c = num_c / den_c;
    const double l_notc = num_notc / den_notc;
    e.delta = std::log(l_c / l_notc) / std::sqrt(1.0 / num_c + 1.0 / num_notc);
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const LogOddsEntry& a, const LogOddsEntry& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return a.word < b.word;
  });
  return out;
}

std::vector<LogOddsEntry> TopAssociated(const std::vector<LogOddsEntry>& entries, std::size_t k,
                                        double z_min) {
  const bool sorted = std::is_sorted(entries.begin(), entries.end(),
                                     [](const LogOddsEntry& a, const LogOddsEntry& b) {
                                       return a.delta > b.delta;
                                     });
  if (!sorted) throw ContractViolation("top associated: entries not sorted by delta");
  std::vector<LogOddsEntry> out;
  for (const auto& e : entries) {
    if (out.size() >= k || e.delta < z_min) break;
    out.push_back(e);
  }
  return out;
}

std::vector<LogOddsEntry> FrameFilteredLogOdds(const std::vector<FrameMatch>& matches,
                                               const FrameLexicon& lexicon, Region group,
                                               const RegionLookup& region_of) {
  CountTable table;
  for (Region r : kAllRegions) table.AddGroup(std::string(RegionName(r)));
  bool any = false;
  for (const FrameMatch& m : matches) {
    if (m.frame != lexicon.name()) continue;
    const LexiconEntry* entry = lexicon.Find(m.entry);
    if (entry == nullptr) continue;
    const auto region = region_of(m.review_id);
    if (!region) continue;
    table.Add(std::string(RegionName(*region)), entry->display);
    any = true;
  }
  if (!any) return {};
  table.UseCorpusPrior();
  return WeightedLogOdds(table, std::string(RegionName(group)));
}

std::vector<LogOddsEntry> FeatureLogOdds(const std::vector<FramingFeature>& features,
                                         Region group, const RegionLookup& region_of) {
  CountTable table;
  for (Region r : kAllRegions) table.AddGroup(std::string(RegionName(r)));
  bool any = false;
  for (const FramingFeature& f : features) {
    const auto region = region_of(f.review_id);
    if (!region) continue;
    table.Add(std::string(RegionName(*region)), f.adjective_lemma);
    any = true;
  }
  if (!any) return {};
  table.UseCorpusPrior();
  return WeightedLogOdds(table, std::string(RegionName(group)));
}

void WriteLogOddsCsvHeader(std::ostream& out) {
  CsvWriter(out).WriteRow({"group", "word", "delta", "n_c", "n_notc", "n_prior"});
}

void WriteLogOddsCsv(std::ostream& out, const std::string& group,
                     const std::vector<LogOddsEntry>& entries) {
  CsvWriter w(out);
  for (const auto& e : entries) {
    w.WriteRow({group, e.word, FormatDouble(e.delta), std::to_string(e.n_c),
                std::to_string(e.n_notc), std::to_string(e.n_prior)});
  }
}

}  // namespace foodframe
