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

// Framing lexicons and per-review raw-count scores.
//
// Lexicon file format:
//
//   # comment
//   [hygiene status_low]
//   clean @clean
//   dirty @dirty
//
// A bracketed header opens a frame section (frame name, construct). Each
// following line is one entry, optionally tagged with a subset. Entries are
// compared after NormalizeEntry, so "hand-made", "hand made" and "handmade"
// are the same entry.

#ifndef FOODFRAME_LEXICON_H_
#define FOODFRAME_LEXICON_H_

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "foodframe/conllu.h"
#include "foodframe/extract.h"

namespace foodframe {

enum class Frame { kExoticism, kPrototypicality, kAuthenticity, kLuxury, kCost, kHygiene };
enum class Construct { kOthering, kStatusHigh, kStatusLow };
enum class FrameSubset { kClean, kDirty, kCheap, kExpensive };

inline constexpr std::array<Frame, 6> kAllFrames = {
    Frame::kExoticism, Frame::kPrototypicality, Frame::kAuthenticity,
    Frame::kLuxury,    Frame::kCost,            Frame::kHygiene};
inline constexpr std::array<FrameSubset, 4> kAllSubsets = {
    FrameSubset::kClean, FrameSubset::kDirty, FrameSubset::kCheap, FrameSubset::kExpensive};

std::string_view FrameName(Frame f);  // lowercase: "exoticism"
std::optional<Frame> ParseFrame(std::string_view s);
std::string_view ConstructName(Construct c);  // "othering", "status_high", "status_low"
std::optional<Construct> ParseConstruct(std::string_view s);
std::string_view SubsetName(FrameSubset s);  // "clean", ...
std::optional<FrameSubset> ParseSubset(std::string_view s);
Frame SubsetParent(FrameSubset s);
Construct DefaultConstruct(Frame f);

// Lowercase with hyphens and whitespace removed.
std::string NormalizeEntry(std::string_view entry);

struct LexiconEntry {
  std::string display;  // first spelling seen
  std::optional<FrameSubset> subset;
};

class FrameLexicon {
 public:
  FrameLexicon(Frame name, Construct construct) : name_(name), construct_(construct) {}

  // Adds an entry; re-adding a normalized duplicate is a no-op unless the
  // subsets disagree (ConfigError).
  void Add(std::string_view entry, std::optional<FrameSubset> subset = std::nullopt);

  Frame name() const { return name_; }
  Construct construct() const { return construct_; }
  const std::map<std::string, LexiconEntry>& entries() const { return entries_; }
  const LexiconEntry* Find(std::string_view raw) const;

 private:
  Frame name_;
  Construct construct_;
  std::map<std::string, LexiconEntry> entries_;  // keyed by NormalizeEntry
};

class LexiconSet {
 public:
  LexiconSet() = default;
  explicit LexiconSet(std::vector<FrameLexicon> lexicons);

  static LexiconSet Read(std::istream& in);
  static LexiconSet Load(const std::string& path);

  const std::vector<FrameLexicon>& lexicons() const { return lexicons_; }
  const FrameLexicon* Find(Frame f) const;

  // Normalized entries listed under more than one frame, with those frames.
  std::map<std::string, std::vector<Frame>> SharedEntries() const;

 private:
  std::vector<FrameLexicon> lexicons_;
};

struct EntryMatch {
  std::string entry;  // display form of the matched entry
  std::optional<FrameSubset> subset;
};

// Unigram (feature lemma) or bigram (lemma plus a surface-adjacent token that
// is its head or dependent) match; the bigram wins when both match. Without
// context only the unigram is tried.
std::optional<EntryMatch> MatchFeature(const FramingFeature& feature, const Sentence* context,
                                       const FrameLexicon& lexicon);
bool MatchEntry(const FramingFeature& feature, const Sentence* context,
                const FrameLexicon& lexicon);

struct FramingScore {
  std::string review_id;
  std::array<int, 6> counts{};         // indexed by Frame
  std::array<int, 4> subset_counts{};  // indexed by FrameSubset

  int count(Frame f) const { return counts[static_cast<std::size_t>(f)]; }
  int subset_count(FrameSubset s) const { return subset_counts[static_cast<std::size_t>(s)]; }
};

struct FrameMatch {
  std::string review_id;
  Frame frame;
  std::string entry;
  std::optional<FrameSubset> subset;
};

struct ScoredReview {
  FramingScore score;
  std::vector<FrameMatch> matches;
};

// `context` supplies sentences for bigram matching and may be null.
ScoredReview ScoreReview(const std::string& review_id,
                         const std::vector<FramingFeature>& features,
                         const LexiconSet& lexicons, const ParsedReview* context = nullptr);

// review_id,exoticism,...,hygiene,clean,dirty,cheap,expensive
void WriteScoresCsvHeader(std::ostream& out);
void WriteScoreCsv(std::ostream& out, const FramingScore& score);
std::vector<FramingScore> ReadScoresCsv(const std::string& path);

// review_id,frame,entry,subset
void WriteMatchesCsvHeader(std::ostream& out);
void WriteMatchesCsv(std::ostream& out, const std::vector<FrameMatch>& matches);
std::vector<FrameMatch> ReadMatchesCsv(const std::string& path);

}  // namespace foodframe

#endif  // FOODFRAME_LEXICON_H_
