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

#include "foodframe/lexicon.h"

#include <cctype>
#include <fstream>
#include <set>

#include "foodframe/csv.h"
#include "foodframe/error.h"
#include "foodframe/text.h"

namespace foodframe {

std::string_view FrameName(Frame f) {
  switch (f) {
    case Frame::kExoticism:
      return "exoticism";
    case Frame::kPrototypicality:
      return "prototypicality";
    case Frame::kAuthenticity:
      return "authenticity";
    case Frame::kLuxury:
      return "luxury";
    case Frame::kCost:
      return "cost";
    case Frame::kHygiene:
      return "hygiene";
  }
  return "?";
}

std::optional<Frame> ParseFrame(std::string_view s) {
  const std::string lower = ToLower(s);
  for (Frame f : kAllFrames) {
    if (FrameName(f) == lower) return f;
  }
  return std::nullopt;
}

std::string_view ConstructName(Construct c) {
  switch (c) {
    case Construct::kOthering:
      return "othering";
    case Construct::kStatusHigh:
      return "status_high";
    case Construct::kStatusLow:
      return "status_low";
  }
  return "?";
}

std::optional<Construct> ParseConstruct(std::string_view s) {
  const std::string lower = ToLower(s);
  for (auto c : {Construct::kOthering, Construct::kStatusHigh, Construct::kStatusLow}) {
    if (ConstructName(c) == lower) return c;
  }
  return std::nullopt;
}

std::string_view SubsetName(FrameSubset s) {
  switch (s) {
    case FrameSubset::kClean:
      return "clean";
    case FrameSubset::kDirty:
      return "dirty";
    case FrameSubset::kCheap:
      return "cheap";
    case FrameSubset::kExpensive:
      return "expensive";
  }
  return "?";
}

std::optional<FrameSubset> ParseSubset(std::string_view s) {
  const std::string lower = ToLower(s);
  for (FrameSubset sub : kAllSubsets) {
    if (SubsetName(sub) == lower) return sub;
  }
  return std::nullopt;
}

Frame SubsetParent(FrameSubset s) {
  return (s == FrameSubset::kClean || s == FrameSubset::kDirty) ? Frame::kHygiene : Frame::kCost;
}

Construct DefaultConstruct(Frame f) {
  switch (f) {
    case Frame::kExoticism:
    case Frame::kPrototypicality:
    case Frame::kAuthenticity:
      return Construct::kOthering;
    case Frame::kLuxury:
      return Construct::kStatusHigh;
    case Frame::kCost:
    case Frame::kHygiene:
      return Construct::kStatusLow;
  }
  return Construct::kOthering;
}

std::string NormalizeEntry(std::string_view entry) {
  std::string out;
  out.reserve(entry.size());
  for (char c : entry) {
    if (c == '-' || std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// ---------------------------------------------------------------------------

void FrameLexicon::Add(std::string_view entry, std::optional<FrameSubset> subset) {
  const std::string key = NormalizeEntry(entry);
  if (key.empty()) throw ConfigError("lexicon " + std::string(FrameName(name_)) + ": empty entry");
  if (subset && SubsetParent(*subset) != name_) {
    throw ConfigError("subset @" + std::string(SubsetName(*subset)) + " does not belong to " +
                      std::string(FrameName(name_)));
  }
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    if (it->second.subset != subset) {
      throw ConfigError("lexicon " + std::string(FrameName(name_)) + ": entry '" +
                        std::string(entry) + "' listed with conflicting subsets");
    }
    return;
  }
  entries_.emplace(key, LexiconEntry{CollapseWhitespace(ToLower(entry)), subset});
}

const LexiconEntry* FrameLexicon::Find(std::string_view raw) const {
  auto it = entries_.find(NormalizeEntry(raw));
  return it == entries_.end() ? nullptr : &it->second;
}

LexiconSet::LexiconSet(std::vector<FrameLexicon> lexicons) : lexicons_(std::move(lexicons)) {
  std::set<Frame> seen;
  for (const auto& lex : lexicons_) {
    if (!seen.insert(lex.name()).second) {
      throw ConfigError("lexicon " + std::string(FrameName(lex.name())) + " defined twice");
    }
  }
}

LexiconSet LexiconSet::Read(std::istream& in) {
  std::vector<FrameLexicon> lexicons;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    std::string_view body(line);
    if (hash != std::string::npos) body = body.substr(0, hash);
    body = Trim(body);
    if (body.empty()) continue;
    const std::string where = "lexicon line " + std::to_string(line_no) + ": ";

    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + "unterminated section header");
      const auto parts = Split(CollapseWhitespace(body.substr(1, body.size() - 2)), ' ');
      const auto frame = ParseFrame(parts[0]);
      if (!frame) throw ConfigError(where + "unknown frame '" + parts[0] + "'");
      Construct construct = DefaultConstruct(*frame);
      if (parts.size() > 1) {
        const auto c = ParseConstruct(parts[1]);
        if (!c) throw ConfigError(where + "unknown construct '" + parts[1] + "'");
        construct = *c;
      }
      lexicons.emplace_back(*frame, construct);
      continue;
    }
    if (lexicons.empty()) throw ConfigError(where + "entry before any [frame] header");

    std::optional<FrameSubset> subset;
    const auto at = body.find('@');
    std::string_view entry = body;
    if (at != std::string_view::npos) {
      const auto name = Trim(body.substr(at + 1));
      subset = ParseSubset(name);
      if (!subset) throw ConfigError(where + "unknown subset '" + std::string(name) + "'");
      entry = Trim(body.substr(0, at));
    }
    try {
      lexicons.back().Add(entry, subset);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return LexiconSet(std::move(lexicons));
}

LexiconSet LexiconSet::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon file: " + path);
  return Read(in);
}

const FrameLexicon* LexiconSet::Find(Frame f) const {
  for (const auto& lex : lexicons_) {
    if (lex.name() == f) return &lex;
  }
  return nullptr;
}

std::map<std::string, std::vector<Frame>> LexiconSet::SharedEntries() const {
  std::map<std::string, std::vector<Frame>> owners;
  for (const auto& lex : lexicons_) {
    for (const auto& [key, entry] : lex.entries()) owners[key].push_back(lex.name());
  }
  std::map<std::string, std::vector<Frame>> shared;
  for (auto& [key, frames] : owners) {
    if (frames.size() > 1) shared.emplace(key, std::move(frames));
  }
  return shared;
}

// ---------------------------------------------------------------------------
// Matching and scoring

std::optional<EntryMatch> MatchFeature(const FramingFeature& feature, const Sentence* context,
                                       const FrameLexicon& lexicon) {
  if (context != nullptr && feature.token >= 1 &&
      feature.token <= static_cast<int>(context->size())) {
    const Token& adj = (*context)[feature.token - 1];
    for (int neighbor : {feature.token - 1, feature.token + 1}) {
      if (neighbor < 1 || neighbor > static_cast<int>(context->size())) continue;
      const Token& other = (*context)[neighbor - 1];
      if (other.head != adj.index && adj.head != other.index) continue;
      const std::string bigram = neighbor < feature.token ? other.lemma + " " + adj.lemma
                                                          : adj.lemma + " " + other.lemma;
      if (const LexiconEntry* e = lexicon.Find(bigram)) return EntryMatch{e->display, e->subset};
    }
  }
  if (const LexiconEntry* e = lexicon.Find(feature.adjective_lemma)) {
    return EntryMatch{e->display, e->subset};
  }
  return std::nullopt;
}

bool MatchEntry(const FramingFeature& feature, const Sentence* context,
                const FrameLexicon& lexicon) {
  return MatchFeature(feature, context, lexicon).has_value();
}

ScoredReview ScoreReview(const std::string& review_id,
                         const std::vector<FramingFeature>& features,
                         const LexiconSet& lexicons, const ParsedReview* context) {
  ScoredReview out;
  out.score.review_id = review_id;
  for (const FramingFeature& f : features) {
    const Sentence* sentence = nullptr;
    if (context != nullptr && f.sentence >= 0 &&
        f.sentence < static_cast<int>(context->sentences.size())) {
      sentence = &context->sentences[f.sentence];
    }
    for (const FrameLexicon& lex : lexicons.lexicons()) {
      auto m = MatchFeature(f, sentence, lex);
      if (!m) continue;
      ++out.score.counts[static_cast<std::size_t>(lex.name())];
      if (m->subset) ++out.score.subset_counts[static_cast<std::size_t>(*m->subset)];
      out.matches.push_back({review_id, lex.name(), std::move(m->entry), m->subset});
    }
  }
  return out;
}

void WriteScoresCsvHeader(std::ostream& out) {
  CsvRow header = {"review_id"};
  for (Frame f : kAllFrames) header.emplace_back(FrameName(f));
  for (FrameSubset s : kAllSubsets) header.emplace_back(SubsetName(s));
  CsvWriter(out).WriteRow(header);
}

void WriteScoreCsv(std::ostream& out, const FramingScore& score) {
  CsvRow row = {score.review_id};
  for (int c : score.counts) row.push_back(std::to_string(c));
  for (int c : score.subset_counts) row.push_back(std::to_string(c));
  CsvWriter(out).WriteRow(row);
}

std::vector<FramingScore> ReadScoresCsv(const std::string& path) {
  const CsvTable csv = CsvTable::ReadFile(path);
  const std::size_t c_id = csv.Column("review_id");
  std::array<std::size_t, 6> c_frame{};
  std::array<std::size_t, 4> c_subset{};
  for (Frame f : kAllFrames) c_frame[static_cast<std::size_t>(f)] = csv.Column(FrameName(f));
  for (FrameSubset s : kAllSubsets) c_subset[static_cast<std::size_t>(s)] = csv.Column(SubsetName(s));
  std::vector<FramingScore> out;
  out.reserve(csv.size());
  for (const auto& r : csv.rows()) {
    FramingScore s;
    s.review_id = r[c_id];
    for (std::size_t i = 0; i < 6; ++i) s.counts[i] = std::stoi(r[c_frame[i]]);
    for (std::size_t i = 0; i < 4; ++i) s.subset_counts[i] = std::stoi(r[c_subset[i]]);
    out.push_back(std::move(s));
  }
  return out;
}

void WriteMatchesCsvHeader(std::ostream& out) {
  CsvWriter(out).WriteRow({"review_id", "frame", "entry", "subset"});
}

void WriteMatchesCsv(std::ostream& out, const std::vector<FrameMatch>& matches) {
  CsvWriter w(out);
  for (const auto& m : matches) {
    w.WriteRow({m.review_id, std::string(FrameName(m.frame)), m.entry,
                m.subset ? std::string(SubsetName(*m.subset)) : std::string()});
  }
}

std::vector<FrameMatch> ReadMatchesCsv(const std::string& path) {
  const CsvTable csv = CsvTable::ReadFile(path);
  const std::size_t c_id = csv.Column("review_id"), c_frame = csv.Column("frame"),
                    c_entry = csv.Column("entry"), c_subset = csv.Column("subset");
  std::vector<FrameMatch> out;
  out.reserve(csv.size());
  for (const auto& r : csv.rows()) {
    const auto frame = ParseFrame(r[c_frame]);
    if (!frame) throw InputError(path + ": unknown frame '" + r[c_frame] + "'");
    std::optional<FrameSubset> subset;
    if (!r[c_subset].empty()) {
      subset = ParseSubset(r[c_subset]);
      if (!subset) throw InputError(path + ": unknown subset '" + r[c_subset] + "'");
    }
    out.push_back({r[c_id], *frame, r[c_entry], subset});
  }
  return out;
}

}  // namespace foodframe
