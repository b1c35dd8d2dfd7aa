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

#include "foodframe/extract.h"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "foodframe/csv.h"
#include "foodframe/error.h"
#include "foodframe/text.h"

namespace foodframe {

std::string_view AnchorCategoryName(AnchorCategory c) {
  switch (c) {
    case AnchorCategory::kFood:
      return "FOOD";
    case AnchorCategory::kStaff:
      return "STAFF";
    case AnchorCategory::kVenue:
      return "VENUE";
  }
  return "?";
}

std::optional<AnchorCategory> ParseAnchorCategory(std::string_view s) {
  for (AnchorCategory c : kAllAnchorCategories) {
    if (AnchorCategoryName(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view ExtractionPathName(ExtractionPath p) {
  switch (p) {
    case ExtractionPath::kAttributive:
      return "ATTRIBUTIVE";
    case ExtractionPath::kPredicative:
      return "PREDICATIVE";
    case ExtractionPath::kConjoined:
      return "CONJOINED";
    case ExtractionPath::kCoref:
      return "COREF";
  }
  return "?";
}

std::optional<ExtractionPath> ParseExtractionPath(std::string_view s) {
  for (auto p : {ExtractionPath::kAttributive, ExtractionPath::kPredicative,
                 ExtractionPath::kConjoined, ExtractionPath::kCoref}) {
    if (ExtractionPathName(p) == s) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Anchor sets

AnchorLexicon::AnchorLexicon(std::vector<AnchorSet> sets) : sets_(std::move(sets)) {
  std::map<std::string, AnchorCategory> seen;
  for (const auto& set : sets_) {
    if (set.lemmas.empty()) {
      throw ConfigError("anchor set " + std::string(AnchorCategoryName(set.category)) + " is empty");
    }
    for (const auto& lemma : set.lemmas) {
      auto [it, inserted] = seen.emplace(lemma, set.category);
      if (!inserted) {
        throw ConfigError("anchor lemma '" + lemma + "' appears in both " +
                          std::string(AnchorCategoryName(it->second)) + " and " +
                          std::string(AnchorCategoryName(set.category)));
      }
    }
  }
}

AnchorLexicon AnchorLexicon::Load(const std::string& food_path, const std::string& staff_path,
                                  const std::string& venue_path) {
  const auto load = [](AnchorCategory c, const std::string& path) {
    AnchorSet set{c, {}};
    for (const auto& entry : ReadListFile(path)) set.lemmas.insert(ToLower(entry));
    return set;
  };
  return AnchorLexicon({load(AnchorCategory::kFood, food_path),
                        load(AnchorCategory::kStaff, staff_path),
                        load(AnchorCategory::kVenue, venue_path)});
}

std::optional<AnchorCategory> AnchorLexicon::CategoryOf(const std::string& lemma) const {
  for (const auto& set : sets_) {
    if (set.lemmas.count(lemma)) return set.category;
  }
  return std::nullopt;
}

std::set<std::string> ExtractorConfig::LoadDishNames(const std::string& path) {
  std::set<std::string> out;
  for (const auto& entry : ReadListFile(path)) out.insert(CollapseWhitespace(ToLower(entry)));
  return out;
}

// ---------------------------------------------------------------------------
// Mentions

namespace {

bool IsNominal(const Token& t) { return t.upos == "NOUN" || t.upos == "PROPN"; }

// Syntactic head of a span: the first token whose governor lies outside it.
int SpanHead(const Sentence& s, const Mention& m) {
  for (int i = m.start; i <= m.end; ++i) {
    const int h = s[i - 1].head;
    if (h < m.start || h > m.end) return i;
  }
  return m.start;
}

}  // namespace

std::vector<AnchorMention> ResolveAnchorMentions(const ParsedReview& review,
                                                 const AnchorLexicon& anchors,
                                                 std::vector<std::string>* warnings) {
  std::map<std::pair<int, int>, AnchorMention> found;
  for (int si = 0; si < static_cast<int>(review.sentences.size()); ++si) {
    for (const Token& t : review.sentences[si]) {
      if (!IsNominal(t)) continue;
      if (auto c = anchors.CategoryOf(t.lemma)) {
        found[{si, t.index}] = AnchorMention{si, t.index, *c, false};
      }
    }
  }

  for (const CorefChain& chain : review.coref_chains) {
    std::set<AnchorCategory> categories;
    std::vector<std::pair<int, int>> heads;
    for (const Mention& m : chain) {
      const std::pair<int, int> key{m.sentence, SpanHead(review.sentences[m.sentence], m)};
      heads.push_back(key);
      auto it = found.find(key);
      if (it != found.end() && !it->second.via_coref) categories.insert(it->second.category);
    }
    if (categories.empty()) continue;
    if (categories.size() > 1) {
      if (warnings) {
        warnings->push_back("review " + review.review_id +
                            ": coref chain links anchors of different categories; not extended");
      }
      continue;
    }
    for (const auto& key : heads) {
      if (found.count(key)) continue;
      found[key] = AnchorMention{key.first, key.second, *categories.begin(), true};
    }
  }

  std::vector<AnchorMention> out;
  out.reserve(found.size());
  for (const auto& [key, m] : found) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Negation

namespace {

bool IsSubjectRel(std::string_view rel) {
  return rel == "nsubj" || rel == "nsubjpass" || rel == "nsubj:pass" || rel == "csubj" ||
         rel == "expl";
}

bool HasSubject(const Sentence& s, int index) {
  for (const Token& t : s) {
    if (t.head == index && IsSubjectRel(t.deprel)) return true;
  }
  return false;
}

bool IsNegationCue(const Token& t, const ExtractorConfig& config) {
  return config.negation_cues.count(t.lemma) > 0 || config.negation_cues.count(ToLower(t.form)) > 0;
}

// Relations through which a cue word does not scope over its governor.
bool IsNonScopingRel(std::string_view rel) {
  return rel == "conj" || rel == "cc" || rel == "punct" || rel == "intj" || rel == "discourse" ||
         rel == "parataxis" || rel == "vocative";
}

bool HasNegationDependent(const Sentence& s, int index, const ExtractorConfig& config) {
  for (const Token& t : s) {
    if (t.head != index) continue;
    if (t.deprel == "neg" || t.deprel == "advmod:neg") return true;
    if (IsNegationCue(t, config) && !IsNonScopingRel(t.deprel)) return true;
  }
  return false;
}

bool StartsOwnClause(const Sentence& s, const Token& t) {
  return (t.deprel == "conj" || t.deprel == "parataxis") && HasSubject(s, t.index);
}

}  // namespace

bool InNegationScope(const Sentence& sentence, int adjective, const ExtractorConfig& config) {
  int cur = TokenAt(sentence, adjective).index;
  for (int hop = 0;; ++hop) {
    const Token& t = sentence[cur - 1];
    if (HasNegationDependent(sentence, cur, config)) return true;
    if (hop > 0 && IsNegationCue(t, config)) return true;
    if (hop == config.negation_hops || t.head == 0) return false;
    if (StartsOwnClause(sentence, t)) return false;
    cur = t.head;
  }
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

bool IsAdjective(const Token& t) { return t.upos == "ADJ"; }

bool HasCopula(const Sentence& s, int index) {
  for (const Token& t : s) {
    if (t.head == index && t.deprel == "cop") return true;
  }
  return false;
}

struct Candidate {
  int adjective;
  ExtractionPath path;
};

void AddAmodChildren(const Sentence& s, int noun, ExtractionPath path,
                     std::vector<Candidate>& out) {
  for (int c : Children(s, noun)) {
    const Token& t = s[c - 1];
    if (t.deprel == "amod" && IsAdjective(t)) out.push_back({c, path});
  }
}

}  // namespace

std::vector<FramingFeature> ExtractAdjectives(const ParsedReview& review,
                                              const std::vector<AnchorMention>& mentions,
                                              const ExtractorConfig& config) {
  std::set<std::pair<int, int>> anchor_positions;
  for (const auto& m : mentions) anchor_positions.insert({m.sentence, m.token});

  std::vector<FramingFeature> out;
  std::set<std::tuple<int, int, int>> emitted;  // (sentence, anchor, adjective)

  for (const AnchorMention& m : mentions) {
    const Sentence& s = review.sentences.at(m.sentence);
    const Token& anchor = TokenAt(s, m.token);
    std::vector<Candidate> candidates;

    for (int c : Children(s, anchor.index)) {
      const Token& t = s[c - 1];
      if (t.deprel != "amod" || !IsAdjective(t)) continue;
      if (m.category == AnchorCategory::kFood &&
          config.dish_names.count(t.lemma + " " + anchor.lemma)) {
        continue;
      }
      candidates.push_back({c, ExtractionPath::kAttributive});
    }

    if (IsSubjectRel(anchor.deprel) && anchor.deprel != "expl" && anchor.head != 0) {
      const Token& pred = s[anchor.head - 1];
      if (IsAdjective(pred)) candidates.push_back({pred.index, ExtractionPath::kPredicative});
      if (IsNominal(pred) && HasCopula(s, pred.index) &&
          !anchor_positions.count({m.sentence, pred.index})) {
        AddAmodChildren(s, pred.index, ExtractionPath::kPredicative, candidates);
      }
      for (int c : Children(s, pred.index)) {
        const Token& t = s[c - 1];
        if ((t.deprel == "acomp" || t.deprel == "xcomp") && IsAdjective(t)) {
          candidates.push_back({c, ExtractionPath::kPredicative});
        } else if (t.deprel == "attr" && IsNominal(t) &&
                   !anchor_positions.count({m.sentence, t.index})) {
          AddAmodChildren(s, t.index, ExtractionPath::kPredicative, candidates);
        }
      }
    }

    // Negation filter, then conjunct propagation from emitted adjectives.
    std::deque<Candidate> queue(candidates.begin(), candidates.end());
    std::set<int> visited;
    while (!queue.empty()) {
      const Candidate cand = queue.front();
      queue.pop_front();
      if (!visited.insert(cand.adjective).second) continue;
      if (InNegationScope(s, cand.adjective, config)) continue;
      if (emitted.insert({m.sentence, anchor.index, cand.adjective}).second) {
        out.push_back({review.review_id, s[cand.adjective - 1].lemma, m.category, m.sentence,
                       m.via_coref ? ExtractionPath::kCoref : cand.path, cand.adjective,
                       anchor.index});
      }
      for (int c : Children(s, cand.adjective)) {
        const Token& t = s[c - 1];
        if (t.deprel == "conj" && IsAdjective(t) && !HasSubject(s, c)) {
          queue.push_back({c, ExtractionPath::kConjoined});
        }
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const FramingFeature& a, const FramingFeature& b) {
    return std::tie(a.sentence, a.anchor_token, a.token) <
           std::tie(b.sentence, b.anchor_token, b.token);
  });
  return out;
}

std::vector<FramingFeature> ExtractFeatures(const ParsedReview& review,
                                            const AnchorLexicon& anchors,
                                            const ExtractorConfig& config,
                                            std::vector<std::string>* warnings) {
  return ExtractAdjectives(review, ResolveAnchorMentions(review, anchors, warnings), config);
}

// ---------------------------------------------------------------------------
// CSV

void WriteFeaturesCsvHeader(std::ostream& out) {
  CsvWriter(out).WriteRow({"review_id", "lemma", "category", "sentence", "path", "token",
                           "anchor_token"});
}

void WriteFeaturesCsv(std::ostream& out, const std::vector<FramingFeature>& features) {
  CsvWriter w(out);
  for (const auto& f : features) {
    w.WriteRow({f.review_id, f.adjective_lemma, std::string(AnchorCategoryName(f.anchor_category)),
                std::to_string(f.sentence), std::string(ExtractionPathName(f.path)),
                std::to_string(f.token), std::to_string(f.anchor_token)});
  }
}

std::vector<FramingFeature> ReadFeaturesCsv(const std::string& path) {
  const CsvTable csv = CsvTable::ReadFile(path);
  const std::size_t c_id = csv.Column("review_id"), c_lemma = csv.Column("lemma"),
                    c_cat = csv.Column("category"), c_sent = csv.Column("sentence"),
                    c_path = csv.Column("path"), c_tok = csv.Column("token"),
                    c_anchor = csv.Column("anchor_token");
  std::vector<FramingFeature> out;
  out.reserve(csv.size());
  for (const auto& r : csv.rows()) {
    const auto cat = ParseAnchorCategory(r[c_cat]);
    const auto p = ParseExtractionPath(r[c_path]);
    if (!cat || !p) throw InputError(path + ": bad category or path in row for " + r[c_id]);
    out.push_back({r[c_id], r[c_lemma], *cat, std::stoi(r[c_sent]), *p, std::stoi(r[c_tok]),
                   std::stoi(r[c_anchor])});
  }
  return out;
}

}  // namespace foodframe
