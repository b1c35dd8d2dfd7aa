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

#include "foodframe/conllu.h"

#include <charconv>
#include <fstream>

#include "foodframe/error.h"
#include "foodframe/text.h"
#include "json.hpp"

namespace foodframe {

using nlohmann::json;

std::size_t ParsedReview::TokenCount() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

// ---------------------------------------------------------------------------
// Coref sidecar

CorefIndex CorefIndex::Read(std::istream& in) {
  CorefIndex index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string id = j.at("review_id").get<std::string>();
      std::vector<CorefChain> chains;
      for (const auto& jc : j.at("chains")) {
        CorefChain chain;
        for (const auto& jm : jc) {
          chain.push_back({jm.at("sent").get<int>(), jm.at("start").get<int>(),
                           jm.at("end").get<int>()});
        }
        chains.push_back(std::move(chain));
      }
      auto& slot = index.chains_[id];
      slot.insert(slot.end(), chains.begin(), chains.end());
    } catch (const json::exception& e) {
      throw InputError("coref sidecar line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return index;
}

CorefIndex CorefIndex::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open coref sidecar: " + path);
  return Read(in);
}

const std::vector<CorefChain>& CorefIndex::ChainsFor(const std::string& review_id) const {
  static const std::vector<CorefChain> kEmpty;
  auto it = chains_.find(review_id);
  return it == chains_.end() ? kEmpty : it->second;
}

// ---------------------------------------------------------------------------
// Tree checks

std::optional<std::string> ValidateTree(const Sentence& sentence) {
  const int n = static_cast<int>(sentence.size());
  int roots = 0;
  for (const Token& t : sentence) {
    if (t.head < 0 || t.head > n) {
      return "token " + std::to_string(t.index) + " has head " + std::to_string(t.head) +
             " outside 0.." + std::to_string(n);
    }
    if (t.head == t.index) return "token " + std::to_string(t.index) + " is its own head";
    if (t.head == 0) ++roots;
  }
  if (roots != 1) return "sentence has " + std::to_string(roots) + " roots";
  // Walk up from each token; a path longer than n means a cycle.
  for (const Token& t : sentence) {
    int cur = t.index;
    int steps = 0;
    while (cur != 0) {
      if (++steps > n) return "head cycle through token " + std::to_string(t.index);
      cur = sentence[cur - 1].head;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reader

namespace {

constexpr std::string_view kReviewIdPrefix = "# review_id";

std::optional<std::string> ReviewIdFromComment(std::string_view line) {
  if (!line.starts_with(kReviewIdPrefix)) return std::nullopt;
  std::string_view rest = line.substr(kReviewIdPrefix.size());
  rest = Trim(rest);
  if (!rest.starts_with('=')) return std::nullopt;
  rest = Trim(rest.substr(1));
  return std::string(rest);
}

bool ParseInt(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

ConlluReader::ConlluReader(std::istream& in, const CorefIndex* coref) : in_(in), coref_(coref) {}

std::optional<ParsedReview> ConlluReader::Next() {
  std::string line;
  while (true) {
    // Locate the next review header.
    if (!pending_) {
      bool warned = false;
      while (true) {
        if (!std::getline(in_, line)) return std::nullopt;
        ++line_no_;
        if (auto id = ReviewIdFromComment(line)) {
          pending_ = Pending{*id, line_no_};
          break;
        }
        const auto body = Trim(line);
        if (!body.empty() && !body.starts_with('#') && !warned) {
          diagnostics_.push_back({"", line_no_, "token line outside any review; skipped", false});
          warned = true;
        }
      }
    }

    ParsedReview review;
    review.review_id = pending_->review_id;
    const std::size_t header_line = pending_->line;
    pending_.reset();

    std::optional<std::string> error;
    std::size_t error_line = 0;
    Sentence current;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto id = ReviewIdFromComment(line)) {
        pending_ = Pending{*id, line_no_};
        break;
      }
      const std::string_view body = Trim(line);
      if (body.empty()) {
        if (!current.empty()) review.sentences.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (body.starts_with('#')) continue;
      if (error) continue;

      const auto fields = Split(line, '\t');
      if (fields.size() != 10) {
        error = "expected 10 tab-separated columns, got " + std::to_string(fields.size());
        error_line = line_no_;
        continue;
      }
      if (fields[0].find_first_of("-.") != std::string::npos) continue;
      Token t;
      if (!ParseInt(fields[0], t.index) || !ParseInt(fields[6], t.head)) {
        error = "non-integer ID or HEAD";
        error_line = line_no_;
        continue;
      }
      if (t.index != static_cast<int>(current.size()) + 1) {
        error = "token id " + fields[0] + " out of sequence";
        error_line = line_no_;
        continue;
      }
      t.form = fields[1];
      t.lemma = ToLower(fields[2] == "_" ? fields[1] : fields[2]);
      t.upos = fields[3];
      t.deprel = ToLower(fields[7]);
      current.push_back(std::move(t));
    }
    if (!current.empty()) review.sentences.push_back(std::move(current));

    if (!error) {
      for (std::size_t s = 0; s < review.sentences.size() && !error; ++s) {
        if (auto msg = ValidateTree(review.sentences[s])) {
          error = "sentence " + std::to_string(s) + ": " + *msg;
          error_line = header_line;
        }
      }
    }
    if (error) {
      diagnostics_.push_back({review.review_id, error_line,
                              "review " + review.review_id + " rejected: " + *error, true});
      continue;
    }
    AttachCoref(review);
    return review;
  }
}

void ConlluReader::AttachCoref(ParsedReview& review) {
  if (coref_ == nullptr) return;
  for (const CorefChain& chain : coref_->ChainsFor(review.review_id)) {
    std::optional<std::string> problem;
    for (const Mention& m : chain) {
      if (m.sentence < 0 || m.sentence >= static_cast<int>(review.sentences.size())) {
        problem = "mention sentence " + std::to_string(m.sentence) + " out of range";
        break;
      }
      const int len = static_cast<int>(review.sentences[m.sentence].size());
      if (m.start < 1 || m.end < m.start || m.end > len) {
        problem = "mention span " + std::to_string(m.start) + ".." + std::to_string(m.end) +
                  " outside sentence " + std::to_string(m.sentence);
        break;
      }
    }
    if (!problem && chain.size() < 2) problem = "chain has fewer than 2 mentions";
    if (problem) {
      diagnostics_.push_back({review.review_id, 0,
                              "review " + review.review_id + ": coref chain dropped: " + *problem,
                              false});
      continue;
    }
    review.coref_chains.push_back(chain);
  }
}

ParsedCorpus ReadConllu(const std::string& conllu_path, const std::string& coref_path) {
  std::ifstream in(conllu_path);
  if (!in) throw InputError("cannot open CoNLL-U file: " + conllu_path);
  std::optional<CorefIndex> coref;
  if (!coref_path.empty()) coref = CorefIndex::Load(coref_path);
  ConlluReader reader(in, coref ? &*coref : nullptr);
  ParsedCorpus corpus;
  while (auto r = reader.Next()) corpus.reviews.push_back(std::move(*r));
  corpus.diagnostics = reader.diagnostics();
  return corpus;
}

void WriteConllu(std::ostream& out, const ParsedReview& review) {
  out << "# review_id = " << review.review_id << '\n';
  for (const Sentence& s : review.sentences) {
    for (const Token& t : s) {
      out << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << "\t_\t_\t"
          << t.head << '\t' << t.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
  if (review.sentences.empty()) out << '\n';
}

void WriteCorefLine(std::ostream& out, const ParsedReview& review) {
  json chains = json::array();
  for (const auto& chain : review.coref_chains) {
    json jc = json::array();
    for (const auto& m : chain) jc.push_back({{"sent", m.sentence}, {"start", m.start}, {"end", m.end}});
    chains.push_back(std::move(jc));
  }
  out << json{{"review_id", review.review_id}, {"chains", chains}}.dump() << '\n';
}

std::vector<int> Children(const Sentence& sentence, int index) {
  if (index < 0 || index > static_cast<int>(sentence.size())) {
    throw ContractViolation("children: token index " + std::to_string(index) + " out of range");
  }
  std::vector<int> out;
  for (const Token& t : sentence) {
    if (t.head == index) out.push_back(t.index);
  }
  return out;
}

const Token& TokenAt(const Sentence& sentence, int index) {
  if (index < 1 || index > static_cast<int>(sentence.size())) {
    throw ContractViolation("token index " + std::to_string(index) + " out of range");
  }
  return sentence[index - 1];
}

}  // namespace foodframe
