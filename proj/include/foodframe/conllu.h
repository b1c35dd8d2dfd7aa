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

// Pre-parsed reviews: CoNLL-U token graphs plus a coreference sidecar.
//
// A review starts at a "# review_id = <id>" comment and owns every sentence
// up to the next such comment. Multiword-token ranges ("3-4") and empty nodes
// ("5.1") are skipped. Lemmas and relation labels are lowercased on read.
//
// The coreference sidecar is JSON lines, one object per review:
//
//   {"review_id": "r1", "chains": [[{"sent": 0, "start": 2, "end": 2}, ...], ...]}
//
// "sent" is the 0-based sentence index within the review; "start" and "end"
// are 1-based token ids (the CoNLL-U ID column), both inclusive.

#ifndef FOODFRAME_CONLLU_H_
#define FOODFRAME_CONLLU_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace foodframe {

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  int head = 0;  // 0 = root
  std::string deprel;

  friend bool operator==(const Token&, const Token&) = default;
};

using Sentence = std::vector<Token>;

struct Mention {
  int sentence = 0;
  int start = 0;
  int end = 0;

  friend bool operator==(const Mention&, const Mention&) = default;
};

using CorefChain = std::vector<Mention>;

struct ParsedReview {
  std::string review_id;
  std::vector<Sentence> sentences;
  std::vector<CorefChain> coref_chains;

  std::size_t TokenCount() const;

  friend bool operator==(const ParsedReview&, const ParsedReview&) = default;
};

struct ParseDiagnostic {
  std::string review_id;
  std::size_t line = 0;
  std::string message;
  bool rejected = false;  // review dropped (vs. a warning)
};

class CorefIndex {
 public:
  static CorefIndex Read(std::istream& in);
  static CorefIndex Load(const std::string& path);

  // Empty when the review has no entry.
  const std::vector<CorefChain>& ChainsFor(const std::string& review_id) const;
  std::size_t size() const { return chains_.size(); }

 private:
  std::unordered_map<std::string, std::vector<CorefChain>> chains_;
};

// Checks head ranges, a single root and acyclicity. Returns an error message
// or nullopt when the sentence is a well-formed tree.
std::optional<std::string> ValidateTree(const Sentence& sentence);

// Streaming reader; single consumer.
class ConlluReader {
 public:
  explicit ConlluReader(std::istream& in, const CorefIndex* coref = nullptr);

  // Next well-formed review in document order; rejected reviews are skipped
  // and reported through diagnostics().
  std::optional<ParsedReview> Next();

  const std::vector<ParseDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  struct Pending {
    std::string review_id;
    std::size_t line = 0;
  };

  bool ReadSentence(Sentence& sentence, std::string& error, std::size_t& error_line);
  void AttachCoref(ParsedReview& review);

  std::istream& in_;
  const CorefIndex* coref_;
  std::optional<Pending> pending_;
  std::size_t line_no_ = 0;
  bool eof_ = false;
  std::vector<ParseDiagnostic> diagnostics_;
};

struct ParsedCorpus {
  std::vector<ParsedReview> reviews;
  std::vector<ParseDiagnostic> diagnostics;
};

// Reads every review from a CoNLL-U file and an optional coref sidecar
// (empty path = none).
ParsedCorpus ReadConllu(const std::string& conllu_path, const std::string& coref_path = {});

void WriteConllu(std::ostream& out, const ParsedReview& review);
void WriteCorefLine(std::ostream& out, const ParsedReview& review);

// Tokens whose head is `index`, in surface order. `index` may be 0 (the
// virtual root); anything outside [0, sentence.size()] is a ContractViolation.
std::vector<int> Children(const Sentence& sentence, int index);

// 1-based token access; ContractViolation when out of range.
const Token& TokenAt(const Sentence& sentence, int index);

}  // namespace foodframe

#endif  // FOODFRAME_CONLLU_H_
