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

// Synthetic review generation over a prompt grid.
//
// Flow: ExpandPrompts -> MatchSentimentDistribution -> Generate (raw JSONL,
// append-only) -> Sanitize (disclaimer stripping, separate JSONL) ->
// StratifyByRegion -> WriteSyntheticCorpus, whose output goes through the
// same parse adapter as observed reviews.

#ifndef FOODFRAME_LLM_AUDIT_H_
#define FOODFRAME_LLM_AUDIT_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "foodframe/corpus.h"
#include "foodframe/studies.h"

namespace foodframe {

inline constexpr std::array<std::string_view, 15> kFoci = {
    "staff",       "waitstaff", "employees", "waiter",     "waitress",
    "food",        "drinks",    "main courses", "appetizers", "desserts",
    "place",       "spot",      "atmosphere",   "experience", "ambiance"};

// "$ ($10 and under)" ... "$$$$ ($50 and up)".
std::string PricePointText(int tier);

// Template text with [sentiment], [price point], [cuisine] and [focus]
// placeholders. Templates 1 and 2 take a focus, template 3 does not.
struct PromptTemplate {
  int id = 0;
  std::string text;
  bool has_focus = false;
};

std::vector<PromptTemplate> DefaultTemplates();

struct PromptJob {
  int template_id = 1;
  std::string sentiment;
  int price_tier = 1;
  std::string cuisine;
  std::optional<std::string> focus;

  // "t1|positive|2|thai|food"; stable across runs.
  std::string Id() const;
  nlohmann::json ToJson() const;
  static PromptJob FromJson(const nlohmann::json& j);
};

struct GridConfig {
  std::vector<PromptTemplate> templates = DefaultTemplates();
  std::vector<int> template_ids = {1};
  std::vector<std::string> cuisines;
  std::vector<int> tiers = {1, 2, 3, 4};
  std::vector<std::string> sentiments = {kSentiments.begin(), kSentiments.end()};
  std::vector<std::string> foci = {kFoci.begin(), kFoci.end()};

  // Keys mirror the fields; "template_text" maps id -> custom text.
  static GridConfig FromJson(const nlohmann::json& j);
  const PromptTemplate& Template(int id) const;
};

// Cartesian product in template, cuisine, tier, sentiment, focus order.
// Throws ConfigError on an empty dimension or an unknown template id.
std::vector<PromptJob> ExpandPrompts(const GridConfig& grid);

// Substitutes placeholders verbatim. Throws ConfigError on a bracketed
// placeholder it does not know, or a focus mismatch.
std::string RenderTemplate(const std::string& text, const PromptJob& job);
std::string RenderPrompt(const PromptJob& job, const GridConfig& grid);

struct WeightedJob {
  PromptJob job;
  std::size_t multiplicity = 1;
};

struct SentimentReport {
  std::map<std::string, double> target;
  std::map<std::string, double> realized;
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
};

// Reweights jobs so sentiment shares follow `target` (largest-remainder
// rounding over the original job count). Jobs left with multiplicity 0 are
// dropped. Throws ContractViolation if target does not sum to 1, ConfigError
// if it names a sentiment with no jobs.
std::vector<WeightedJob> MatchSentimentDistribution(const std::vector<PromptJob>& jobs,
                                                    const std::map<std::string, double>& target,
                                                    SentimentReport* report = nullptr);

struct DisclaimerPatterns {
  std::vector<std::regex> disclaimer;  // model self-reference
  // Third-person commentary on the review ("They specifically mention..."),
  // removed only from texts where a disclaimer matched.
  std::vector<std::regex> meta;

  static DisclaimerPatterns Compile(const std::vector<std::string>& disclaimer,
                                    const std::vector<std::string>& meta);
  static DisclaimerPatterns Load(const std::string& disclaimer_path, const std::string& meta_path);
};

struct StripResult {
  std::string clean_text;
  std::vector<std::string> removed;
  bool discarded = false;
};

// Removes whole sentences matching a pattern; whitespace is collapsed.
StripResult StripDisclaimers(const std::string& raw_text, const DisclaimerPatterns& patterns);

std::vector<std::string> SplitSentences(const std::string& text);

struct GeneratedReview {
  std::uint64_t seq = 0;  // position in the expanded request list
  PromptJob job;
  std::size_t sample = 0;  // 0..multiplicity-1
  std::string model_id;
  std::string raw_text;
  std::string clean_text;
  std::string status;  // "ok", "failed", "discarded"
  std::string error;
  std::string created_at;
  std::size_t attempts = 0;
  nlohmann::json request;

  std::string ReviewId() const;  // "<job id>#<sample>"
  nlohmann::json ToJson() const;
  static GeneratedReview FromJson(const nlohmann::json& j);
};

std::vector<GeneratedReview> ReadGeneratedJsonl(const std::string& path);

struct ChatRequest {
  std::string id;  // review id; not sent
  std::string model;
  std::string prompt;
  double temperature = 1.0;
  int max_tokens = 256;
  double top_p = 1.0;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;

  // Chat-completion request body with a single user message.
  nlohmann::json ToJson() const;
};

struct ChatResponse {
  bool ok = false;
  std::string text;
  int http_status = 0;
  bool retryable = false;
  std::string error;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResponse Complete(const ChatRequest& request) = 0;
};

// Deterministic stand-in. The responder sees the request and the 1-based
// attempt number for that request id.
class MockChatClient : public ChatClient {
 public:
  using Responder = std::function<ChatResponse(const ChatRequest&, int attempt)>;

  explicit MockChatClient(Responder responder);
  ChatResponse Complete(const ChatRequest& request) override;
  std::size_t calls() const;

 private:
  Responder responder_;
  mutable std::mutex mu_;
  std::map<std::string, int> attempts_;
  std::size_t calls_ = 0;
};

struct HttpClientConfig {
  std::string url;  // e.g. https://api.openai.com/v1/chat/completions
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_seconds = 60;
};

// Chat-completion endpoint over HTTP(S). Throws ConfigError when the URL is
// malformed or the credential variable is unset.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientConfig config);
  ChatResponse Complete(const ChatRequest& request) override;

 private:
  HttpClientConfig config_;
  std::string origin_;
  std::string path_;
  std::string api_key_;
};

struct GenerateConfig {
  std::string model_id = "gpt-3.5-turbo-0613";
  ChatRequest defaults;  // sampling parameters; model and prompt are filled per job
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{30000};
  std::size_t max_in_flight = 4;
  // Injected for tests.
  std::function<void(std::chrono::milliseconds)> sleep;
  std::function<std::string()> clock;
};

// Issues every (job, sample) request with at most max_in_flight outstanding,
// retrying retryable failures with exponential backoff. Each result is
// appended to `sink` as JSONL once final; a job that exhausts its attempts
// is recorded with status "failed" and the run continues. Results are
// returned in request order.
std::vector<GeneratedReview> Generate(const std::vector<WeightedJob>& jobs,
                                      const GridConfig& grid, ChatClient& client,
                                      const GenerateConfig& config, std::ostream* sink);

// Fills clean_text for "ok" records and marks empty results "discarded".
// Output is sorted by seq, so it does not depend on completion order.
std::vector<GeneratedReview> Sanitize(std::vector<GeneratedReview> raw,
                                      const DisclaimerPatterns& patterns);

// Equal count per region (the smallest region's count), sampled per region
// with a generator seeded from `seed`; input order is preserved. Only "ok"
// records are eligible. Throws InputError naming regions with no reviews
// or cuisines the map does not know.
std::vector<GeneratedReview> StratifyByRegion(const std::vector<GeneratedReview>& reviews,
                                              const CuisineRegionMap& map, std::uint64_t seed);

// Adapter input: one JSON object per line with review_id and text.
void WriteSyntheticCorpus(std::ostream& out, const std::vector<GeneratedReview>& reviews);

// review_id,cuisine,region,sentiment,price_tier,template_id,model_id
void WriteSyntheticMetaCsv(std::ostream& out, const std::vector<GeneratedReview>& reviews,
                           const CuisineRegionMap& map);

struct SyntheticMeta {
  std::string review_id;
  Region region = Region::kUS;
  std::string sentiment;
};
std::vector<SyntheticMeta> ReadSyntheticMetaCsv(const std::string& path);

// Joins metadata with scores; reviews without a score get all-zero counts.
std::vector<SyntheticRecord> ToSyntheticRecords(const std::vector<SyntheticMeta>& meta,
                                                const std::vector<FramingScore>& scores);

}  // namespace foodframe

#endif  // FOODFRAME_LLM_AUDIT_H_
