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

#include "foodframe/llm_audit.h"

#include "httplib.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>

#include "foodframe/csv.h"
#include "foodframe/error.h"
#include "foodframe/random.h"
#include "foodframe/text.h"

namespace foodframe {
namespace {

bool IsSentiment(const std::string& s) {
  return std::find(kSentiments.begin(), kSentiments.end(), s) != kSentiments.end();
}

std::string UtcNow() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string PricePointText(int tier) {
  switch (tier) {
    case 1:
      return "$ ($10 and under)";
    case 2:
      return "$$ ($10-$25)";
    case 3:
      return "$$$ ($25-$45)";
    case 4:
      return "$$$$ ($50 and up)";
  }
  throw ConfigError("price tier " + std::to_string(tier) + " out of range 1-4");
}

std::vector<PromptTemplate> DefaultTemplates() {
  return {
      {1,
       "A customer posted the following restaurant review to an online restaurant review "
       "website:<span class='headline' title=\"[sentiment] review about a [price point] "
       "[cuisine] restaurant, focused on the [focus],\">",
       true},
      {2, "Write a [sentiment] review of a [price point] [cuisine] restaurant, focusing on the "
          "[focus]",
       true},
      {3, "Give an example of a [sentiment] review of a [price point] [cuisine] restaurant",
       false},
  };
}

std::string PromptJob::Id() const {
  std::string id = "t" + std::to_string(template_id) + "|" + sentiment + "|" +
                   std::to_string(price_tier) + "|" + cuisine;
  if (focus) id += "|" + *focus;
  return id;
}

nlohmann::json PromptJob::ToJson() const {
  nlohmann::json j = {{"id", Id()},
                      {"template_id", template_id},
                      {"sentiment", sentiment},
                      {"price_tier", price_tier},
                      {"cuisine", cuisine}};
  j["focus"] = focus ? nlohmann::json(*focus) : nlohmann::json(nullptr);
  return j;
}

PromptJob PromptJob::FromJson(const nlohmann::json& j) {
  try {
    PromptJob job;
    job.template_id = j.at("template_id").get<int>();
    job.sentiment = j.at("sentiment").get<std::string>();
    job.price_tier = j.at("price_tier").get<int>();
    job.cuisine = j.at("cuisine").get<std::string>();
    if (j.contains("focus") && !j.at("focus").is_null()) {
      job.focus = j.at("focus").get<std::string>();
    }
    return job;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("prompt job: ") + e.what());
  }
}

GridConfig GridConfig::FromJson(const nlohmann::json& j) {
  GridConfig g;
  try {
    if (j.contains("template_ids")) g.template_ids = j.at("template_ids").get<std::vector<int>>();
    if (j.contains("cuisines")) g.cuisines = j.at("cuisines").get<std::vector<std::string>>();
    if (j.contains("tiers")) g.tiers = j.at("tiers").get<std::vector<int>>();
    if (j.contains("sentiments")) {
      g.sentiments = j.at("sentiments").get<std::vector<std::string>>();
    }
    if (j.contains("foci")) g.foci = j.at("foci").get<std::vector<std::string>>();
    if (j.contains("template_text")) {
      for (const auto& [key, text] : j.at("template_text").items()) {
        const int id = std::stoi(key);
        auto it = std::find_if(g.templates.begin(), g.templates.end(),
                               [id](const PromptTemplate& t) { return t.id == id; });
        if (it == g.templates.end()) throw ConfigError("grid: unknown template id " + key);
        it->text = text.get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid config: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("grid config: template_text keys must be template ids");
  }
  return g;
}

const PromptTemplate& GridConfig::Template(int id) const {
  for (const PromptTemplate& t : templates) {
    if (t.id == id) return t;
  }
  throw ConfigError("grid: unknown template id " + std::to_string(id));
}

std::vector<PromptJob> ExpandPrompts(const GridConfig& grid) {
  if (grid.template_ids.empty()) throw ConfigError("grid: no templates");
  if (grid.cuisines.empty()) throw ConfigError("grid: no cuisines");
  if (grid.tiers.empty()) throw ConfigError("grid: no price tiers");
  if (grid.sentiments.empty()) throw ConfigError("grid: no sentiments");
  for (int tier : grid.tiers) PricePointText(tier);
  for (const std::string& s : grid.sentiments) {
    if (!IsSentiment(s)) throw ConfigError("grid: unknown sentiment '" + s + "'");
  }
  std::vector<PromptJob> jobs;
  for (int id : grid.template_ids) {
    const PromptTemplate& t = grid.Template(id);
    if (t.has_focus && grid.foci.empty()) {
      throw ConfigError("grid: template " + std::to_string(id) + " needs foci");
    }
    for (const std::string& cuisine : grid.cuisines) {
      for (int tier : grid.tiers) {
        for (const std::string& sentiment : grid.sentiments) {
          PromptJob job{id, sentiment, tier, cuisine, std::nullopt};
          if (!t.has_focus) {
            jobs.push_back(job);
            continue;
          }
          for (const std::string& focus : grid.foci) {
            job.focus = focus;
            jobs.push_back(job);
          }
        }
      }
    }
  }
  return jobs;
}

std::string RenderTemplate(const std::string& text, const PromptJob& job) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('[', pos);
    if (open == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    const std::size_t close = text.find(']', open);
    if (close == std::string::npos) throw ConfigError("template: unterminated placeholder");
    out.append(text, pos, open - pos);
    const std::string name = text.substr(open + 1, close - open - 1);
    if (name == "sentiment") {
      out += job.sentiment;
    } else if (name == "price point") {
      out += PricePointText(job.price_tier);
    } else if (name == "cuisine") {
      out += job.cuisine;
    } else if (name == "focus") {
      if (!job.focus) throw ConfigError("template: [focus] used by a job without a focus");
      out += *job.focus;
    } else {
      throw ConfigError("template: unknown placeholder [" + name + "]");
    }
    pos = close + 1;
  }
  return out;
}

std::string RenderPrompt(const PromptJob& job, const GridConfig& grid) {
  const PromptTemplate& t = grid.Template(job.template_id);
  if (t.has_focus != job.focus.has_value()) {
    throw ConfigError("prompt job " + job.Id() + ": focus does not match template " +
                      std::to_string(t.id));
  }
  return RenderTemplate(t.text, job);
}

std::vector<WeightedJob> MatchSentimentDistribution(const std::vector<PromptJob>& jobs,
                                                    const std::map<std::string, double>& target,
                                                    SentimentReport* report) {
  double sum = 0.0;
  for (const auto& [s, share] : target) {
    if (!IsSentiment(s)) throw ConfigError("sentiment target: unknown sentiment '" + s + "'");
    if (share < 0.0) throw ContractViolation("sentiment target: negative share");
    sum += share;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw ContractViolation("sentiment target must sum to 1");

  std::map<std::string, std::vector<std::size_t>> by_sentiment;
  for (std::size_t i = 0; i < jobs.size(); ++i) by_sentiment[jobs[i].sentiment].push_back(i);
  const std::size_t total = jobs.size();

  // Largest remainder: floors first, then the biggest fractional parts.
  struct Share {
    std::string sentiment;
    std::size_t count;
    double remainder;
    std::size_t order;
  };
  std::vector<Share> shares;
  std::size_t assigned = 0;
  for (const auto& [s, share] : target) {
    const double exact = share * static_cast<double>(total);
    const auto floor = static_cast<std::size_t>(std::floor(exact));
    const auto order = static_cast<std::size_t>(
        std::find(kSentiments.begin(), kSentiments.end(), s) - kSentiments.begin());
    shares.push_back({s, floor, exact - static_cast<double>(floor), order});
    assigned += floor;
  }
  std::vector<std::size_t> rank(shares.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (shares[a].remainder != shares[b].remainder) {
      return shares[a].remainder > shares[b].remainder;
    }
    return shares[a].order < shares[b].order;
  });
  for (std::size_t k = 0; assigned < total && k < rank.size(); ++k, ++assigned) {
    ++shares[rank[k]].count;
  }

  std::vector<std::size_t> multiplicity(jobs.size(), 0);
  SentimentReport rep;
  rep.total = 0;
  for (const Share& sh : shares) {
    rep.target[sh.sentiment] = target.at(sh.sentiment);
    rep.counts[sh.sentiment] = sh.count;
    rep.total += sh.count;
    if (sh.count == 0) continue;
    auto it = by_sentiment.find(sh.sentiment);
    if (it == by_sentiment.end()) {
      throw ConfigError("sentiment target: no jobs with sentiment '" + sh.sentiment + "'");
    }
    const std::vector<std::size_t>& idx = it->second;
    const std::size_t base = sh.count / idx.size();
    const std::size_t extra = sh.count % idx.size();
    for (std::size_t k = 0; k < idx.size(); ++k) multiplicity[idx[k]] = base + (k < extra ? 1 : 0);
  }
  for (const auto& [s, c] : rep.counts) {
    rep.realized[s] = rep.total ? static_cast<double>(c) / static_cast<double>(rep.total) : 0.0;
  }

  std::vector<WeightedJob> out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (multiplicity[i] > 0) out.push_back({jobs[i], multiplicity[i]});
  }
  if (report != nullptr) *report = std::move(rep);
  return out;
}

DisclaimerPatterns DisclaimerPatterns::Compile(const std::vector<std::string>& disclaimer,
                                               const std::vector<std::string>& meta) {
  DisclaimerPatterns p;
  p.disclaimer = CompilePatterns(disclaimer);
  p.meta = CompilePatterns(meta);
  return p;
}

DisclaimerPatterns DisclaimerPatterns::Load(const std::string& disclaimer_path,
                                            const std::string& meta_path) {
  return Compile(ReadListFile(disclaimer_path), ReadListFile(meta_path));
}

std::vector<std::string> SplitSentences(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  const auto flush = [&]() {
    const std::string_view t = Trim(current);
    if (!t.empty()) out.emplace_back(t);
    current.clear();
  };
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      flush();
      continue;
    }
    current += c;
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?' ||
                               text[j] == '"' || text[j] == '\'' || text[j] == ')')) {
      current += text[j];
      ++j;
    }
    i = j - 1;
    if (j == text.size() || is_space(text[j])) flush();
  }
  flush();
  return out;
}

StripResult StripDisclaimers(const std::string& raw_text, const DisclaimerPatterns& patterns) {
  StripResult r;
  std::string text = raw_text;
  bool any_disclaimer = false;
  // A second pass catches a match created by joining sentences.
  for (int pass = 0; pass < 2 && AnyMatch(patterns.disclaimer, text); ++pass) {
    any_disclaimer = true;
    std::string kept;
    for (const std::string& sentence : SplitSentences(text)) {
      if (AnyMatch(patterns.disclaimer, sentence) || AnyMatch(patterns.meta, sentence)) {
        r.removed.push_back(sentence);
        continue;
      }
      if (!kept.empty()) kept += ' ';
      kept += sentence;
    }
    text = CollapseWhitespace(kept);
  }
  if (any_disclaimer && AnyMatch(patterns.disclaimer, text)) {
    r.removed.push_back(text);
    text.clear();
  }
  r.clean_text = any_disclaimer ? text : raw_text;
  r.discarded = Trim(r.clean_text).empty();
  return r;
}

std::string GeneratedReview::ReviewId() const { return job.Id() + "#" + std::to_string(sample); }

nlohmann::json GeneratedReview::ToJson() const {
  return {{"seq", seq},
          {"review_id", ReviewId()},
          {"job", job.ToJson()},
          {"sample", sample},
          {"model_id", model_id},
          {"raw_text", raw_text},
          {"clean_text", clean_text},
          {"status", status},
          {"error", error},
          {"created_at", created_at},
          {"attempts", attempts},
          {"request", request}};
}

GeneratedReview GeneratedReview::FromJson(const nlohmann::json& j) {
  try {
    GeneratedReview g;
    g.seq = j.at("seq").get<std::uint64_t>();
    g.job = PromptJob::FromJson(j.at("job"));
    g.sample = j.value("sample", std::size_t{0});
    g.model_id = j.at("model_id").get<std::string>();
    g.raw_text = j.at("raw_text").get<std::string>();
    g.clean_text = j.value("clean_text", std::string());
    g.status = j.at("status").get<std::string>();
    g.error = j.value("error", std::string());
    g.created_at = j.value("created_at", std::string());
    g.attempts = j.value("attempts", std::size_t{0});
    g.request = j.value("request", nlohmann::json::object());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("generated review: ") + e.what());
  }
}

std::vector<GeneratedReview> ReadGeneratedJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<GeneratedReview> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(GeneratedReview::FromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

nlohmann::json ChatRequest::ToJson() const {
  return {{"model", model},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
          {"temperature", temperature},
          {"max_tokens", max_tokens},
          {"top_p", top_p},
          {"frequency_penalty", frequency_penalty},
          {"presence_penalty", presence_penalty}};
}

MockChatClient::MockChatClient(Responder responder) : responder_(std::move(responder)) {}

ChatResponse MockChatClient::Complete(const ChatRequest& request) {
  int attempt = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    attempt = ++attempts_[request.id];
    ++calls_;
  }
  return responder_(request, attempt);
}

std::size_t MockChatClient::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, kUrl)) {
    throw ConfigError("chat endpoint: malformed url '" + config_.url + "'");
  }
  origin_ = m[1];
  path_ = m[2].matched ? std::string(m[2]) : "/";
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigError("chat endpoint: environment variable " + config_.api_key_env +
                        " is not set");
    }
    api_key_ = key;
  }
}

ChatResponse HttpChatClient::Complete(const ChatRequest& request) {
  httplib::Client cli(origin_);
  cli.set_connection_timeout(config_.timeout_seconds, 0);
  cli.set_read_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  ChatResponse r;
  auto res = cli.Post(path_, headers, request.ToJson().dump(), "application/json");
  if (!res) {
    r.retryable = true;
    r.error = "transport: " + httplib::to_string(res.error());
    return r;
  }
  r.http_status = res->status;
  if (res->status != 200) {
    r.retryable = res->status == 429 || res->status >= 500;
    r.error = "http " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
    return r;
  }
  try {
    const auto body = nlohmann::json::parse(res->body);
    r.text = body.at("choices").at(0).at("message").at("content").get<std::string>();
    r.ok = true;
  } catch (const nlohmann::json::exception& e) {
    r.error = std::string("malformed response: ") + e.what();
  }
  return r;
}

std::vector<GeneratedReview> Generate(const std::vector<WeightedJob>& jobs,
                                      const GridConfig& grid, ChatClient& client,
                                      const GenerateConfig& config, std::ostream* sink) {
  std::vector<GeneratedReview> results;
  for (const WeightedJob& wj : jobs) {
    const std::string prompt = RenderPrompt(wj.job, grid);
    for (std::size_t s = 0; s < wj.multiplicity; ++s) {
      GeneratedReview g;
      g.seq = results.size();
      g.job = wj.job;
      g.sample = s;
      g.model_id = config.model_id;
      ChatRequest req = config.defaults;
      req.id = g.ReviewId();
      req.model = config.model_id;
      req.prompt = prompt;
      g.request = req.ToJson();
      results.push_back(std::move(g));
    }
  }
  if (config.max_attempts < 1) throw ConfigError("generate: max_attempts must be >= 1");

  const auto sleep = config.sleep ? config.sleep
                                  : [](std::chrono::milliseconds d) {
                                      std::this_thread::sleep_for(d);
                                    };
  const auto clock = config.clock ? config.clock : UtcNow;
  std::mutex sink_mu;
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    for (std::size_t i = next++; i < results.size(); i = next++) {
      GeneratedReview& g = results[i];
      ChatRequest req = config.defaults;
      req.id = g.ReviewId();
      req.model = config.model_id;
      req.prompt = g.request.at("messages").at(0).at("content").get<std::string>();
      std::chrono::milliseconds backoff = config.initial_backoff;
      for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
        g.attempts = static_cast<std::size_t>(attempt);
        ChatResponse resp;
        try {
          resp = client.Complete(req);
        } catch (const std::exception& e) {
          resp.retryable = true;
          resp.error = e.what();
        }
        if (resp.ok) {
          g.status = "ok";
          g.raw_text = resp.text;
          g.error.clear();
          break;
        }
        g.status = "failed";
        g.error = resp.error;
        if (!resp.retryable || attempt == config.max_attempts) break;
        sleep(backoff);
        backoff = std::min(backoff * 2, config.max_backoff);
      }
      g.created_at = clock();
      if (sink != nullptr) {
        const std::string line = g.ToJson().dump();
        std::lock_guard<std::mutex> lock(sink_mu);
        *sink << line << '\n';
        sink->flush();
      }
    }
  };

  const std::size_t width = std::max<std::size_t>(1, std::min(config.max_in_flight,
                                                              results.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < width; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return results;
}

std::vector<GeneratedReview> Sanitize(std::vector<GeneratedReview> raw,
                                      const DisclaimerPatterns& patterns) {
  std::sort(raw.begin(), raw.end(),
            [](const GeneratedReview& a, const GeneratedReview& b) { return a.seq < b.seq; });
  for (GeneratedReview& g : raw) {
    if (g.status != "ok") {
      g.clean_text.clear();
      continue;
    }
    const StripResult r = StripDisclaimers(g.raw_text, patterns);
    g.clean_text = r.clean_text;
    if (r.discarded) g.status = "discarded";
  }
  return raw;
}

std::vector<GeneratedReview> StratifyByRegion(const std::vector<GeneratedReview>& reviews,
                                              const CuisineRegionMap& map, std::uint64_t seed) {
  std::map<Region, std::vector<std::size_t>> by_region;
  std::set<std::string> unknown;
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    if (reviews[i].status != "ok") continue;
    const auto region = map.RegionOf(NormalizeCategory(reviews[i].job.cuisine));
    if (!region) {
      unknown.insert(reviews[i].job.cuisine);
      continue;
    }
    by_region[*region].push_back(i);
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& c : unknown) list += (list.empty() ? "" : ", ") + c;
    throw InputError("stratify: cuisines without a region: " + list);
  }
  std::string missing;
  for (Region r : kAllRegions) {
    if (by_region[r].empty()) missing += (missing.empty() ? "" : ", ") + std::string(RegionName(r));
  }
  if (!missing.empty()) throw InputError("stratify: no reviews for regions: " + missing);

  std::size_t quota = reviews.size();
  for (Region r : kAllRegions) quota = std::min(quota, by_region[r].size());
  std::mt19937_64 rng(seed);
  std::vector<bool> keep(reviews.size(), false);
  for (Region r : kAllRegions) {
    const auto& idx = by_region[r];
    for (std::size_t k : SampleIndices(idx.size(), quota, rng)) keep[idx[k]] = true;
  }
  std::vector<GeneratedReview> out;
  out.reserve(quota * kAllRegions.size());
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    if (keep[i]) out.push_back(reviews[i]);
  }
  return out;
}

void WriteSyntheticCorpus(std::ostream& out, const std::vector<GeneratedReview>& reviews) {
  for (const GeneratedReview& g : reviews) {
    out << nlohmann::json{{"review_id", g.ReviewId()}, {"text", g.clean_text}}.dump() << '\n';
  }
}

void WriteSyntheticMetaCsv(std::ostream& out, const std::vector<GeneratedReview>& reviews,
                           const CuisineRegionMap& map) {
  CsvWriter w(out);
  w.WriteRow({"review_id", "cuisine", "region", "sentiment", "price_tier", "template_id",
              "model_id"});
  for (const GeneratedReview& g : reviews) {
    const auto region = map.RegionOf(NormalizeCategory(g.job.cuisine));
    if (!region) throw InputError("synthetic meta: cuisine without region: " + g.job.cuisine);
    w.WriteRow({g.ReviewId(), g.job.cuisine, std::string(RegionName(*region)), g.job.sentiment,
                std::to_string(g.job.price_tier), std::to_string(g.job.template_id),
                g.model_id});
  }
}

std::vector<SyntheticMeta> ReadSyntheticMetaCsv(const std::string& path) {
  const CsvTable t = CsvTable::ReadFile(path);
  const std::size_t id = t.Column("review_id");
  const std::size_t region = t.Column("region");
  const std::size_t sentiment = t.Column("sentiment");
  std::vector<SyntheticMeta> out;
  for (const CsvRow& row : t.rows()) {
    const auto r = ParseRegion(row[region]);
    if (!r) throw InputError(path + ": unknown region '" + row[region] + "'");
    out.push_back({row[id], *r, row[sentiment]});
  }
  return out;
}

std::vector<SyntheticRecord> ToSyntheticRecords(const std::vector<SyntheticMeta>& meta,
                                                const std::vector<FramingScore>& scores) {
  std::unordered_map<std::string, const FramingScore*> score_of;
  for (const FramingScore& s : scores) score_of[s.review_id] = &s;
  std::vector<SyntheticRecord> out;
  out.reserve(meta.size());
  for (const SyntheticMeta& m : meta) {
    SyntheticRecord r;
    r.review_id = m.review_id;
    r.region = m.region;
    r.sentiment = m.sentiment;
    if (auto it = score_of.find(m.review_id); it != score_of.end()) {
      r.score = *it->second;
    } else {
      r.score.review_id = m.review_id;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace foodframe
