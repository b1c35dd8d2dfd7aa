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

// Pipeline stages behind the foodframe CLI. Every stage reads its inputs
// from the config or from earlier stages' artifacts in the output
// directory, writes flat files, and finishes with <stage>_manifest.json
// listing input and output hashes and row counts.
//
// Artifacts (output directory):
//   ingest   businesses.csv reviews.csv neighborhoods.csv retained_reviews.jsonl
//            drop_report.json corpus.bin
//   extract  features.csv extract_diagnostics.json      (synthetic_ prefix with --synthetic)
//   score    scores.csv matches.csv                      (same)
//   logodds  logodds_<frame>.csv logodds_features.csv    (same)
//   regress  regression.csv regression.json wald.csv
//   audit    audit_raw.jsonl audit_sanitized.jsonl synthetic_reviews.jsonl
//            synthetic_meta.csv audit_report.json
//   report   report/*.csv report/summary.json

#ifndef FOODFRAME_PIPELINE_H_
#define FOODFRAME_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "foodframe/llm_audit.h"
#include "foodframe/studies.h"

namespace foodframe {

struct AuditSettings {
  GridConfig grid;
  std::map<std::string, double> sentiment_target;  // empty = one review per job
  GenerateConfig generate;
  HttpClientConfig endpoint;
  std::uint64_t seed = 0;
};

struct PipelineConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  std::map<std::string, std::filesystem::path> inputs;     // corpus data
  std::map<std::string, std::filesystem::path> resources;  // lexicons, patterns, maps
  std::vector<StudyKind> studies;
  StudyOptions regression;
  std::size_t top_k = 10;
  double z_min = 2.0;
  AuditSettings audit;
  nlohmann::json echo;  // the config as read, for manifests

  static PipelineConfig FromJson(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static PipelineConfig Load(const std::string& path);

  // Resolved path of a configured input; throws InputError naming the key
  // when it is not configured.
  std::filesystem::path Input(const std::string& key) const;
  std::optional<std::filesystem::path> OptionalInput(const std::string& key) const;
  // Configured resource, else the shipped data file.
  std::filesystem::path Resource(const std::string& key) const;
  std::filesystem::path Output(const std::string& name) const;
};

// Directory holding the shipped data files.
std::filesystem::path DataDir();

std::string Sha256File(const std::filesystem::path& path);

class Manifest {
 public:
  Manifest(std::string stage, const PipelineConfig& config);

  void AddInput(const std::string& name, const std::filesystem::path& path);
  void AddOutput(const std::filesystem::path& path);
  void Note(const std::string& key, nlohmann::json value);
  // Writes <output_dir>/<stage>_manifest.json.
  void Write() const;

  static std::size_t CountRows(const std::filesystem::path& path);

 private:
  std::string stage_;
  const PipelineConfig& config_;
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json notes_ = nlohmann::json::object();
};

struct IngestOptions {
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
};

enum class AuditStep { kGenerate, kSanitize, kStratify, kAll };

// Each stage throws ConfigError or InputError on bad configuration or a
// missing artifact; the message names what is missing.
void RunIngest(const PipelineConfig& config, const IngestOptions& options, std::ostream& log);
void RunExtract(const PipelineConfig& config, bool synthetic, std::ostream& log);
void RunScore(const PipelineConfig& config, bool synthetic, std::ostream& log);
void RunLogOdds(const PipelineConfig& config, bool synthetic, std::ostream& log);
void RunRegress(const PipelineConfig& config, std::ostream& log);
// `client` overrides the configured HTTP endpoint (tests, --mock).
void RunAudit(const PipelineConfig& config, AuditStep step, ChatClient* client,
              std::ostream& log);
void RunReport(const PipelineConfig& config, std::ostream& log);

// Canned offline responder used by `audit --mock`.
ChatResponse MockReviewResponse(const ChatRequest& request, int attempt);

}  // namespace foodframe

#endif  // FOODFRAME_PIPELINE_H_
