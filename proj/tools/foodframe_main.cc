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

// foodframe: command-line driver for the framing-analysis pipeline.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
// 3 missing or malformed input.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "foodframe/error.h"
#include "foodframe/pipeline.h"

namespace {

using foodframe::AuditStep;
using foodframe::PipelineConfig;

int Fail(int code, const std::string& kind, const std::string& what) {
  std::cerr << "foodframe: " << kind << ": " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Framing analysis of restaurant reviews"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "pipeline config (JSON)")->required();

  std::optional<std::size_t> sample;
  std::uint64_t sample_seed = 0;
  auto* ingest = app.add_subcommand("ingest", "filter businesses and reviews, link census");
  ingest->add_option("--sample", sample, "keep a random subset of N reviews");
  ingest->add_option("--seed", sample_seed, "seed for --sample");

  bool synthetic = false;
  auto* extract = app.add_subcommand("extract", "extract framing features from parses");
  auto* score = app.add_subcommand("score", "score reviews against frame lexicons");
  auto* logodds = app.add_subcommand("logodds", "weighted log-odds per frame and region");
  for (auto* sub : {extract, score, logodds}) {
    sub->add_flag("--synthetic", synthetic, "operate on the generated-review corpus");
  }
  auto* regress = app.add_subcommand("regress", "fit the configured studies");

  bool mock = false;
  std::string step = "all";
  auto* audit = app.add_subcommand("audit", "generate, sanitize and stratify model reviews");
  audit->add_flag("--mock", mock, "use the canned offline responder instead of the endpoint");
  audit->add_option("--step", step, "generate|sanitize|stratify|all")
      ->check(CLI::IsMember({"generate", "sanitize", "stratify", "all"}));

  auto* report = app.add_subcommand("report", "emit table and plot data files");
  auto* run = app.add_subcommand("run", "ingest through report on the observed corpus");

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig config = PipelineConfig::Load(config_path);
    std::ostream& log = std::cerr;
    if (ingest->parsed() || run->parsed()) {
      foodframe::IngestOptions opts;
      opts.sample = sample;
      opts.seed = sample_seed;
      foodframe::RunIngest(config, opts, log);
    }
    if (extract->parsed() || run->parsed()) foodframe::RunExtract(config, synthetic, log);
    if (score->parsed() || run->parsed()) foodframe::RunScore(config, synthetic, log);
    if (logodds->parsed() || run->parsed()) foodframe::RunLogOdds(config, synthetic, log);
    if (regress->parsed() || run->parsed()) foodframe::RunRegress(config, log);
    if (audit->parsed()) {
      static const std::map<std::string, AuditStep> kSteps = {{"generate", AuditStep::kGenerate},
                                                              {"sanitize", AuditStep::kSanitize},
                                                              {"stratify", AuditStep::kStratify},
                                                              {"all", AuditStep::kAll}};
      foodframe::MockChatClient mock_client(foodframe::MockReviewResponse);
      foodframe::RunAudit(config, kSteps.at(step), mock ? &mock_client : nullptr, log);
    }
    if (report->parsed() || run->parsed()) foodframe::RunReport(config, log);
  } catch (const foodframe::ConfigError& e) {
    return Fail(2, "config error", e.what());
  } catch (const foodframe::InputError& e) {
    return Fail(3, "input error", e.what());
  } catch (const std::exception& e) {
    return Fail(1, "error", e.what());
  }
  return 0;
}
