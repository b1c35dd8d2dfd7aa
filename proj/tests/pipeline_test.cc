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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "foodframe/error.h"
#include "foodframe/llm_audit.h"
#include "foodframe/pipeline.h"
#include "foodframe/text.h"
#include "json.hpp"
#include "test_util.h"

namespace foodframe {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Copy of the pipeline fixture in a scratch directory.
class Workspace {
 public:
  Workspace() {
    fs::copy(testing::FixturePath("pipeline"), dir_.path(), fs::copy_options::recursive);
  }
  fs::path operator/(const std::string& name) const { return dir_ / name; }
  const fs::path& path() const { return dir_.path(); }

  // Runs the CLI from the workspace; returns the exit status.
  int Cli(const std::string& args, const std::string& config = "config.json") const {
    const std::string cmd = "cd '" + dir_.path().string() + "' && '" FOODFRAME_CLI "' -c " +
                            config + " " + args + " >>cli.log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  json Config() const { return json::parse(testing::Slurp(dir_ / "config.json")); }
  void WriteConfig(const json& j, const std::string& name = "config.json") const {
    testing::WriteText(dir_ / name, j.dump(2));
  }

 private:
  testing::TempDir dir_{"pipeline"};
};

TEST(ConfigTest, ParsesAndResolvesPaths) {
  Workspace ws;
  const auto c = PipelineConfig::Load((ws / "config.json").string());
  EXPECT_EQ(c.output_dir, ws.path() / "out");
  EXPECT_EQ(c.Input("census"), ws.path() / "census.csv");
  EXPECT_EQ(c.seed, 13u);
  EXPECT_EQ(c.studies.size(), 4u);
  EXPECT_EQ(c.regression.min_n, 30u);
  EXPECT_EQ(c.Resource("lexicons").filename(), "lexicons.txt");
  EXPECT_FALSE(c.OptionalInput("synthetic_parses"));
  EXPECT_THROW(c.Input("synthetic_parses"), InputError);
}

TEST(ConfigTest, Errors) {
  EXPECT_THROW(PipelineConfig::FromJson(json::object(), "/tmp"), ConfigError);
  EXPECT_THROW(PipelineConfig::FromJson(json{{"output_dir", "o"}, {"studies", {"study9"}}}, "/tmp"),
               ConfigError);
  EXPECT_THROW(PipelineConfig::FromJson(json{{"output_dir", 5}}, "/tmp"), ConfigError);
  EXPECT_THROW(PipelineConfig::Load("/nonexistent/config.json"), ConfigError);
}

TEST(CliTest, RunProducesArtifactsAndManifests) {
  Workspace ws;
  ASSERT_EQ(ws.Cli("run"), 0) << testing::Slurp(ws / "cli.log");
  const fs::path out = ws / "out";
  for (const char* f : {"businesses.csv", "reviews.csv", "neighborhoods.csv", "features.csv",
                        "scores.csv", "matches.csv", "logodds_features.csv", "regression.csv",
                        "regression.json", "wald.csv", "report/summary.json",
                        "report/coef_study1a.csv", "report/top_othering.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }

  const auto drops = json::parse(testing::Slurp(out / "drop_report.json"));
  for (const char* table : {"businesses", "reviews"}) {
    std::size_t dropped = 0;
    for (const auto& [reason, n] : drops[table]["dropped"].items()) dropped += n.get<std::size_t>();
    EXPECT_EQ(drops[table]["input"].get<std::size_t>(),
              drops[table]["retained"].get<std::size_t>() + dropped)
        << table;
  }
  EXPECT_EQ(drops["businesses"]["retained"], 12);
  EXPECT_EQ(drops["reviews"]["retained"], 51);
  EXPECT_EQ(drops["nonlocal_reviews"], 2);
  EXPECT_EQ(drops["businesses"]["dropped"]["chain"], 5);
  EXPECT_EQ(drops["businesses"]["dropped"]["multi_region"], 1);

  for (const char* stage : {"ingest", "extract", "score", "logodds", "regress", "report"}) {
    const auto m = json::parse(testing::Slurp(out / (std::string(stage) + "_manifest.json")));
    EXPECT_EQ(m["stage"], stage);
    EXPECT_FALSE(m["outputs"].empty()) << stage;
    for (const auto& o : m["outputs"]) {
      EXPECT_EQ(o["sha256"], Sha256File(out / o["path"].get<std::string>())) << stage;
    }
    for (const auto& i : m["inputs"]) {
      EXPECT_EQ(i["sha256"], Sha256File(ws.path() / i["path"].get<std::string>())) << stage;
    }
  }
  // Empty parse r051 is a scored review with all-zero counts.
  const std::string scores = testing::Slurp(out / "scores.csv");
  EXPECT_NE(scores.find("r051,0,0,0,0,0,0,0,0,0,0"), std::string::npos);
  EXPECT_EQ(Manifest::CountRows(out / "scores.csv"), 51u);
}

TEST(CliTest, DeterministicAcrossRuns) {
  Workspace ws;
  auto second = ws.Config();
  second["output_dir"] = "out2";
  ws.WriteConfig(second, "config2.json");
  ASSERT_EQ(ws.Cli("run"), 0);
  ASSERT_EQ(ws.Cli("run", "config2.json"), 0);
  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(ws / "out")) {
    if (e.path().extension() != ".csv") continue;
    const auto rel = fs::relative(e.path(), ws / "out");
    EXPECT_EQ(testing::Slurp(e.path()), testing::Slurp(ws / "out2" / rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 15u);
}

TEST(CliTest, ExitCodes) {
  Workspace ws;
  EXPECT_EQ(ws.Cli("regress"), 3);  // nothing ingested or scored yet
  EXPECT_NE(testing::Slurp(ws / "cli.log").find("missing input"), std::string::npos);
  EXPECT_EQ(ws.Cli("run", "nope.json"), 2);
  auto bad = ws.Config();
  bad["studies"] = {"study7"};
  ws.WriteConfig(bad, "bad.json");
  EXPECT_EQ(ws.Cli("run", "bad.json"), 2);
  auto missing = ws.Config();
  missing["inputs"]["census"] = "gone.csv";
  ws.WriteConfig(missing, "missing.json");
  EXPECT_EQ(ws.Cli("ingest", "missing.json"), 3);
}

TEST(CliTest, SampleIsSeeded) {
  Workspace ws;
  ASSERT_EQ(ws.Cli("ingest --sample 20 --seed 4"), 0);
  const std::string a = testing::Slurp(ws / "out" / "reviews.csv");
  ASSERT_EQ(ws.Cli("ingest --sample 20 --seed 4"), 0);
  EXPECT_EQ(a, testing::Slurp(ws / "out" / "reviews.csv"));
  EXPECT_EQ(Manifest::CountRows(ws / "out" / "reviews.csv"), 20u);
}

// Stand-in for the parse adapter: one sentence per review, every token
// attached to the first, except "NOUN was/were ADJ" spans, which get the UD
// copular analysis (the adjective heads nsubj and cop).
void FakeAdapter(const fs::path& jsonl, const fs::path& conllu) {
  std::ifstream in(jsonl);
  std::ofstream out(conllu);
  std::string line;
  while (std::getline(in, line)) {
    const auto j = json::parse(line);
    ParsedReview r;
    r.review_id = j["review_id"];
    std::istringstream words(j["text"].get<std::string>());
    Sentence s;
    std::string w;
    while (words >> w) {
      const int id = static_cast<int>(s.size()) + 1;
      std::string lemma = ToLower(w);
      while (!lemma.empty() && std::ispunct(static_cast<unsigned char>(lemma.back()))) lemma.pop_back();
      s.push_back({id, w, lemma, "X", id == 1 ? 0 : 1, id == 1 ? "root" : "dep"});
    }
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if ((s[i].lemma != "was" && s[i].lemma != "were") || i < 2) continue;
      Token& noun = s[i - 1];
      Token& adj = s[i + 1];
      noun.upos = "NOUN";
      noun.head = adj.index;
      noun.deprel = "nsubj";
      s[i].head = adj.index;
      s[i].deprel = "cop";
      adj.upos = "ADJ";
      adj.deprel = "parataxis";
    }
    if (!s.empty()) r.sentences.push_back(s);
    WriteConllu(out, r);
  }
}

TEST(CliTest, MockAuditAndSyntheticFlow) {
  Workspace ws;
  auto cfg = ws.Config();
  cfg["audit"] = {{"grid", {{"cuisines", {"southern", "italian", "mexican", "thai", "caribbean"}},
                            {"template_ids", {3}}}},
                  {"seed", 5}};
  cfg["inputs"]["synthetic_parses"] = "out/synthetic.conllu";
  cfg["studies"] = {"study3"};
  ws.WriteConfig(cfg);
  ASSERT_EQ(ws.Cli("audit --mock"), 0) << testing::Slurp(ws / "cli.log");
  const fs::path out = ws / "out";
  const auto report = json::parse(testing::Slurp(out / "audit_report.json"));
  const auto meta = ReadSyntheticMetaCsv((out / "synthetic_meta.csv").string());
  std::map<Region, std::size_t> counts;
  for (const auto& m : meta) counts[m.region]++;
  ASSERT_EQ(counts.size(), 4u);
  for (const auto& [r, n] : counts) EXPECT_EQ(n, 20u) << RegionName(r);

  for (const auto& g : ReadGeneratedJsonl((out / "audit_sanitized.jsonl").string())) {
    EXPECT_EQ(g.clean_text.find("As an AI"), std::string::npos);
    EXPECT_EQ(g.clean_text.find("this customer"), std::string::npos);
  }
  // Raw log is append-only: a second generate doubles it.
  const auto raw_lines = Manifest::CountRows(out / "audit_raw.jsonl");
  ASSERT_EQ(ws.Cli("audit --mock --step generate"), 0);
  EXPECT_EQ(Manifest::CountRows(out / "audit_raw.jsonl"), 2 * raw_lines);

  FakeAdapter(out / "synthetic_reviews.jsonl", out / "synthetic.conllu");
  ASSERT_EQ(ws.Cli("extract --synthetic"), 0) << testing::Slurp(ws / "cli.log");
  ASSERT_EQ(ws.Cli("score --synthetic"), 0);
  EXPECT_EQ(Manifest::CountRows(out / "synthetic_scores.csv"), meta.size());
  ASSERT_EQ(ws.Cli("regress"), 0) << testing::Slurp(ws / "cli.log");
  const std::string features = testing::Slurp(out / "synthetic_features.csv");
  EXPECT_NE(features.find(",authentic,FOOD,"), std::string::npos);
  const std::string reg = testing::Slurp(out / "regression.csv");
  EXPECT_NE(reg.find("study3,immigrant:authenticity"), std::string::npos)
      << testing::Slurp(ws / "cli.log");
}

TEST(ManifestTest, CountRows) {
  testing::TempDir dir;
  testing::WriteText(dir / "a.csv", "h1,h2\n1,2\n3,4\n");
  testing::WriteText(dir / "b.jsonl", "{}\n{}\n{}\n");
  testing::WriteText(dir / "c.conllu", "# review_id = a\n1\tx\n\n# review_id = b\n\n");
  EXPECT_EQ(Manifest::CountRows(dir / "a.csv"), 2u);
  EXPECT_EQ(Manifest::CountRows(dir / "b.jsonl"), 3u);
  EXPECT_EQ(Manifest::CountRows(dir / "c.conllu"), 2u);
  // Known digest of "abc".
  testing::WriteText(dir / "abc", "abc");
  EXPECT_EQ(Sha256File(dir / "abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace foodframe
