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

#include "foodframe/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "foodframe/cache.h"
#include "foodframe/census.h"
#include "foodframe/conllu.h"
#include "foodframe/corpus.h"
#include "foodframe/csv.h"
#include "foodframe/error.h"
#include "foodframe/extract.h"
#include "foodframe/lexicon.h"
#include "foodframe/log_odds.h"
#include "foodframe/text.h"

#ifndef FOODFRAME_DEFAULT_DATA_DIR
#define FOODFRAME_DEFAULT_DATA_DIR "data"
#endif

namespace foodframe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, std::string> kResourceFiles = {
    {"cuisine_regions", "cuisine_regions.json"},
    {"filters", "filters.json"},
    {"lexicons", "lexicons.txt"},
    {"anchors_food", "anchors_food.txt"},
    {"anchors_staff", "anchors_staff.txt"},
    {"anchors_venue", "anchors_venue.txt"},
    {"dish_names", "dish_names.txt"},
    {"nonlocal_patterns", "nonlocal_patterns.txt"},
    {"disclaimer_patterns", "disclaimer_patterns.txt"},
    {"meta_patterns", "meta_patterns.txt"},
};

const std::set<std::string> kInputKeys = {"businesses", "reviews",          "census",
                                          "parses",     "coref",            "synthetic_parses",
                                          "synthetic_coref"};

void RequireFile(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) {
    throw InputError("missing input: " + what + " (" + path.string() + ")");
  }
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

json ReadJsonFile(const fs::path& path) {
  try {
    return json::parse(ReadFile(path.string()));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string Prefix(bool synthetic) { return synthetic ? "synthetic_" : ""; }

CuisineRegionMap LoadRegionMap(const PipelineConfig& config) {
  const fs::path p = config.Resource("cuisine_regions");
  RequireFile(p, "cuisine region map");
  return CuisineRegionMap::Load(p.string());
}

// Review ids a stage should restrict itself to, when known.
std::optional<std::unordered_set<std::string>> RetainedIds(const PipelineConfig& config,
                                                           bool synthetic) {
  const fs::path p = synthetic ? config.Output("synthetic_meta.csv") : config.Output("reviews.csv");
  if (!fs::is_regular_file(p)) return std::nullopt;
  const CsvTable t = CsvTable::ReadFile(p.string());
  const std::size_t col = t.Column("review_id");
  std::unordered_set<std::string> ids;
  for (const CsvRow& row : t.rows()) ids.insert(row[col]);
  return ids;
}

// Streams parsed reviews, restricted to `keep` when given.
template <class Fn>
std::vector<ParseDiagnostic> ForEachParsed(const fs::path& conllu, const std::optional<fs::path>& coref,
                                           const std::optional<std::unordered_set<std::string>>& keep,
                                           Fn&& fn) {
  std::ifstream in(conllu);
  if (!in) throw InputError("cannot open " + conllu.string());
  CorefIndex index;
  if (coref) index = CorefIndex::Load(coref->string());
  ConlluReader reader(in, coref ? &index : nullptr);
  while (auto review = reader.Next()) {
    if (keep && !keep->count(review->review_id)) continue;
    fn(*review);
  }
  return reader.diagnostics();
}

struct ParseInputs {
  fs::path conllu;
  std::optional<fs::path> coref;
};

ParseInputs ResolveParses(const PipelineConfig& config, bool synthetic) {
  ParseInputs p;
  const std::string key = synthetic ? "synthetic_parses" : "parses";
  p.conllu = config.Input(key);
  RequireFile(p.conllu, key);
  p.coref = config.OptionalInput(synthetic ? "synthetic_coref" : "coref");
  if (p.coref) RequireFile(*p.coref, synthetic ? "synthetic_coref" : "coref");
  return p;
}

std::unordered_map<std::string, Region> ReviewRegions(const PipelineConfig& config,
                                                      bool synthetic) {
  std::unordered_map<std::string, Region> out;
  if (synthetic) {
    const fs::path meta = config.Output("synthetic_meta.csv");
    RequireFile(meta, "synthetic_meta.csv (run audit first)");
    for (const SyntheticMeta& m : ReadSyntheticMetaCsv(meta.string())) out[m.review_id] = m.region;
    return out;
  }
  const fs::path cache = config.Output("corpus.bin");
  RequireFile(cache, "corpus.bin (run ingest first)");
  const CorpusCache c = LoadCorpusCache(cache.string());
  for (const Review& r : c.reviews.reviews()) {
    if (const Business* b = c.businesses.Find(r.business_id)) out[r.review_id] = b->region;
  }
  return out;
}

void WriteJson(const fs::path& path, const json& j) {
  auto out = OpenOut(path);
  out << j.dump(2) << '\n';
}

}  // namespace

fs::path DataDir() {
  if (const char* env = std::getenv("FOODFRAME_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return FOODFRAME_DEFAULT_DATA_DIR;
}

PipelineConfig PipelineConfig::FromJson(const json& j, const fs::path& base_dir) {
  PipelineConfig c;
  c.base_dir = base_dir;
  c.echo = j;
  try {
    if (!j.contains("output_dir")) throw ConfigError("config: output_dir is required");
    const auto resolve = [&](const std::string& p) {
      const fs::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    c.output_dir = resolve(j.at("output_dir").get<std::string>());
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("inputs")) {
      for (const auto& [key, value] : j.at("inputs").items()) {
        if (!kInputKeys.count(key)) throw ConfigError("config: unknown input '" + key + "'");
        c.inputs[key] = resolve(value.get<std::string>());
      }
    }
    if (j.contains("resources")) {
      for (const auto& [key, value] : j.at("resources").items()) {
        if (!kResourceFiles.count(key)) throw ConfigError("config: unknown resource '" + key + "'");
        c.resources[key] = resolve(value.get<std::string>());
      }
    }
    if (j.contains("studies")) {
      for (const auto& s : j.at("studies")) {
        const auto kind = ParseStudy(s.get<std::string>());
        if (!kind) throw ConfigError("config: unknown study '" + s.get<std::string>() + "'");
        c.studies.push_back(*kind);
      }
    } else {
      // The synthetic study needs audit output, so it is opt-in.
      for (StudyKind k : kAllStudies) {
        if (k != StudyKind::kStudy3) c.studies.push_back(k);
      }
    }
    if (j.contains("regression")) {
      const json& r = j.at("regression");
      c.regression.min_n = r.value("min_n", c.regression.min_n);
      c.regression.standardize = r.value("standardize", c.regression.standardize);
      c.regression.cluster_by_business =
          r.value("cluster_by_business", c.regression.cluster_by_business);
      c.regression.within_user = r.value("within_user", c.regression.within_user);
      c.regression.vif_threshold = r.value("vif_threshold", c.regression.vif_threshold);
      c.regression.vif_strict = r.value("vif_strict", c.regression.vif_strict);
    }
    if (j.contains("logodds")) {
      c.top_k = j.at("logodds").value("top_k", c.top_k);
      c.z_min = j.at("logodds").value("z_min", c.z_min);
    }
    c.audit.seed = c.seed;
    if (j.contains("audit")) {
      const json& a = j.at("audit");
      if (a.contains("grid")) c.audit.grid = GridConfig::FromJson(a.at("grid"));
      if (a.contains("sentiment_target")) {
        c.audit.sentiment_target = a.at("sentiment_target").get<std::map<std::string, double>>();
      }
      GenerateConfig& g = c.audit.generate;
      g.model_id = a.value("model_id", g.model_id);
      g.defaults.temperature = a.value("temperature", g.defaults.temperature);
      g.defaults.max_tokens = a.value("max_tokens", g.defaults.max_tokens);
      g.defaults.top_p = a.value("top_p", g.defaults.top_p);
      g.defaults.frequency_penalty = a.value("frequency_penalty", g.defaults.frequency_penalty);
      g.defaults.presence_penalty = a.value("presence_penalty", g.defaults.presence_penalty);
      g.max_attempts = a.value("max_attempts", g.max_attempts);
      g.initial_backoff = std::chrono::milliseconds(
          a.value("initial_backoff_ms", static_cast<std::int64_t>(g.initial_backoff.count())));
      g.max_backoff = std::chrono::milliseconds(
          a.value("max_backoff_ms", static_cast<std::int64_t>(g.max_backoff.count())));
      g.max_in_flight = a.value("max_in_flight", g.max_in_flight);
      if (a.contains("endpoint")) {
        const json& e = a.at("endpoint");
        c.audit.endpoint.url = e.value("url", c.audit.endpoint.url);
        c.audit.endpoint.api_key_env = e.value("api_key_env", c.audit.endpoint.api_key_env);
        c.audit.endpoint.timeout_seconds =
            e.value("timeout_seconds", c.audit.endpoint.timeout_seconds);
      }
      c.audit.seed = a.value("seed", c.seed);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::Load(const std::string& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path);
  const fs::path p = fs::absolute(path);
  return FromJson(ReadJsonFile(p), p.parent_path());
}

fs::path PipelineConfig::Input(const std::string& key) const {
  auto it = inputs.find(key);
  if (it == inputs.end()) throw InputError("missing input: '" + key + "' is not configured");
  return it->second;
}

std::optional<fs::path> PipelineConfig::OptionalInput(const std::string& key) const {
  auto it = inputs.find(key);
  if (it == inputs.end()) return std::nullopt;
  return it->second;
}

fs::path PipelineConfig::Resource(const std::string& key) const {
  if (auto it = resources.find(key); it != resources.end()) return it->second;
  auto f = kResourceFiles.find(key);
  if (f == kResourceFiles.end()) throw ContractViolation("unknown resource key " + key);
  return DataDir() / f->second;
}

fs::path PipelineConfig::Output(const std::string& name) const { return output_dir / name; }

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot hash " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw NumericError("sha256: digest init failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* kHex = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

Manifest::Manifest(std::string stage, const PipelineConfig& config)
    : stage_(std::move(stage)), config_(config) {}

std::size_t Manifest::CountRows(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".bin") return 0;
  std::ifstream in(path, std::ios::binary);
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!Trim(line).empty()) ++lines;
  }
  if (ext == ".csv" && lines > 0) --lines;  // header
  if (ext == ".conllu") {
    // Documents, not lines.
    in.clear();
    in.seekg(0);
    lines = 0;
    while (std::getline(in, line)) {
      if (line.rfind("# review_id", 0) == 0) ++lines;
    }
  }
  return lines;
}

namespace {

std::string RelativeName(const fs::path& path, const fs::path& base) {
  std::error_code ec;
  const fs::path rel = fs::relative(path, base, ec);
  return ec || rel.empty() ? path.filename().string() : rel.generic_string();
}

}  // namespace

void Manifest::AddInput(const std::string& name, const fs::path& path) {
  inputs_.push_back({{"name", name},
                     {"path", RelativeName(path, config_.base_dir)},
                     {"sha256", Sha256File(path)},
                     {"rows", CountRows(path)}});
}

void Manifest::AddOutput(const fs::path& path) {
  outputs_.push_back({{"path", RelativeName(path, config_.output_dir)},
                      {"sha256", Sha256File(path)},
                      {"rows", CountRows(path)}});
}

void Manifest::Note(const std::string& key, json value) { notes_[key] = std::move(value); }

void Manifest::Write() const {
  json j = {{"stage", stage_},
            {"format_version", 1},
            {"config", config_.echo},
            {"inputs", inputs_},
            {"outputs", outputs_},
            {"notes", notes_}};
  WriteJson(config_.Output(stage_ + "_manifest.json"), j);
}

// ---------------------------------------------------------------------------
// ingest

void RunIngest(const PipelineConfig& config, const IngestOptions& options, std::ostream& log) {
  const fs::path businesses_path = config.Input("businesses");
  const fs::path reviews_path = config.Input("reviews");
  RequireFile(businesses_path, "businesses");
  RequireFile(reviews_path, "reviews");
  const fs::path filters_path = config.Resource("filters");
  RequireFile(filters_path, "filter config");
  const fs::path nonlocal_path = config.Resource("nonlocal_patterns");
  RequireFile(nonlocal_path, "nonlocal patterns");
  const auto census_path = config.OptionalInput("census");
  if (census_path) RequireFile(*census_path, "census");

  fs::create_directories(config.output_dir);
  Manifest manifest("ingest", config);
  const CuisineRegionMap map = LoadRegionMap(config);
  const FilterConfig filters = FilterConfig::FromJson(ReadJsonFile(filters_path));

  DropReport drops;
  const BusinessTable businesses = LoadBusinesses(businesses_path.string(), map, filters, drops);
  ReviewLoadReport review_report;
  ReviewTable reviews = LoadReviews(reviews_path.string(), businesses, review_report);
  if (options.sample) reviews = SampleReviews(reviews, *options.sample, options.seed);
  reviews = MarkNonlocal(reviews, ReadListFile(nonlocal_path.string()));
  std::size_t nonlocal = 0;
  for (const Review& r : reviews.reviews()) nonlocal += r.nonlocal ? 1 : 0;

  CensusTable census_all;
  if (census_path) {
    census_all = CensusTable::Load(census_path->string());
  } else {
    log << "warning: no census input configured; regressions will have no neighborhood data\n";
  }
  std::vector<NeighborhoodMeta> linked_rows;
  std::set<std::string> linked_zips;
  std::size_t unlinked = 0;
  {
    auto out = OpenOut(config.Output("neighborhoods.csv"));
    CsvWriter w(out);
    w.WriteRow({"business_id", "zipcode", "linked", "median_income", "diversity", "pct_asian",
                "pct_hispanic"});
    for (const Business& b : businesses.businesses()) {
      const auto meta = LinkNeighborhood(b, census_all);
      if (!meta) {
        ++unlinked;
        w.WriteRow({b.business_id, b.zipcode, "no", "", "", "", ""});
        continue;
      }
      if (linked_zips.insert(meta->zipcode).second) linked_rows.push_back(*meta);
      w.WriteRow({b.business_id, b.zipcode, "yes", FormatDouble(meta->median_income),
                  FormatDouble(meta->diversity), FormatDouble(meta->pct_asian),
                  FormatDouble(meta->pct_hispanic)});
    }
  }
  std::sort(linked_rows.begin(), linked_rows.end(),
            [](const NeighborhoodMeta& a, const NeighborhoodMeta& b) {
              return a.zipcode < b.zipcode;
            });

  {
    auto out = OpenOut(config.Output("businesses.csv"));
    WriteBusinessesCsv(out, businesses);
  }
  {
    auto out = OpenOut(config.Output("reviews.csv"));
    WriteReviewsCsv(out, reviews);
  }
  {
    auto out = OpenOut(config.Output("retained_reviews.jsonl"));
    for (const Review& r : reviews.reviews()) {
      out << json{{"review_id", r.review_id}, {"business_id", r.business_id}, {"text", r.text}}
                 .dump()
          << '\n';
    }
  }
  json report = {{"businesses", drops.ToJson()},
                 {"reviews", review_report.ToJson()},
                 {"nonlocal_reviews", nonlocal},
                 {"businesses_without_census", unlinked},
                 {"region_counts", json::object()}};
  for (const auto& [region, n] : businesses.RegionCounts()) {
    report["region_counts"][std::string(RegionName(region))] = n;
  }
  if (options.sample) report["sample"] = {{"n", *options.sample}, {"seed", options.seed}};
  WriteJson(config.Output("drop_report.json"), report);
  SaveCorpusCache(config.Output("corpus.bin").string(),
                  {businesses, reviews, CensusTable(std::move(linked_rows))});

  manifest.AddInput("businesses", businesses_path);
  manifest.AddInput("reviews", reviews_path);
  if (census_path) manifest.AddInput("census", *census_path);
  manifest.AddInput("cuisine_regions", config.Resource("cuisine_regions"));
  manifest.AddInput("filters", filters_path);
  manifest.AddInput("nonlocal_patterns", nonlocal_path);
  for (const char* name : {"businesses.csv", "reviews.csv", "neighborhoods.csv",
                           "retained_reviews.jsonl", "drop_report.json", "corpus.bin"}) {
    manifest.AddOutput(config.Output(name));
  }
  if (options.sample) manifest.Note("sample", {{"n", *options.sample}, {"seed", options.seed}});
  manifest.Write();
  log << "ingest: " << businesses.size() << " businesses, " << reviews.size() << " reviews ("
      << nonlocal << " nonlocal), " << drops.TotalDropped() << " businesses dropped\n";
}

// ---------------------------------------------------------------------------
// extract

void RunExtract(const PipelineConfig& config, bool synthetic, std::ostream& log) {
  const ParseInputs parses = ResolveParses(config, synthetic);
  for (const char* key : {"anchors_food", "anchors_staff", "anchors_venue", "dish_names"}) {
    RequireFile(config.Resource(key), key);
  }
  fs::create_directories(config.output_dir);
  Manifest manifest(Prefix(synthetic) + "extract", config);

  const AnchorLexicon anchors = AnchorLexicon::Load(config.Resource("anchors_food").string(),
                                                    config.Resource("anchors_staff").string(),
                                                    config.Resource("anchors_venue").string());
  ExtractorConfig extractor;
  extractor.dish_names = ExtractorConfig::LoadDishNames(config.Resource("dish_names").string());
  const auto keep = RetainedIds(config, synthetic);

  const fs::path features_path = config.Output(Prefix(synthetic) + "features.csv");
  auto out = OpenOut(features_path);
  WriteFeaturesCsvHeader(out);
  std::size_t reviews = 0;
  std::size_t features = 0;
  std::vector<std::string> warnings;
  const auto diagnostics =
      ForEachParsed(parses.conllu, parses.coref, keep, [&](const ParsedReview& review) {
        ++reviews;
        const auto f = ExtractFeatures(review, anchors, extractor, &warnings);
        features += f.size();
        WriteFeaturesCsv(out, f);
      });
  out.close();

  json diag = {{"reviews", reviews},
               {"features", features},
               {"parse_diagnostics", json::array()},
               {"warnings", warnings}};
  std::size_t rejected = 0;
  for (const ParseDiagnostic& d : diagnostics) {
    rejected += d.rejected ? 1 : 0;
    diag["parse_diagnostics"].push_back(
        {{"review_id", d.review_id}, {"line", d.line}, {"message", d.message},
         {"rejected", d.rejected}});
  }
  const fs::path diag_path = config.Output(Prefix(synthetic) + "extract_diagnostics.json");
  WriteJson(diag_path, diag);

  manifest.AddInput("parses", parses.conllu);
  if (parses.coref) manifest.AddInput("coref", *parses.coref);
  for (const char* key : {"anchors_food", "anchors_staff", "anchors_venue", "dish_names"}) {
    manifest.AddInput(key, config.Resource(key));
  }
  manifest.AddOutput(features_path);
  manifest.AddOutput(diag_path);
  manifest.Write();
  log << Prefix(synthetic) << "extract: " << reviews << " reviews, " << features
      << " features, " << rejected << " rejected parses\n";
}

// ---------------------------------------------------------------------------
// score

void RunScore(const PipelineConfig& config, bool synthetic, std::ostream& log) {
  const fs::path features_path = config.Output(Prefix(synthetic) + "features.csv");
  RequireFile(features_path, Prefix(synthetic) + "features.csv (run extract first)");
  const ParseInputs parses = ResolveParses(config, synthetic);
  const fs::path lexicon_path = config.Resource("lexicons");
  RequireFile(lexicon_path, "lexicons");
  Manifest manifest(Prefix(synthetic) + "score", config);

  const LexiconSet lexicons = LexiconSet::Load(lexicon_path.string());
  std::unordered_map<std::string, std::vector<FramingFeature>> by_review;
  for (FramingFeature& f : ReadFeaturesCsv(features_path.string())) {
    by_review[f.review_id].push_back(std::move(f));
  }
  const auto keep = RetainedIds(config, synthetic);

  const fs::path scores_path = config.Output(Prefix(synthetic) + "scores.csv");
  const fs::path matches_path = config.Output(Prefix(synthetic) + "matches.csv");
  auto scores_out = OpenOut(scores_path);
  auto matches_out = OpenOut(matches_path);
  WriteScoresCsvHeader(scores_out);
  WriteMatchesCsvHeader(matches_out);
  static const std::vector<FramingFeature> kNone;
  std::size_t reviews = 0;
  std::size_t matches = 0;
  ForEachParsed(parses.conllu, parses.coref, keep, [&](const ParsedReview& review) {
    auto it = by_review.find(review.review_id);
    const auto& feats = it == by_review.end() ? kNone : it->second;
    const ScoredReview scored = ScoreReview(review.review_id, feats, lexicons, &review);
    WriteScoreCsv(scores_out, scored.score);
    WriteMatchesCsv(matches_out, scored.matches);
    ++reviews;
    matches += scored.matches.size();
  });
  scores_out.close();
  matches_out.close();

  manifest.AddInput("features", features_path);
  manifest.AddInput("parses", parses.conllu);
  manifest.AddInput("lexicons", lexicon_path);
  manifest.AddOutput(scores_path);
  manifest.AddOutput(matches_path);
  manifest.Write();
  log << Prefix(synthetic) << "score: " << reviews << " reviews, " << matches
      << " lexicon matches\n";
}

// ---------------------------------------------------------------------------
// logodds

void RunLogOdds(const PipelineConfig& config, bool synthetic, std::ostream& log) {
  const fs::path matches_path = config.Output(Prefix(synthetic) + "matches.csv");
  RequireFile(matches_path, Prefix(synthetic) + "matches.csv (run score first)");
  const fs::path features_path = config.Output(Prefix(synthetic) + "features.csv");
  RequireFile(features_path, Prefix(synthetic) + "features.csv (run extract first)");
  const fs::path lexicon_path = config.Resource("lexicons");
  RequireFile(lexicon_path, "lexicons");
  Manifest manifest(Prefix(synthetic) + "logodds", config);

  const auto regions = ReviewRegions(config, synthetic);
  const RegionLookup region_of = [&regions](const std::string& id) -> std::optional<Region> {
    auto it = regions.find(id);
    if (it == regions.end()) return std::nullopt;
    return it->second;
  };
  const LexiconSet lexicons = LexiconSet::Load(lexicon_path.string());
  const auto matches = ReadMatchesCsv(matches_path.string());

  for (const FrameLexicon& lex : lexicons.lexicons()) {
    const fs::path path =
        config.Output(Prefix(synthetic) + "logodds_" + std::string(FrameName(lex.name())) + ".csv");
    auto out = OpenOut(path);
    WriteLogOddsCsvHeader(out);
    for (Region r : kAllRegions) {
      WriteLogOddsCsv(out, std::string(RegionName(r)),
                      FrameFilteredLogOdds(matches, lex, r, region_of));
    }
    out.close();
    manifest.AddOutput(path);
  }
  const auto features = ReadFeaturesCsv(features_path.string());
  const fs::path all_path = config.Output(Prefix(synthetic) + "logodds_features.csv");
  {
    auto out = OpenOut(all_path);
    WriteLogOddsCsvHeader(out);
    for (Region r : kAllRegions) {
      WriteLogOddsCsv(out, std::string(RegionName(r)), FeatureLogOdds(features, r, region_of));
    }
  }
  manifest.AddOutput(all_path);
  manifest.AddInput("matches", matches_path);
  manifest.AddInput("features", features_path);
  manifest.AddInput("lexicons", lexicon_path);
  manifest.Write();
  log << Prefix(synthetic) << "logodds: " << matches.size() << " matches over "
      << regions.size() << " reviews with a region\n";
}

// ---------------------------------------------------------------------------
// regress

void RunRegress(const PipelineConfig& config, std::ostream& log) {
  if (config.studies.empty()) throw ConfigError("regress: no studies configured");
  Manifest manifest("regress", config);
  std::vector<ModelOutcome> outcomes;
  json merge = json::object();

  const bool observed = std::any_of(config.studies.begin(), config.studies.end(),
                                    [](StudyKind k) { return k != StudyKind::kStudy3; });
  if (observed) {
    const fs::path scores_path = config.Output("scores.csv");
    RequireFile(scores_path, "scores.csv (run score first)");
    const fs::path cache_path = config.Output("corpus.bin");
    RequireFile(cache_path, "corpus.bin (run ingest first)");
    const CorpusCache cache = LoadCorpusCache(cache_path.string());
    MergeReport report;
    const auto records = MergeRecords(cache.businesses, cache.reviews, cache.census,
                                      ReadScoresCsv(scores_path.string()), &report);
    merge = {{"reviews", report.reviews},
             {"missing_business", report.missing_business},
             {"missing_census", report.missing_census},
             {"missing_score", report.missing_score}};
    for (StudyKind k : config.studies) {
      if (k == StudyKind::kStudy3) continue;
      auto res = RunStudy(k, records, config.regression);
      outcomes.insert(outcomes.end(), res.begin(), res.end());
    }
    manifest.AddInput("scores", scores_path);
    manifest.AddInput("corpus_cache", cache_path);
  }
  if (std::find(config.studies.begin(), config.studies.end(), StudyKind::kStudy3) !=
      config.studies.end()) {
    const fs::path scores_path = config.Output("synthetic_scores.csv");
    RequireFile(scores_path, "synthetic_scores.csv (run score --synthetic first)");
    const fs::path meta_path = config.Output("synthetic_meta.csv");
    RequireFile(meta_path, "synthetic_meta.csv (run audit first)");
    const auto records = ToSyntheticRecords(ReadSyntheticMetaCsv(meta_path.string()),
                                            ReadScoresCsv(scores_path.string()));
    auto res = RunSyntheticStudy(records, config.regression);
    outcomes.insert(outcomes.end(), res.begin(), res.end());
    manifest.AddInput("synthetic_scores", scores_path);
    manifest.AddInput("synthetic_meta", meta_path);
  }

  fs::create_directories(config.output_dir);
  const fs::path csv_path = config.Output("regression.csv");
  const fs::path json_path = config.Output("regression.json");
  const fs::path wald_path = config.Output("wald.csv");
  {
    auto out = OpenOut(csv_path);
    WriteStudyCsvHeader(out);
    WriteStudyCsv(out, outcomes);
  }
  WriteJson(json_path, {{"merge", merge}, {"models", StudyToJson(outcomes)}});
  {
    auto out = OpenOut(wald_path);
    WriteWaldCsv(out, RegionWaldComparisons(outcomes));
  }
  std::size_t fitted = 0;
  for (const ModelOutcome& m : outcomes) {
    if (m.result) {
      ++fitted;
    } else {
      log << "regress: skipped " << m.study << "/" << m.model << ": " << m.skipped << '\n';
    }
    if (!m.vif_ok) log << "regress: VIF check failed for " << m.study << "/" << m.model << '\n';
  }
  manifest.AddOutput(csv_path);
  manifest.AddOutput(json_path);
  manifest.AddOutput(wald_path);
  manifest.Write();
  log << "regress: " << fitted << " of " << outcomes.size() << " models fitted\n";
}

// ---------------------------------------------------------------------------
// audit

ChatResponse MockReviewResponse(const ChatRequest& request, int /*attempt*/) {
  // Deterministic text keyed on the request id; every fifth reply carries a
  // disclaimer so the sanitize step has something to remove.
  std::size_t h = std::hash<std::string>{}(request.id);
  ChatResponse r;
  r.ok = true;
  r.http_status = 200;
  static const std::vector<std::string> kBodies = {
      "The food was authentic and the staff was friendly.",
      "Our server was attentive and the place was clean.",
      "The dishes were delicious but the prices were expensive.",
      "A cozy spot with a classic menu and a relaxed atmosphere.",
      "The noodles were fresh and the service was quick."};
  r.text = kBodies[h % kBodies.size()];
  if (h % 5 == 0) {
    r.text = "As an AI language model, I can say that this customer enjoyed the visit. " + r.text;
  }
  return r;
}

void RunAudit(const PipelineConfig& config, AuditStep step, ChatClient* client,
              std::ostream& log) {
  fs::create_directories(config.output_dir);
  const CuisineRegionMap map = LoadRegionMap(config);
  const fs::path raw_path = config.Output("audit_raw.jsonl");
  const fs::path clean_path = config.Output("audit_sanitized.jsonl");
  Manifest manifest("audit", config);
  json report = json::object();

  if (step == AuditStep::kGenerate || step == AuditStep::kAll) {
    GridConfig grid = config.audit.grid;
    if (grid.cuisines.empty()) {
      for (const auto& [tag, region] : map.entries) grid.cuisines.push_back(tag);
    }
    const auto jobs = ExpandPrompts(grid);
    std::vector<WeightedJob> weighted;
    if (config.audit.sentiment_target.empty()) {
      for (const PromptJob& j : jobs) weighted.push_back({j, 1});
    } else {
      SentimentReport srep;
      weighted = MatchSentimentDistribution(jobs, config.audit.sentiment_target, &srep);
      report["sentiment"] = {{"target", srep.target},
                             {"realized", srep.realized},
                             {"counts", srep.counts},
                             {"total", srep.total}};
    }
    std::unique_ptr<ChatClient> http;
    if (client == nullptr) {
      if (config.audit.endpoint.url.empty()) {
        throw ConfigError("audit: no endpoint url configured (or use --mock)");
      }
      http = std::make_unique<HttpChatClient>(config.audit.endpoint);
      client = http.get();
    }
    std::ofstream sink(raw_path, std::ios::binary | std::ios::app);
    if (!sink) throw InputError("cannot write " + raw_path.string());
    const auto generated = Generate(weighted, grid, *client, config.audit.generate, &sink);
    std::size_t failed = 0;
    for (const GeneratedReview& g : generated) failed += g.status == "ok" ? 0 : 1;
    report["generate"] = {{"jobs", jobs.size()},
                          {"requests", generated.size()},
                          {"failed", failed}};
    log << "audit: " << jobs.size() << " jobs, " << generated.size() << " requests, " << failed
        << " failed\n";
  }

  if (step == AuditStep::kSanitize || step == AuditStep::kAll) {
    RequireFile(raw_path, "audit_raw.jsonl (run audit generate first)");
    for (const char* key : {"disclaimer_patterns", "meta_patterns"}) {
      RequireFile(config.Resource(key), key);
    }
    const auto patterns = DisclaimerPatterns::Load(config.Resource("disclaimer_patterns").string(),
                                                   config.Resource("meta_patterns").string());
    // Append-only log: the last "ok" record per (review, model) wins.
    std::map<std::pair<std::string, std::string>, GeneratedReview> latest;
    for (GeneratedReview& g : ReadGeneratedJsonl(raw_path.string())) {
      const auto key = std::make_pair(g.ReviewId(), g.model_id);
      auto it = latest.find(key);
      if (it == latest.end() || g.status == "ok" || it->second.status != "ok") {
        latest[key] = std::move(g);
      }
    }
    std::vector<GeneratedReview> raw;
    for (auto& [key, g] : latest) raw.push_back(std::move(g));
    const auto clean = Sanitize(std::move(raw), patterns);
    std::map<std::string, std::size_t> status;
    auto out = OpenOut(clean_path);
    for (const GeneratedReview& g : clean) {
      ++status[g.status];
      out << g.ToJson().dump() << '\n';
    }
    report["sanitize"] = status;
    manifest.AddInput("audit_raw", raw_path);
    manifest.AddInput("disclaimer_patterns", config.Resource("disclaimer_patterns"));
    manifest.AddInput("meta_patterns", config.Resource("meta_patterns"));
  }

  if (step == AuditStep::kStratify || step == AuditStep::kAll) {
    RequireFile(clean_path, "audit_sanitized.jsonl (run audit sanitize first)");
    auto clean = ReadGeneratedJsonl(clean_path.string());
    std::sort(clean.begin(), clean.end(),
              [](const GeneratedReview& a, const GeneratedReview& b) { return a.seq < b.seq; });
    // Cuisines outside the region map (excluded tags) cannot be stratified.
    std::vector<GeneratedReview> mapped;
    std::size_t unmapped = 0;
    for (GeneratedReview& g : clean) {
      if (g.status != "ok") continue;
      if (!map.RegionOf(NormalizeCategory(g.job.cuisine))) {
        ++unmapped;
        continue;
      }
      mapped.push_back(std::move(g));
    }
    const auto strat = StratifyByRegion(mapped, map, config.audit.seed);
    {
      auto out = OpenOut(config.Output("synthetic_reviews.jsonl"));
      WriteSyntheticCorpus(out, strat);
    }
    {
      auto out = OpenOut(config.Output("synthetic_meta.csv"));
      WriteSyntheticMetaCsv(out, strat, map);
    }
    std::map<std::string, std::size_t> per_region;
    for (const GeneratedReview& g : strat) {
      ++per_region[std::string(RegionName(*map.RegionOf(NormalizeCategory(g.job.cuisine))))];
    }
    report["stratify"] = {{"eligible", mapped.size()},
                          {"unmapped_cuisine", unmapped},
                          {"per_region", per_region},
                          {"total", strat.size()},
                          {"seed", config.audit.seed}};
    manifest.AddInput("audit_sanitized", clean_path);
    manifest.AddOutput(config.Output("synthetic_reviews.jsonl"));
    manifest.AddOutput(config.Output("synthetic_meta.csv"));
    log << "audit: stratified " << strat.size() << " reviews\n";
  }

  const fs::path report_path = config.Output("audit_report.json");
  WriteJson(report_path, report);
  if (fs::is_regular_file(raw_path)) manifest.AddOutput(raw_path);
  if (fs::is_regular_file(clean_path)) manifest.AddOutput(clean_path);
  manifest.AddOutput(report_path);
  manifest.Write();
}

// ---------------------------------------------------------------------------
// report

namespace {

bool IsFocalTerm(const std::string& term) {
  for (const char* prefix : {"region[", "asian_pop[", "hispanic_pop[", "immigrant["}) {
    if (term.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

struct TopRow {
  std::string frame;
  std::string group;
  std::size_t rank;
  LogOddsEntry entry;
};

std::vector<TopRow> TopFromLogOddsCsv(const fs::path& path, const std::string& frame,
                                      std::size_t k, double z_min) {
  const CsvTable t = CsvTable::ReadFile(path.string());
  const std::size_t g = t.Column("group");
  const std::size_t w = t.Column("word");
  const std::size_t d = t.Column("delta");
  const std::size_t nc = t.Column("n_c");
  const std::size_t nn = t.Column("n_notc");
  const std::size_t np = t.Column("n_prior");
  std::map<std::string, std::vector<LogOddsEntry>> by_group;
  std::vector<std::string> order;
  for (const CsvRow& row : t.rows()) {
    if (!by_group.count(row[g])) order.push_back(row[g]);
    by_group[row[g]].push_back({row[w], std::stod(row[d]), std::stoll(row[nc]),
                                std::stoll(row[nn]), std::stoll(row[np])});
  }
  std::vector<TopRow> out;
  for (const std::string& group : order) {
    std::size_t rank = 0;
    for (const LogOddsEntry& e : TopAssociated(by_group[group], k, z_min)) {
      out.push_back({frame, group, ++rank, e});
    }
  }
  return out;
}

void WriteTopRows(const fs::path& path, const std::vector<TopRow>& rows) {
  auto out = OpenOut(path);
  CsvWriter w(out);
  w.WriteRow({"frame", "group", "rank", "word", "delta", "n_c"});
  for (const TopRow& r : rows) {
    w.WriteRow({r.frame, r.group, std::to_string(r.rank), r.entry.word,
                FormatDouble(r.entry.delta), std::to_string(r.entry.n_c)});
  }
}

void WriteHistogram(CsvWriter& w, const std::string& variable, const std::vector<double>& values,
                    double lo, double width, std::size_t bins) {
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    auto b = static_cast<long long>(std::floor((v - lo) / width));
    b = std::clamp<long long>(b, 0, static_cast<long long>(bins) - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  for (std::size_t i = 0; i < bins; ++i) {
    w.WriteRow({variable, FormatDouble(lo + width * static_cast<double>(i)),
                FormatDouble(lo + width * static_cast<double>(i + 1)), std::to_string(counts[i])});
  }
}

}  // namespace

void RunReport(const PipelineConfig& config, std::ostream& log) {
  const fs::path regression_path = config.Output("regression.csv");
  RequireFile(regression_path, "regression.csv (run regress first)");
  const fs::path dir = config.Output("report");
  fs::create_directories(dir);
  Manifest manifest("report", config);
  manifest.AddInput("regression", regression_path);
  json summary = {{"files", json::array()}, {"skipped", json::array()}};
  const auto emit = [&](const fs::path& p) {
    manifest.AddOutput(p);
    summary["files"].push_back(p.filename().string());
  };

  // Coefficient plot data, one file per study.
  const CsvTable reg = CsvTable::ReadFile(regression_path.string());
  const std::size_t c_study = reg.Column("study");
  const std::size_t c_model = reg.Column("model");
  const std::size_t c_outcome = reg.Column("outcome");
  const std::size_t c_term = reg.Column("term");
  std::map<std::string, std::vector<const CsvRow*>> by_study;
  for (const CsvRow& row : reg.rows()) {
    if (IsFocalTerm(row[c_term])) by_study[row[c_study]].push_back(&row);
  }
  for (const auto& [study, rows] : by_study) {
    const fs::path p = dir / ("coef_" + study + ".csv");
    auto out = OpenOut(p);
    CsvWriter w(out);
    w.WriteRow({"model", "outcome", "term", "estimate", "ci_low", "ci_high", "p", "stars"});
    for (const CsvRow* r : rows) {
      w.WriteRow({(*r)[c_model], (*r)[c_outcome], (*r)[c_term], (*r)[reg.Column("estimate")],
                  (*r)[reg.Column("ci_low")], (*r)[reg.Column("ci_high")],
                  (*r)[reg.Column("p")], (*r)[reg.Column("stars")]});
    }
    out.close();
    emit(p);
  }

  // Compact table for the synthetic study: one row per model, one column per
  // focal term, "estimate+stars" cells.
  if (auto it = by_study.find(std::string(StudyName(StudyKind::kStudy3))); it != by_study.end()) {
    std::map<std::string, std::map<std::string, std::string>> cells;
    std::vector<std::string> outcomes;
    for (const CsvRow* r : it->second) {
      const std::string& outcome = (*r)[c_outcome];
      if (std::find(outcomes.begin(), outcomes.end(), outcome) == outcomes.end()) {
        outcomes.push_back(outcome);
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f", std::stod((*r)[reg.Column("estimate")]));
      std::string stars = (*r)[reg.Column("stars")];
      cells[outcome][(*r)[c_term]] = std::string(buf) + (stars == "ns" ? "" : stars);
    }
    const std::vector<std::string> cols = {"region[EUR]", "region[LAT]", "region[AS]",
                                           "immigrant[yes]"};
    const fs::path p = dir / "synthetic_table.csv";
    auto out = OpenOut(p);
    CsvWriter w(out);
    w.WriteRow({"outcome", "EUR", "LAT", "AS", "immigrant"});
    for (const std::string& o : outcomes) {
      CsvRow row = {o};
      for (const std::string& c : cols) row.push_back(cells[o].count(c) ? cells[o][c] : "");
      w.WriteRow(row);
    }
    out.close();
    emit(p);
  }

  // Top associated features per frame and region.
  const fs::path lexicon_path = config.Resource("lexicons");
  if (fs::is_regular_file(lexicon_path)) {
    const LexiconSet lexicons = LexiconSet::Load(lexicon_path.string());
    for (bool synthetic : {false, true}) {
      std::map<std::string, std::vector<TopRow>> by_construct;
      for (const FrameLexicon& lex : lexicons.lexicons()) {
        const std::string frame(FrameName(lex.name()));
        const fs::path p = config.Output(Prefix(synthetic) + "logodds_" + frame + ".csv");
        if (!fs::is_regular_file(p)) continue;
        manifest.AddInput(p.filename().string(), p);
        auto rows = TopFromLogOddsCsv(p, frame, config.top_k, config.z_min);
        auto& dst =
            by_construct[lex.construct() == Construct::kOthering ? "othering" : "status"];
        dst.insert(dst.end(), rows.begin(), rows.end());
      }
      for (const auto& [name, rows] : by_construct) {
        const fs::path p = dir / ("top_" + Prefix(synthetic) + name + ".csv");
        WriteTopRows(p, rows);
        emit(p);
      }
      const fs::path all = config.Output(Prefix(synthetic) + "logodds_features.csv");
      if (fs::is_regular_file(all)) {
        manifest.AddInput(all.filename().string(), all);
        const fs::path p = dir / ("top_" + Prefix(synthetic) + "features.csv");
        WriteTopRows(p, TopFromLogOddsCsv(all, "all", config.top_k, config.z_min));
        emit(p);
      }
    }
  } else {
    summary["skipped"].push_back("top feature tables: lexicons not found");
  }

  // Covariate distributions over the analysed businesses.
  const fs::path cache_path = config.Output("corpus.bin");
  if (fs::is_regular_file(cache_path)) {
    const CorpusCache cache = LoadCorpusCache(cache_path.string());
    manifest.AddInput("corpus_cache", cache_path);
    std::vector<double> price, stars, income, diversity;
    const fs::path p = dir / "covariates.csv";
    {
      auto out = OpenOut(p);
      CsvWriter w(out);
      w.WriteRow({"business_id", "region", "price_tier", "mean_stars", "median_income",
                  "diversity", "has_census"});
      for (const Business& b : cache.businesses.businesses()) {
        const auto meta = LinkNeighborhood(b, cache.census);
        price.push_back(b.price_tier);
        stars.push_back(b.mean_stars);
        income.push_back(meta ? meta->median_income : std::nan(""));
        diversity.push_back(meta ? meta->diversity : std::nan(""));
        w.WriteRow({b.business_id, std::string(RegionName(b.region)),
                    std::to_string(b.price_tier), FormatDouble(b.mean_stars),
                    meta ? FormatDouble(meta->median_income) : "",
                    meta ? FormatDouble(meta->diversity) : "", meta ? "yes" : "no"});
      }
    }
    emit(p);
    const fs::path h = dir / "covariate_histograms.csv";
    {
      auto out = OpenOut(h);
      CsvWriter w(out);
      w.WriteRow({"variable", "bin_low", "bin_high", "count"});
      WriteHistogram(w, "price_tier", price, 0.5, 1.0, 4);
      WriteHistogram(w, "mean_stars", stars, 1.0, 0.5, 8);
      WriteHistogram(w, "median_income", income, 0.0, 10000.0, 25);
      WriteHistogram(w, "diversity", diversity, 0.0, 0.05, 20);
    }
    emit(h);
  } else {
    summary["skipped"].push_back("covariate distributions: corpus.bin not found");
  }

  const fs::path summary_path = dir / "summary.json";
  WriteJson(summary_path, summary);
  manifest.AddOutput(summary_path);
  manifest.Write();
  log << "report: " << summary["files"].size() << " files in " << dir.string() << '\n';
}

}  // namespace foodframe
