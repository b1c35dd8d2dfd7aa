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

#include "foodframe/studies.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include "foodframe/csv.h"
#include "foodframe/error.h"

namespace foodframe {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kRegionLevels = {"US", "EUR", "LAT", "AS"};
const std::vector<std::string> kPriceLevels = {"$", "$$", "$$$", "$$$$"};

std::vector<std::string> SentimentLevels() {
  return {kSentiments.begin(), kSentiments.end()};
}

std::vector<std::string> OutcomeColumns() {
  std::vector<std::string> out;
  for (Frame f : kAllFrames) out.emplace_back(FrameName(f));
  for (FrameSubset s : kAllSubsets) out.emplace_back(SubsetName(s));
  return out;
}

void AddOutcomes(ModelData& data, const std::vector<const FramingScore*>& scores) {
  for (Frame f : kAllFrames) {
    std::vector<double> v;
    v.reserve(scores.size());
    for (const FramingScore* s : scores) v.push_back(s->count(f));
    data.AddNumeric(std::string(FrameName(f)), std::move(v));
  }
  for (FrameSubset sub : kAllSubsets) {
    std::vector<double> v;
    v.reserve(scores.size());
    for (const FramingScore* s : scores) v.push_back(s->subset_count(sub));
    data.AddNumeric(std::string(SubsetName(sub)), std::move(v));
  }
}

std::vector<Term> ObservedControls(bool with_price) {
  std::vector<Term> terms = {Term::Continuous("length")};
  if (with_price) terms.push_back(Term::Categorical("price", kPriceLevels, "$$"));
  terms.push_back(Term::Continuous("stars"));
  terms.push_back(Term::Continuous("income"));
  terms.push_back(Term::Continuous("diversity"));
  return terms;
}

RegressionSpec ObservedSpec(std::string name, std::string outcome, std::vector<Term> lead,
                            bool with_price, std::vector<SampleFilter> filters,
                            bool standardize) {
  RegressionSpec spec;
  spec.name = std::move(name);
  spec.outcome = std::move(outcome);
  spec.terms = std::move(lead);
  for (Term& t : ObservedControls(with_price)) spec.terms.push_back(std::move(t));
  spec.filters = std::move(filters);
  spec.filters.push_back({"census", {"yes"}});
  spec.standardize = standardize;
  return spec;
}

const std::vector<Frame> kOthering = {Frame::kExoticism, Frame::kPrototypicality,
                                      Frame::kAuthenticity};

std::vector<std::string> StatusOutcomes() {
  return {"luxury", "cost", "hygiene", "clean", "dirty", "cheap", "expensive"};
}

struct OutsiderSample {
  Region region;
  const char* column;  // hi/lo column
  double ReviewRecord::*pct;
};

const std::array<OutsiderSample, 2> kOutsiderSamples = {
    OutsiderSample{Region::kAS, "asian_pop", &ReviewRecord::pct_asian},
    OutsiderSample{Region::kLAT, "hispanic_pop", &ReviewRecord::pct_hispanic}};

bool InOutsiderSample(const ReviewRecord& r, Region region) {
  return r.has_census && !r.nonlocal && r.region == region;
}

// Hi/lo over the distinct businesses of the sample; "" outside it.
std::pair<std::vector<std::string>, double> OutsiderCoding(
    const std::vector<ReviewRecord>& records, const OutsiderSample& sample) {
  std::map<std::string, double> by_business;
  for (const ReviewRecord& r : records) {
    if (InOutsiderSample(r, sample.region)) by_business.emplace(r.business_id, r.*sample.pct);
  }
  std::vector<std::string> column(records.size());
  if (by_business.empty()) return {column, kMissing};
  std::vector<double> values;
  for (const auto& [id, v] : by_business) values.push_back(v);
  const HiLoCoding coding = CodeHiLo(values);
  std::unordered_map<std::string, HiLo> code;
  std::size_t k = 0;
  for (const auto& [id, v] : by_business) code[id] = coding.codes[k++];
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (InOutsiderSample(records[i], sample.region)) {
      column[i] = std::string(HiLoName(code.at(records[i].business_id)));
    }
  }
  return {column, coding.threshold};
}

struct FitInputs {
  std::string study;
  const ModelData* data = nullptr;
  const std::vector<std::int64_t>* clusters = nullptr;  // per data row
  const std::vector<std::string>* users = nullptr;      // per data row
  std::vector<std::string> notes;                       // copied into warnings
};

ModelOutcome FitOne(const FitInputs& in, const RegressionSpec& spec, const StudyOptions& options) {
  ModelOutcome out;
  out.study = in.study;
  out.model = spec.name;
  out.outcome = spec.outcome;
  out.warnings = in.notes;
  DesignMatrix design;
  try {
    design = BuildDesignMatrix(*in.data, spec);
  } catch (const InputError& e) {
    out.skipped = e.what();
    return out;
  }
  for (auto& w : design.warnings) out.warnings.push_back(w);
  if (design.rows.size() < options.min_n) {
    out.skipped = "sample size " + std::to_string(design.rows.size()) + " below minimum " +
                  std::to_string(options.min_n);
    return out;
  }
  if (design.y.size() > 0 && (design.y.array() == design.y[0]).all()) {
    out.skipped = "outcome '" + spec.outcome + "' is constant over the sample";
    return out;
  }
  if (design.x.cols() >= 3) {
    out.vif = Vif(design.x);
    out.vif_terms.assign(design.columns.begin() + 1, design.columns.end());
    for (std::size_t k = 0; k < out.vif.size(); ++k) {
      if (!(out.vif[k] < options.vif_threshold)) {
        out.vif_ok = false;
        out.warnings.push_back("VIF of '" + out.vif_terms[k] + "' is " +
                               FormatDouble(out.vif[k]) + ", not below " +
                               FormatDouble(options.vif_threshold));
      }
    }
    if (!out.vif_ok && options.vif_strict) {
      throw InputError("model '" + in.study + "/" + spec.name + "': VIF check failed");
    }
  }

  OlsOptions ols;
  if (options.cluster_by_business && in.clusters != nullptr) {
    std::vector<std::int64_t> ids;
    ids.reserve(design.rows.size());
    for (std::size_t r : design.rows) ids.push_back((*in.clusters)[r]);
    ols.clusters = std::move(ids);
  }
  if (options.within_user && in.users != nullptr) {
    std::vector<std::string> groups;
    groups.reserve(design.rows.size());
    for (std::size_t r : design.rows) groups.push_back((*in.users)[r]);
    ols.absorbed_parameters = DemeanWithinGroups(design, groups);
    out.warnings.push_back(design.warnings.back());
  }
  try {
    out.result = FitOls(design, ols);
  } catch (const NumericError& e) {
    out.skipped = e.what();
  }
  return out;
}

std::vector<ModelOutcome> FitAll(const FitInputs& in, const std::vector<RegressionSpec>& specs,
                                 const StudyOptions& options) {
  std::vector<ModelOutcome> out;
  out.reserve(specs.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < specs.size(); start += width) {
    std::vector<std::future<ModelOutcome>> batch;
    const std::size_t end = std::min(specs.size(), start + width);
    for (std::size_t k = start; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, FitOne, std::cref(in), std::cref(specs[k]),
                                 std::cref(options)));
    }
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace

std::string_view StudyName(StudyKind s) {
  switch (s) {
    case StudyKind::kStudy1A:
      return "study1a";
    case StudyKind::kStudy1B:
      return "study1b";
    case StudyKind::kStudy2:
      return "study2";
    case StudyKind::kGlassCeiling:
      return "glass_ceiling";
    case StudyKind::kStudy3:
      return "study3";
  }
  return "";
}

std::optional<StudyKind> ParseStudy(std::string_view s) {
  for (StudyKind k : kAllStudies) {
    if (StudyName(k) == s) return k;
  }
  return std::nullopt;
}

std::string PriceLabel(int tier) {
  if (tier < 1 || tier > 4) throw ContractViolation("price tier out of range");
  return std::string(static_cast<std::size_t>(tier), '$');
}

std::vector<ReviewRecord> MergeRecords(const BusinessTable& businesses, const ReviewTable& reviews,
                                       const CensusTable& census,
                                       const std::vector<FramingScore>& scores,
                                       MergeReport* report) {
  std::unordered_map<std::string, const FramingScore*> score_of;
  for (const FramingScore& s : scores) score_of[s.review_id] = &s;
  MergeReport local;
  std::vector<ReviewRecord> out;
  out.reserve(reviews.size());
  for (const Review& rv : reviews.reviews()) {
    ++local.reviews;
    const Business* b = businesses.Find(rv.business_id);
    if (b == nullptr) {
      ++local.missing_business;
      continue;
    }
    ReviewRecord r;
    r.review_id = rv.review_id;
    r.business_id = rv.business_id;
    r.user_id = rv.user_id;
    r.region = b->region;
    r.price_tier = b->price_tier;
    r.business_stars = b->mean_stars;
    r.length = static_cast<double>(rv.token_count);
    r.nonlocal = rv.nonlocal;
    if (const auto meta = LinkNeighborhood(*b, census)) {
      r.has_census = true;
      r.income = meta->median_income;
      r.diversity = meta->diversity;
      r.pct_asian = meta->pct_asian;
      r.pct_hispanic = meta->pct_hispanic;
    } else {
      ++local.missing_census;
    }
    if (auto it = score_of.find(rv.review_id); it != score_of.end()) {
      r.score = *it->second;
    } else {
      r.score.review_id = rv.review_id;
      ++local.missing_score;
    }
    out.push_back(std::move(r));
  }
  if (report != nullptr) *report = local;
  return out;
}

ModelData BuildModelData(const std::vector<ReviewRecord>& records) {
  ModelData data;
  std::vector<const FramingScore*> scores;
  std::vector<std::string> region, price, census, local;
  std::vector<double> length, stars, income, diversity;
  for (const ReviewRecord& r : records) {
    scores.push_back(&r.score);
    region.emplace_back(RegionName(r.region));
    price.push_back(PriceLabel(r.price_tier));
    census.push_back(r.has_census ? "yes" : "no");
    local.push_back(r.nonlocal ? "nonlocal" : "local");
    length.push_back(r.length);
    stars.push_back(r.business_stars);
    income.push_back(r.has_census ? r.income : kMissing);
    diversity.push_back(r.has_census ? r.diversity : kMissing);
  }
  AddOutcomes(data, scores);
  data.AddCategorical("region", std::move(region));
  data.AddCategorical("price", std::move(price));
  data.AddCategorical("census", std::move(census));
  data.AddCategorical("local", std::move(local));
  data.AddNumeric("length", std::move(length));
  data.AddNumeric("stars", std::move(stars));
  data.AddNumeric("income", std::move(income));
  data.AddNumeric("diversity", std::move(diversity));
  return data;
}

ModelData BuildSyntheticModelData(const std::vector<SyntheticRecord>& records) {
  ModelData data;
  std::vector<const FramingScore*> scores;
  std::vector<std::string> region, immigrant, sentiment;
  const auto levels = SentimentLevels();
  for (const SyntheticRecord& r : records) {
    if (std::find(levels.begin(), levels.end(), r.sentiment) == levels.end()) {
      throw InputError("synthetic review '" + r.review_id + "': unknown sentiment '" +
                       r.sentiment + "'");
    }
    scores.push_back(&r.score);
    region.emplace_back(RegionName(r.region));
    immigrant.push_back(IsImmigrant(r.region) ? "yes" : "no");
    sentiment.push_back(r.sentiment);
  }
  AddOutcomes(data, scores);
  data.AddCategorical("region", std::move(region));
  data.AddCategorical("immigrant", std::move(immigrant));
  data.AddCategorical("sentiment", std::move(sentiment));
  return data;
}

std::vector<RegressionSpec> StudySpecs(StudyKind kind, bool standardize) {
  std::vector<RegressionSpec> specs;
  switch (kind) {
    case StudyKind::kStudy1A:
      for (Frame f : kOthering) {
        const std::string y(FrameName(f));
        specs.push_back(ObservedSpec(y, y, {Term::Categorical("region", kRegionLevels, "US")},
                                     true, {}, standardize));
      }
      break;
    case StudyKind::kStudy1B:
      for (const OutsiderSample& s : kOutsiderSamples) {
        const std::string region(RegionName(s.region));
        for (Frame f : kOthering) {
          const std::string y(FrameName(f));
          specs.push_back(ObservedSpec(region + ":" + y, y,
                                       {Term::Categorical(s.column, {"hi", "lo"}, "hi")}, true,
                                       {{"region", {region}}, {"local", {"local"}}},
                                       standardize));
        }
      }
      break;
    case StudyKind::kStudy2:
      for (const std::string& y : StatusOutcomes()) {
        specs.push_back(ObservedSpec(y, y, {Term::Categorical("region", kRegionLevels, "EUR")},
                                     true, {}, standardize));
      }
      break;
    case StudyKind::kGlassCeiling:
      for (const std::string& y : StatusOutcomes()) {
        specs.push_back(ObservedSpec(y, y, {Term::Categorical("region", kRegionLevels, "EUR")},
                                     false, {{"price", {"$$$", "$$$$"}}}, standardize));
      }
      break;
    case StudyKind::kStudy3:
      for (const std::string& y : OutcomeColumns()) {
        RegressionSpec spec;
        spec.name = y;
        spec.outcome = y;
        spec.terms = {Term::Categorical("region", kRegionLevels, "US"),
                      Term::Categorical("sentiment", SentimentLevels(), "neutral")};
        spec.standardize = standardize;
        specs.push_back(spec);
        spec.name = "immigrant:" + y;
        spec.terms[0] = Term::Categorical("immigrant", {"no", "yes"}, "no");
        specs.push_back(std::move(spec));
      }
      break;
  }
  return specs;
}

std::vector<ModelOutcome> RunStudy(StudyKind kind, const std::vector<ReviewRecord>& records,
                                   const StudyOptions& options) {
  if (kind == StudyKind::kStudy3) {
    throw ContractViolation("study3 runs on synthetic records; use RunSyntheticStudy");
  }
  ModelData data = BuildModelData(records);
  FitInputs in;
  in.study = std::string(StudyName(kind));
  if (kind == StudyKind::kStudy1B) {
    for (const OutsiderSample& s : kOutsiderSamples) {
      auto [column, threshold] = OutsiderCoding(records, s);
      in.notes.push_back(std::string(s.column) + " median threshold " + FormatDouble(threshold));
      data.AddCategorical(s.column, std::move(column));
    }
  }

  std::vector<std::int64_t> clusters;
  std::unordered_map<std::string, std::int64_t> cluster_id;
  std::vector<std::string> users;
  for (const ReviewRecord& r : records) {
    auto [it, inserted] =
        cluster_id.try_emplace(r.business_id, static_cast<std::int64_t>(cluster_id.size()));
    clusters.push_back(it->second);
    users.push_back(r.user_id);
  }
  in.data = &data;
  in.clusters = &clusters;
  in.users = &users;
  return FitAll(in, StudySpecs(kind, options.standardize), options);
}

std::vector<ModelOutcome> RunSyntheticStudy(const std::vector<SyntheticRecord>& records,
                                            const StudyOptions& options) {
  const ModelData data = BuildSyntheticModelData(records);
  FitInputs in;
  in.study = std::string(StudyName(StudyKind::kStudy3));
  in.data = &data;
  StudyOptions opts = options;
  opts.cluster_by_business = false;
  opts.within_user = false;
  return FitAll(in, StudySpecs(StudyKind::kStudy3, options.standardize), opts);
}

std::vector<WaldRow> RegionWaldComparisons(const std::vector<ModelOutcome>& outcomes) {
  std::vector<WaldRow> rows;
  for (const ModelOutcome& m : outcomes) {
    if (!m.result) continue;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < m.result->names.size(); ++k) {
      if (m.result->names[k].rfind("region[", 0) == 0) idx.push_back(k);
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        rows.push_back({m.study, m.model, m.result->names[idx[a]], m.result->names[idx[b]],
                        WaldCompare(*m.result, idx[a], idx[b])});
      }
    }
  }
  return rows;
}

void WriteStudyCsvHeader(std::ostream& out) {
  CsvWriter(out).WriteRow({"study", "model", "outcome", "term", "estimate", "se", "t", "p",
                           "ci_low", "ci_high", "stars", "n", "dof", "r_squared"});
}

void WriteStudyCsv(std::ostream& out, const std::vector<ModelOutcome>& outcomes) {
  CsvWriter w(out);
  for (const ModelOutcome& m : outcomes) {
    if (!m.result) continue;
    const RegressionResult& r = *m.result;
    for (std::size_t k = 0; k < r.names.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      w.WriteRow({m.study, m.model, m.outcome, r.names[k], FormatDouble(r.beta[i]),
                  FormatDouble(r.se[i]), FormatDouble(r.t[i]), FormatDouble(r.p[i]),
                  FormatDouble(r.ci95[k].first), FormatDouble(r.ci95[k].second),
                  SignificanceStars(r.p[i]), std::to_string(r.n), FormatDouble(r.dof),
                  FormatDouble(r.r_squared)});
    }
  }
}

nlohmann::json StudyToJson(const std::vector<ModelOutcome>& outcomes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ModelOutcome& m : outcomes) {
    nlohmann::json j;
    j["study"] = m.study;
    j["model"] = m.model;
    j["outcome"] = m.outcome;
    j["warnings"] = m.warnings;
    if (!m.skipped.empty()) j["skipped"] = m.skipped;
    nlohmann::json vif = nlohmann::json::object();
    for (std::size_t k = 0; k < m.vif.size(); ++k) {
      if (std::isinf(m.vif[k])) {
        vif[m.vif_terms[k]] = "inf";
      } else {
        vif[m.vif_terms[k]] = m.vif[k];
      }
    }
    j["vif"] = std::move(vif);
    j["vif_ok"] = m.vif_ok;
    if (m.result) j["result"] = ResultToJson(*m.result);
    arr.push_back(std::move(j));
  }
  return arr;
}

void WriteWaldCsv(std::ostream& out, const std::vector<WaldRow>& rows) {
  CsvWriter w(out);
  w.WriteRow({"study", "model", "term_a", "term_b", "z", "p", "stars"});
  for (const WaldRow& r : rows) {
    w.WriteRow({r.study, r.model, r.term_a, r.term_b, FormatDouble(r.wald.z),
                FormatDouble(r.wald.p), SignificanceStars(r.wald.p)});
  }
}

}  // namespace foodframe
