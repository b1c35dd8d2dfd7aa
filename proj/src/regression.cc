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

#include "foodframe/regression.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "foodframe/csv.h"
#include "foodframe/distributions.h"
#include "foodframe/error.h"

namespace foodframe {

void ModelData::CheckLength(const std::string& name, std::size_t n) {
  if (!sized_) {
    rows_ = n;
    sized_ = true;
  } else if (n != rows_) {
    throw ContractViolation("model data: column '" + name + "' has " + std::to_string(n) +
                            " rows, expected " + std::to_string(rows_));
  }
}

void ModelData::AddNumeric(const std::string& name, std::vector<double> values) {
  CheckLength(name, values.size());
  numeric_[name] = std::move(values);
}

void ModelData::AddCategorical(const std::string& name, std::vector<std::string> values) {
  CheckLength(name, values.size());
  categorical_[name] = std::move(values);
}

const std::vector<double>& ModelData::Numeric(const std::string& name) const {
  auto it = numeric_.find(name);
  if (it == numeric_.end()) throw ConfigError("model data: no numeric column '" + name + "'");
  return it->second;
}

const std::vector<std::string>& ModelData::Categorical(const std::string& name) const {
  auto it = categorical_.find(name);
  if (it == categorical_.end()) {
    throw ConfigError("model data: no categorical column '" + name + "'");
  }
  return it->second;
}

Term Term::Continuous(std::string name) {
  Term t;
  t.kind = Kind::kContinuous;
  t.name = std::move(name);
  return t;
}

Term Term::Categorical(std::string name, std::vector<std::string> levels, std::string reference) {
  if (std::find(levels.begin(), levels.end(), reference) == levels.end()) {
    throw ConfigError("term '" + name + "': reference level '" + reference + "' not in levels");
  }
  Term t;
  t.kind = Kind::kCategorical;
  t.name = std::move(name);
  t.levels = std::move(levels);
  t.reference = std::move(reference);
  return t;
}

DesignMatrix BuildDesignMatrix(const ModelData& data, const RegressionSpec& spec) {
  DesignMatrix out;
  const std::vector<double>& outcome = data.Numeric(spec.outcome);

  for (std::size_t r = 0; r < data.rows(); ++r) {
    bool keep = true;
    for (const SampleFilter& f : spec.filters) {
      const std::string& v = data.Categorical(f.column)[r];
      if (std::find(f.allowed.begin(), f.allowed.end(), v) == f.allowed.end()) {
        keep = false;
        break;
      }
    }
    if (keep) out.rows.push_back(r);
  }
  const std::size_t n = out.rows.size();
  if (n == 0) throw InputError("model '" + spec.name + "': empty sample");

  std::vector<std::string> names = {kInterceptName};
  std::vector<Eigen::VectorXd> cols = {Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))};

  for (const Term& term : spec.terms) {
    if (term.kind == Term::Kind::kContinuous) {
      const std::vector<double>& src = data.Numeric(term.name);
      Eigen::VectorXd col(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const double v = src[out.rows[i]];
        if (!std::isfinite(v)) {
          throw InputError("model '" + spec.name + "': missing value in '" + term.name +
                           "' at row " + std::to_string(out.rows[i]));
        }
        col[static_cast<Eigen::Index>(i)] = v;
      }
      const double mean = col.mean();
      const double sd =
          n > 1 ? std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n - 1)) : 0;
      if (!(sd > 0.0)) {
        out.warnings.push_back("term '" + term.name + "' is constant in the sample; dropped");
        continue;
      }
      if (spec.standardize) col = (col.array() - mean) / sd;
      names.push_back(term.name);
      cols.push_back(std::move(col));
      continue;
    }

    const std::vector<std::string>& src = data.Categorical(term.name);
    std::set<std::string> present;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& v = src[out.rows[i]];
      if (std::find(term.levels.begin(), term.levels.end(), v) == term.levels.end()) {
        throw InputError("model '" + spec.name + "': value '" + v + "' of '" + term.name +
                         "' is not a declared level");
      }
      present.insert(v);
    }
    std::string reference = term.reference;
    if (!present.count(reference)) {
      for (const std::string& level : term.levels) {
        if (present.count(level)) {
          reference = level;
          break;
        }
      }
      out.warnings.push_back("term '" + term.name + "': reference level '" + term.reference +
                             "' absent from sample; using '" + reference + "'");
    }
    for (const std::string& level : term.levels) {
      if (level == reference) continue;
      if (!present.count(level)) {
        out.warnings.push_back("term '" + term.name + "': level '" + level +
                               "' absent from sample; column dropped");
        continue;
      }
      Eigen::VectorXd col(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        col[static_cast<Eigen::Index>(i)] = src[out.rows[i]] == level ? 1.0 : 0.0;
      }
      names.push_back(term.name + "[" + level + "]");
      cols.push_back(std::move(col));
    }
  }

  out.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.x.col(static_cast<Eigen::Index>(c)) = cols[c];
  out.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double v = outcome[out.rows[i]];
    if (!std::isfinite(v)) {
      throw InputError("model '" + spec.name + "': missing outcome at row " +
                       std::to_string(out.rows[i]));
    }
    out.y[static_cast<Eigen::Index>(i)] = v;
  }
  out.columns = std::move(names);
  return out;
}

std::optional<std::size_t> RegressionResult::Index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

RegressionResult FitOls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const std::vector<std::string>& names, const OlsOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (y.size() != n) throw ContractViolation("fit ols: y length does not match X rows");
  if (static_cast<Eigen::Index>(names.size()) != p) {
    throw ContractViolation("fit ols: names length does not match X columns");
  }
  if (p == 0) throw ContractViolation("fit ols: design has no columns");
  const double dof = static_cast<double>(n) - static_cast<double>(p) -
                     static_cast<double>(options.absorbed_parameters);
  if (!(dof > 0.0)) {
    throw NumericError("fit ols: no residual degrees of freedom (n=" + std::to_string(n) +
                       ", p=" + std::to_string(p) + ")");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    // Columns with weight in a null-space vector of X take part in a linear
    // dependence; naming all of them is more useful than the pivot's pick.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(x);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd kernel = lu.kernel();
    std::string dependent;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (kernel.row(j).cwiseAbs().maxCoeff() <= 1e-8) continue;
      if (!dependent.empty()) dependent += ", ";
      dependent += names[static_cast<std::size_t>(j)];
    }
    throw NumericError("fit ols: rank deficient design; collinear columns: " + dependent);
  }

  RegressionResult r;
  r.names = names;
  r.n = static_cast<std::size_t>(n);
  r.dof = dof;
  r.beta = qr.solve(y);
  r.fitted = x * r.beta;
  const Eigen::VectorXd resid = y - r.fitted;
  r.rss = resid.squaredNorm();
  r.sigma2 = r.rss / dof;
  const double tss = (y.array() - y.mean()).square().sum();
  r.r_squared = tss > 0 ? 1.0 - r.rss / tss : 0.0;

  // (X'X)^-1 = P R^-1 R^-T P^T.
  const Eigen::MatrixXd rmat =
      qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv = rmat.template triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * (rinv * rinv.transpose()) * perm.transpose();

  r.inference_dof = dof;
  if (options.clusters) {
    const auto& ids = *options.clusters;
    if (static_cast<Eigen::Index>(ids.size()) != n) {
      throw ContractViolation("fit ols: cluster ids length does not match X rows");
    }
    std::unordered_map<std::int64_t, Eigen::VectorXd> scores;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto [it, inserted] = scores.try_emplace(ids[static_cast<std::size_t>(i)]);
      if (inserted) it->second = Eigen::VectorXd::Zero(p);
      it->second += x.row(i).transpose() * resid[i];
    }
    const double g = static_cast<double>(scores.size());
    if (g < 2) throw NumericError("fit ols: cluster-robust errors need at least two clusters");
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [id, s] : scores) meat += s * s.transpose();
    const double correction =
        g / (g - 1.0) * (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - p);
    r.covariance = correction * bread * meat * bread;
    r.inference_dof = g - 1.0;
    r.se_type = "cluster";
  } else {
    r.covariance = r.sigma2 * bread;
  }
  r.covariance = 0.5 * (r.covariance + r.covariance.transpose());

  r.se = r.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  r.t.resize(p);
  r.p.resize(p);
  r.ci95.resize(static_cast<std::size_t>(p));
  const double q = StudentTQuantileTwoSided(0.05, r.inference_dof);
  for (Eigen::Index k = 0; k < p; ++k) {
    r.t[k] = r.se[k] > 0 ? r.beta[k] / r.se[k] : std::numeric_limits<double>::infinity();
    r.p[k] = r.se[k] > 0 ? StudentTTwoSidedP(r.t[k], r.inference_dof) : 0.0;
    r.ci95[static_cast<std::size_t>(k)] = {r.beta[k] - q * r.se[k], r.beta[k] + q * r.se[k]};
  }
  return r;
}

RegressionResult FitOls(const DesignMatrix& design, const OlsOptions& options) {
  return FitOls(design.x, design.y, design.columns, options);
}

WaldResult WaldCompare(const RegressionResult& result, std::size_t i, std::size_t j) {
  const auto p = static_cast<std::size_t>(result.beta.size());
  if (i >= p || j >= p) throw ContractViolation("wald compare: coefficient index out of range");
  if (i == j) throw ContractViolation("wald compare: comparing a coefficient with itself");
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  const double var = result.covariance(a, a) + result.covariance(b, b) -
                     2.0 * result.covariance(a, b);
  if (!(var > 0.0)) throw NumericError("wald compare: nonpositive variance of the difference");
  WaldResult w;
  w.z = (result.beta[a] - result.beta[b]) / std::sqrt(var);
  w.p = NormalTwoSidedP(w.z);
  return w;
}

std::vector<double> Vif(const Eigen::MatrixXd& x) {
  const Eigen::Index p = x.cols();
  if (p < 3) throw ContractViolation("vif: need at least two non-intercept columns");
  std::vector<double> out;
  for (Eigen::Index k = 1; k < p; ++k) {
    Eigen::MatrixXd others(x.rows(), p - 1);
    others << x.leftCols(k), x.rightCols(p - k - 1);
    const Eigen::VectorXd target = x.col(k);
    const double tss = (target.array() - target.mean()).square().sum();
    if (!(tss > 0.0)) {
      out.push_back(kVifInfinite);
      continue;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
    const Eigen::VectorXd coef = qr.solve(target);
    const double rss = (target - others * coef).squaredNorm();
    if (rss <= 1e-12 * tss) {
      out.push_back(kVifInfinite);
      continue;
    }
    const double r2 = 1.0 - rss / tss;
    out.push_back(1.0 / (1.0 - r2));
  }
  return out;
}

std::size_t DemeanWithinGroups(DesignMatrix& design, const std::vector<std::string>& groups) {
  const Eigen::Index n = design.x.rows();
  if (static_cast<Eigen::Index>(groups.size()) != n) {
    throw ContractViolation("demean: group labels length does not match design rows");
  }
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> gid(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto [it, inserted] = index.try_emplace(groups[static_cast<std::size_t>(i)], index.size());
    gid[static_cast<std::size_t>(i)] = it->second;
  }
  const std::size_t g = index.size();
  const Eigen::Index p = design.x.cols();

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g), p + 1);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(gid[static_cast<std::size_t>(i)]);
    sums.row(k).head(p) += design.x.row(i);
    sums(k, p) += design.y[i];
    counts[k] += 1.0;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(gid[static_cast<std::size_t>(i)]);
    design.x.row(i) -= sums.row(k).head(p) / counts[k];
    design.y[i] -= sums(k, p) / counts[k];
  }

  const auto it = std::find(design.columns.begin(), design.columns.end(), kInterceptName);
  if (it != design.columns.end()) {
    const auto c = static_cast<Eigen::Index>(it - design.columns.begin());
    Eigen::MatrixXd reduced(n, p - 1);
    reduced << design.x.leftCols(c), design.x.rightCols(p - c - 1);
    design.x = std::move(reduced);
    design.columns.erase(it);
  }
  design.warnings.push_back("within-group demeaning applied over " + std::to_string(g) +
                            " groups; approximates a random-effects model");
  return g;
}

const char* SignificanceStars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "ns";
}

void WriteCoefficientsCsvHeader(std::ostream& out) {
  CsvWriter(out).WriteRow({"model", "outcome", "term", "estimate", "se", "t", "p", "ci_low",
                           "ci_high", "stars", "n", "dof", "r_squared"});
}

void WriteCoefficientsCsv(std::ostream& out, const std::string& model, const std::string& outcome,
                          const RegressionResult& result) {
  CsvWriter w(out);
  for (std::size_t k = 0; k < result.names.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    w.WriteRow({model, outcome, result.names[k], FormatDouble(result.beta[i]),
                FormatDouble(result.se[i]), FormatDouble(result.t[i]), FormatDouble(result.p[i]),
                FormatDouble(result.ci95[k].first), FormatDouble(result.ci95[k].second),
                SignificanceStars(result.p[i]), std::to_string(result.n),
                FormatDouble(result.dof), FormatDouble(result.r_squared)});
  }
}

nlohmann::json ResultToJson(const RegressionResult& result) {
  nlohmann::json j;
  j["n"] = result.n;
  j["dof"] = result.dof;
  j["inference_dof"] = result.inference_dof;
  j["r_squared"] = result.r_squared;
  j["sigma2"] = result.sigma2;
  j["se_type"] = result.se_type;
  nlohmann::json coefs = nlohmann::json::array();
  for (std::size_t k = 0; k < result.names.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    coefs.push_back({{"term", result.names[k]},
                     {"estimate", result.beta[i]},
                     {"se", result.se[i]},
                     {"t", result.t[i]},
                     {"p", result.p[i]},
                     {"ci_low", result.ci95[k].first},
                     {"ci_high", result.ci95[k].second},
                     {"stars", SignificanceStars(result.p[i])}});
  }
  j["coefficients"] = std::move(coefs);
  nlohmann::json cov = nlohmann::json::array();
  for (Eigen::Index a = 0; a < result.covariance.rows(); ++a) {
    nlohmann::json jr = nlohmann::json::array();
    for (Eigen::Index b = 0; b < result.covariance.cols(); ++b) jr.push_back(result.covariance(a, b));
    cov.push_back(std::move(jr));
  }
  j["covariance"] = std::move(cov);
  return j;
}

}  // namespace foodframe
