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

// Ordinary least squares with dummy-coded categorical terms.
//
// Fits use a column-pivoted Householder QR. Standard errors are the
// conventional sigma^2 (X'X)^-1 with sigma^2 = RSS / (n - p); a CR1
// cluster-robust variant is available on request. p-values are two-sided
// Student t, confidence intervals use the matching t quantile.

#ifndef FOODFRAME_REGRESSION_H_
#define FOODFRAME_REGRESSION_H_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace foodframe {

// Column store for model inputs: numeric and categorical columns of equal
// length. Missing numeric values are NaN, missing categorical values "".
class ModelData {
 public:
  void AddNumeric(const std::string& name, std::vector<double> values);
  void AddCategorical(const std::string& name, std::vector<std::string> values);

  std::size_t rows() const { return rows_; }
  bool HasNumeric(const std::string& name) const { return numeric_.count(name) > 0; }
  bool HasCategorical(const std::string& name) const { return categorical_.count(name) > 0; }
  const std::vector<double>& Numeric(const std::string& name) const;
  const std::vector<std::string>& Categorical(const std::string& name) const;

 private:
  void CheckLength(const std::string& name, std::size_t n);

  std::size_t rows_ = 0;
  bool sized_ = false;
  std::map<std::string, std::vector<double>> numeric_;
  std::map<std::string, std::vector<std::string>> categorical_;
};

struct Term {
  enum class Kind { kContinuous, kCategorical };

  Kind kind = Kind::kContinuous;
  std::string name;
  std::vector<std::string> levels;  // categorical only, in column order
  std::string reference;

  static Term Continuous(std::string name);
  // Throws ConfigError unless reference is one of levels.
  static Term Categorical(std::string name, std::vector<std::string> levels,
                          std::string reference);
};

// Keeps rows whose categorical column value is in `allowed`.
struct SampleFilter {
  std::string column;
  std::vector<std::string> allowed;
};

struct RegressionSpec {
  std::string name;
  std::string outcome;  // numeric column
  std::vector<Term> terms;
  std::vector<SampleFilter> filters;
  bool standardize = true;  // z-score continuous terms over the sample
};

struct DesignMatrix {
  Eigen::MatrixXd x;  // intercept first
  Eigen::VectorXd y;
  std::vector<std::string> columns;  // "(Intercept)", "region[EUR]", "length"
  std::vector<std::size_t> rows;     // source row of each design row
  std::vector<std::string> warnings;
};

inline constexpr const char* kInterceptName = "(Intercept)";

// Applies the spec's filters, expands categorical terms into indicators for
// every non-reference level present in the sample, and standardizes
// continuous terms when requested. Levels absent from the sample and
// constant continuous terms are dropped with a warning; if the reference
// level itself is absent the first present level takes its place. Throws
// InputError on an empty sample, a missing value, or an undeclared level.
DesignMatrix BuildDesignMatrix(const ModelData& data, const RegressionSpec& spec);

struct OlsOptions {
  // Cluster id per row; when set, standard errors are CR1 cluster-robust and
  // inference uses G - 1 degrees of freedom.
  std::optional<std::vector<std::int64_t>> clusters;
  // Parameters absorbed by a prior transform (within-group demeaning).
  std::size_t absorbed_parameters = 0;
};

struct RegressionResult {
  std::vector<std::string> names;
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::VectorXd t;
  Eigen::VectorXd p;
  std::vector<std::pair<double, double>> ci95;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd fitted;
  std::size_t n = 0;
  double dof = 0.0;            // n - p - absorbed
  double inference_dof = 0.0;  // dof, or G - 1 under clustering
  double rss = 0.0;
  double sigma2 = 0.0;
  double r_squared = 0.0;
  std::string se_type = "conventional";

  // Index of a named coefficient, or nullopt.
  std::optional<std::size_t> Index(const std::string& name) const;
};

// Throws NumericError on rank deficiency (naming the dependent columns) or
// when n does not exceed the parameter count.
RegressionResult FitOls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const std::vector<std::string>& names, const OlsOptions& options = {});
RegressionResult FitOls(const DesignMatrix& design, const OlsOptions& options = {});

struct WaldResult {
  double z = 0.0;
  double p = 1.0;
};

// z = (b_i - b_j) / sqrt(var_i + var_j - 2 cov_ij), normal two-sided p.
WaldResult WaldCompare(const RegressionResult& result, std::size_t i, std::size_t j);

inline constexpr double kVifInfinite = std::numeric_limits<double>::infinity();

// One VIF per column after the first (the intercept), each from regressing
// that column on all the others. Perfect collinearity yields kVifInfinite.
std::vector<double> Vif(const Eigen::MatrixXd& x);

// Within transform: subtracts group means from y and every non-intercept
// column, then removes the intercept. Returns the number of groups, which
// should be passed as OlsOptions::absorbed_parameters. This only
// approximates a random-effects model.
std::size_t DemeanWithinGroups(DesignMatrix& design, const std::vector<std::string>& groups);

// "***" p < 0.001, "**" p < 0.01, "*" p < 0.05, else "ns".
const char* SignificanceStars(double p);

// model,outcome,term,estimate,se,t,p,ci_low,ci_high,stars,n,dof,r_squared
void WriteCoefficientsCsvHeader(std::ostream& out);
void WriteCoefficientsCsv(std::ostream& out, const std::string& model, const std::string& outcome,
                          const RegressionResult& result);

nlohmann::json ResultToJson(const RegressionResult& result);

}  // namespace foodframe

#endif  // FOODFRAME_REGRESSION_H_
