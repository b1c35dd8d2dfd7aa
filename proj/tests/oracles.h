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

// Independent reference implementations used to derive expected values.
// They favor directness over speed and share no code with the library.

#ifndef FOODFRAME_TESTS_ORACLES_H_
#define FOODFRAME_TESTS_ORACLES_H_

#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace foodframe::oracle {

using Counts = std::map<std::string, long long>;

// Term-by-term weighted log-odds of `word` for group C against complement C'
// with prior P. nullopt where the variance term is undefined.
inline std::optional<double> NaiveDelta(const Counts& c, const Counts& not_c, const Counts& prior,
                                        const std::string& word) {
  auto get = [](const Counts& m, const std::string& w) -> long double {
    auto it = m.find(w);
    return it == m.end() ? 0.0L : static_cast<long double>(it->second);
  };
  auto total = [](const Counts& m) {
    long double t = 0;
    for (const auto& kv : m) t += kv.second;
    return t;
  };
  const long double n_wc = get(c, word);
  const long double n_wnc = get(not_c, word);
  const long double n_wp = get(prior, word);
  const long double n_c = total(c);
  const long double n_nc = total(not_c);
  const long double n_p = total(prior);
  if (n_wc + n_wp <= 0 || n_wnc + n_wp <= 0) return std::nullopt;
  const long double den_c = n_c - n_wc + n_p - n_wp;
  const long double den_nc = n_nc - n_wnc + n_p - n_wp;
  if (den_c <= 0 || den_nc <= 0) return std::nullopt;
  const long double l_c = (n_wc + n_wp) / den_c;
  const long double l_nc = (n_wnc + n_wp) / den_nc;
  const long double var = 1.0L / (n_wc + n_wp) + 1.0L / (n_wnc + n_wp);
  return static_cast<double>(std::log(l_c / l_nc) / std::sqrt(var));
}

}  // namespace foodframe::oracle

#endif  // FOODFRAME_TESTS_ORACLES_H_
