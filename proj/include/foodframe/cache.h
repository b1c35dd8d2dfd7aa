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

// Binary snapshot of the ingested corpus: filtered businesses, retained
// reviews (text included) and the census rows they link to.

#ifndef FOODFRAME_CACHE_H_
#define FOODFRAME_CACHE_H_

#include <string>

#include "foodframe/census.h"
#include "foodframe/corpus.h"

namespace foodframe {

struct CorpusCache {
  BusinessTable businesses;
  ReviewTable reviews;
  CensusTable census;
};

void SaveCorpusCache(const std::string& path, const CorpusCache& cache);
// Throws InputError on a missing, truncated or version-mismatched file.
CorpusCache LoadCorpusCache(const std::string& path);

}  // namespace foodframe

#endif  // FOODFRAME_CACHE_H_
