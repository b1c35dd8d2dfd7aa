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

#include "foodframe/cache.h"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/map.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include <cstdint>
#include <fstream>

#include "foodframe/error.h"

namespace foodframe {

template <class Archive>
void serialize(Archive& ar, Business& b) {
  int region = static_cast<int>(b.region);
  ar(b.business_id, b.name, b.state, b.zipcode, b.latitude, b.longitude, b.categories,
     b.cuisine_tags, region, b.price_tier, b.mean_stars, b.review_count);
  b.region = static_cast<Region>(region);
}

template <class Archive>
void serialize(Archive& ar, Review& r) {
  std::uint64_t tokens = r.token_count;
  ar(r.review_id, r.business_id, r.user_id, r.stars, r.text, tokens, r.nonlocal);
  r.token_count = static_cast<std::size_t>(tokens);
}

template <class Archive>
void serialize(Archive& ar, NeighborhoodMeta& n) {
  ar(n.zipcode, n.median_income, n.race_counts, n.diversity, n.pct_asian, n.pct_hispanic);
}

namespace {

constexpr std::uint32_t kMagic = 0x46464331;  // "FFC1"
constexpr std::uint32_t kVersion = 1;

}  // namespace

void SaveCorpusCache(const std::string& path, const CorpusCache& cache) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  cereal::PortableBinaryOutputArchive ar(out);
  std::vector<Business> businesses = cache.businesses.businesses();
  std::vector<Review> reviews = cache.reviews.reviews();
  std::vector<NeighborhoodMeta> census = cache.census.rows();
  ar(kMagic, kVersion, businesses, reviews, census);
}

CorpusCache LoadCorpusCache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("missing input: corpus cache " + path);
  std::uint32_t magic = 0;
  std::uint32_t version = 0;
  std::vector<Business> businesses;
  std::vector<Review> reviews;
  std::vector<NeighborhoodMeta> census;
  try {
    cereal::PortableBinaryInputArchive ar(in);
    ar(magic, version);
    if (magic != kMagic || version != kVersion) {
      throw InputError("corpus cache " + path + ": unrecognized format or version");
    }
    ar(businesses, reviews, census);
  } catch (const cereal::Exception& e) {
    throw InputError("corpus cache " + path + ": " + e.what());
  }
  return {BusinessTable(std::move(businesses)), ReviewTable(std::move(reviews)),
          CensusTable(std::move(census))};
}

}  // namespace foodframe
