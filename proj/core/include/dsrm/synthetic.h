// Copyright 2026 The DSRM Authors
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

#ifndef DSRM_SYNTHETIC_H_
#define DSRM_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <vector>

#include "dsrm/kg.h"

namespace dsrm {

// Two topical clusters (basketball and city life) joined by six shared,
// ambiguous surfaces. Training priors favor one sense of each surface;
// held-out documents always use the disfavored sense next to unambiguous
// mentions from the same cluster, so prior-only decoding is misleading.
struct SyntheticConfig {
  std::uint64_t seed = 2026;
  std::size_t train_docs = 200;
  std::size_t heldout_docs = 20;
  std::size_t facts_per_entity = 6;
  std::size_t anchors_per_doc = 4;
  std::size_t heldout_seed_mentions = 3;
};

struct SyntheticFixture {
  KnowledgeGraph kg;
  std::vector<AnchorDocument> corpus;
  std::vector<AnchorDocument> heldout;
  std::map<EntityId, int> cluster;
};

SyntheticFixture GenerateSynthetic(const SyntheticConfig& config = {});

}  // namespace dsrm

#endif  // DSRM_SYNTHETIC_H_
