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

#ifndef DSRM_MINER_H_
#define DSRM_MINER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dsrm/kg.h"

namespace dsrm {

// Id-level training group, encoded into a TrainingGroup before training.
struct EntityGroup {
  EntityId anchor;
  EntityId positive;
  std::vector<EntityId> negatives;

  friend bool operator==(const EntityGroup&, const EntityGroup&) = default;
};

struct MinerConfig {
  std::int64_t delta = 150;    // character window between anchor starts
  std::size_t negatives = 5;   // sampled per group
  std::uint64_t seed = 0;
};

// Ordered anchor index pairs (i, j), i != j, within one document whose start
// offsets differ by at most delta and whose golds are both non-NIL.
std::vector<std::pair<std::size_t, std::size_t>> WindowPairs(
    const AnchorDocument& doc, std::int64_t delta);

// Corpus pairs: for each window pair emit (gold_i, gold_j) with up to
// `negatives` other dictionary candidates of anchor j, sampled uniformly
// without replacement. Groups with no available negative are dropped.
// Output is in document order, then i, then j.
std::vector<EntityGroup> MinePairs(std::span<const AnchorDocument> corpus,
                                   const MentionDictionary& dict,
                                   const MinerConfig& config);

// KG pairs: each fact (e, rel, o) yields (e, o) and (o, e), with negatives
// drawn uniformly from all other entities. Entities in id order, facts in
// record order.
std::vector<EntityGroup> MineKgPairs(const KnowledgeGraph& kg,
                                     const MinerConfig& config);

// JSONL: {"anchor": id, "positive": id, "negatives": [ids]}
void WriteGroups(std::span<const EntityGroup> groups, std::ostream& out);
void SaveGroups(std::span<const EntityGroup> groups, const std::filesystem::path& path);
std::vector<EntityGroup> ReadGroups(std::istream& in,
                                    const std::string& source_name = "pairs");
std::vector<EntityGroup> LoadGroups(const std::filesystem::path& path);

}  // namespace dsrm

#endif  // DSRM_MINER_H_
