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

#include "dsrm/miner.h"

#include <fstream>

#include "dsrm/error.h"
#include "dsrm/rng.h"
#include "json.hpp"

namespace dsrm {
namespace {

// Keeps the KG stream independent of the corpus stream for a given seed.
constexpr std::uint64_t kKgStreamSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> WindowPairs(
    const AnchorDocument& doc, std::int64_t delta) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const auto& anchors = doc.anchors;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (!anchors[i].gold) continue;
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      if (i == j || !anchors[j].gold) continue;
      const std::int64_t gap = anchors[i].offset - anchors[j].offset;
      if ((gap < 0 ? -gap : gap) <= delta) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

std::vector<EntityGroup> MinePairs(std::span<const AnchorDocument> corpus,
                                   const MentionDictionary& dict,
                                   const MinerConfig& config) {
  Rng rng(config.seed);
  std::vector<EntityGroup> groups;
  for (const auto& doc : corpus) {
    for (const auto& [i, j] : WindowPairs(doc, config.delta)) {
      const Anchor& ti = doc.anchors[i];
      const Anchor& tj = doc.anchors[j];
      std::vector<EntityId> pool;
      for (const auto& c : dict.Candidates(tj.surface)) {
        if (c.id != *tj.gold) pool.push_back(c.id);
      }
      if (pool.empty()) continue;
      groups.push_back({*ti.gold, *tj.gold, rng.Sample(std::move(pool), config.negatives)});
    }
  }
  return groups;
}

std::vector<EntityGroup> MineKgPairs(const KnowledgeGraph& kg,
                                     const MinerConfig& config) {
  Rng rng(config.seed ^ kKgStreamSalt);
  std::vector<EntityId> all;
  for (const auto& [id, rec] : kg.entities()) all.push_back(id);

  auto sample = [&](const EntityId& a, const EntityId& b) {
    std::vector<EntityId> pool;
    pool.reserve(all.size());
    for (const auto& id : all) {
      if (id != a && id != b) pool.push_back(id);
    }
    return rng.Sample(std::move(pool), config.negatives);
  };

  std::vector<EntityGroup> groups;
  for (const auto& [id, rec] : kg.entities()) {
    for (const auto& fact : rec.facts) {
      if (fact.object == id) continue;
      for (const auto& [a, b] : {std::pair{id, fact.object}, std::pair{fact.object, id}}) {
        auto negatives = sample(a, b);
        if (negatives.empty()) continue;
        groups.push_back({a, b, std::move(negatives)});
      }
    }
  }
  return groups;
}

void WriteGroups(std::span<const EntityGroup> groups, std::ostream& out) {
  for (const auto& g : groups) {
    nlohmann::ordered_json j;
    j["anchor"] = g.anchor;
    j["positive"] = g.positive;
    j["negatives"] = g.negatives;
    out << j.dump() << '\n';
  }
}

void SaveGroups(std::span<const EntityGroup> groups, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  WriteGroups(groups, out);
}

std::vector<EntityGroup> ReadGroups(std::istream& in, const std::string& source_name) {
  std::vector<EntityGroup> groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      EntityGroup g;
      g.anchor = j.at("anchor").get<std::string>();
      g.positive = j.at("positive").get<std::string>();
      g.negatives = j.at("negatives").get<std::vector<std::string>>();
      for (const auto& n : g.negatives) {
        if (n == g.positive) throw DataError(where + "negative equals positive");
      }
      groups.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what());
    }
  }
  return groups;
}

std::vector<EntityGroup> LoadGroups(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return ReadGroups(in, path.string());
}

}  // namespace dsrm
