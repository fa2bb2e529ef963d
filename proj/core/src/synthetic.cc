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

#include "dsrm/synthetic.h"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>
#include <string>

#include "dsrm/rng.h"

namespace dsrm {
namespace {

constexpr std::size_t kAmbiguous = 6;

struct ClusterSpec {
  std::array<const char*, kAmbiguous> ambiguous_ids;
  std::vector<const char*> plain_ids;
  std::vector<const char*> relations;
  std::vector<const char*> roles;
  const char* topic_type;
  std::vector<const char*> vocabulary;
};

const std::array<const char*, kAmbiguous> kSharedSurfaces = {
    "Mercury", "Liberty", "Jordan", "Phoenix", "Kings", "Wade"};

const ClusterSpec& Spec(int c) {
  static const ClusterSpec kSports{
      {"Mercury_(team)", "Liberty_(team)", "Jordan_(player)", "Phoenix_(team)",
       "Kings_(team)", "Wade_(player)"},
      {"National_Hoop_League", "Riverton_Rockets", "Bayview_Bulls", "Tamsin_Reyes",
       "Granite_Arena", "Darius_Okafor", "Lena_Marsh", "Summit_Hawks", "Playoff_Cup",
       "Eastern_Conference", "Marco_Bellini", "Copper_Dome", "Tyrell_Banks",
       "Draft_Combine"},
      {"member_of", "plays_for", "coached_by", "home_of", "rival_of", "drafted_by"},
      {"team", "player", "venue", "competition"},
      "sports",
      {"basketball", "court", "season", "playoff", "dunk", "roster", "guard",
       "forward", "rebound", "tipoff", "arena", "league", "coach", "score"}};
  static const ClusterSpec kCivic{
      {"Mercury_(newspaper)", "Liberty_(statue)", "Jordan_(river)", "Phoenix_(city)",
       "Kings_(county)", "Wade_(mayor)"},
      {"Port_Ellery", "Ellery_City_Council", "Holt_Harbor", "Greystone_Bridge",
       "Civic_Museum", "Ellery_Transit", "Northgate_District", "Harbor_Authority",
       "Old_Town_Library", "Ellery_Courthouse", "Marlow_Park", "Ferry_Terminal",
       "Water_Board", "Clocktower_Square"},
      {"located_in", "governed_by", "adjacent_to", "operated_by", "part_of", "serves"},
      {"place", "institution", "person", "landmark"},
      "civic",
      {"municipal", "river", "harbor", "council", "borough", "transit", "district",
       "ferry", "bridge", "museum", "ordinance", "budget", "zoning", "citizens"}};
  return c == 0 ? kSports : kCivic;
}

const std::vector<const char*> kFiller = {
    "the", "report", "said", "on", "today", "with", "and", "later",
    "also", "news", "week", "after", "before", "then", "again", "noted"};

std::string Surface(const std::string& id) {
  std::string s = id;
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

// Texts look like "filler filler Surface filler Surface ..." so every
// anchor pair stays within a short window.
AnchorDocument Compose(std::string doc_id,
                       const std::vector<std::pair<std::string, EntityId>>& mentions,
                       Rng& rng) {
  AnchorDocument doc;
  doc.doc_id = std::move(doc_id);
  auto filler = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!doc.text.empty()) doc.text += ' ';
      doc.text += kFiller[rng.Below(kFiller.size())];
    }
  };
  for (const auto& [surface, id] : mentions) {
    filler(1 + rng.Below(2));
    doc.text += ' ';
    doc.anchors.push_back({static_cast<std::int64_t>(doc.text.size()), surface, id});
    doc.text += surface;
  }
  filler(1 + rng.Below(2));
  return doc;
}

}  // namespace

SyntheticFixture GenerateSynthetic(const SyntheticConfig& config) {
  if (config.anchors_per_doc < 2 || config.heldout_seed_mentions < 1 ||
      config.facts_per_entity < 1) {
    throw std::invalid_argument("synthetic config sizes too small");
  }
  Rng rng(config.seed);
  SyntheticFixture fx;

  std::array<std::vector<EntityId>, 2> members;
  std::vector<EntityRecord> records;
  std::map<EntityId, std::set<EntityId>> incoming;
  for (int c = 0; c < 2; ++c) {
    const auto& spec = Spec(c);
    for (const char* id : spec.ambiguous_ids) members[c].push_back(id);
    for (const char* id : spec.plain_ids) members[c].push_back(id);
    const std::size_t n = members[c].size();
    if (config.facts_per_entity >= n) {
      throw std::invalid_argument("facts_per_entity must be below the cluster size");
    }
    for (std::size_t i = 0; i < n; ++i) {
      EntityRecord rec;
      rec.id = members[c][i];
      rec.surface = i < kAmbiguous ? kSharedSurfaces[i] : Surface(rec.id);
      rec.types = {spec.topic_type, spec.roles[i % spec.roles.size()]};
      std::vector<std::string> words;
      for (int w = 0; w < 6; ++w) {
        words.push_back(spec.vocabulary[rng.Below(spec.vocabulary.size())]);
      }
      for (const auto& w : words) {
        if (!rec.description.empty()) rec.description += ' ';
        rec.description += w;
      }
      for (std::size_t d = 1; d <= config.facts_per_entity; ++d) {
        const EntityId& obj = members[c][(i + d) % n];
        rec.facts.push_back({spec.relations[(i + d) % spec.relations.size()], obj});
        incoming[obj].insert(rec.id);
      }
      fx.cluster[rec.id] = c;
      records.push_back(std::move(rec));
    }
  }
  // Link popularity without topical ties: the city shares ten linking pages
  // with the league, the league's own team only two.
  {
    const EntityId& league = members[0][kAmbiguous];
    const EntityId& team = members[0][kAmbiguous + 1];
    const EntityId& city = members[1][kAmbiguous];
    std::set<EntityId> to_league, to_city, to_team;
    for (std::size_t i = 0; i < 10; ++i) {
      if (members[1][i] == city) continue;
      to_league.insert(members[1][i]);
      to_city.insert(members[1][i]);
    }
    for (std::size_t i = 10; i < members[1].size(); ++i) to_city.insert(members[1][i]);
    to_league.insert({members[0][0], members[0][1], members[0][2]});
    to_city.insert(members[0][0]);
    to_team = {members[0][1], members[0][2]};
    for (std::size_t i = kAmbiguous + 2; i < kAmbiguous + 6; ++i) to_team.insert(members[0][i]);
    incoming[league] = std::move(to_league);
    incoming[city] = std::move(to_city);
    incoming[team] = std::move(to_team);
  }
  fx.kg = KnowledgeGraph::Build(std::move(records), std::move(incoming));

  // Surfaces 0..2 favor the sports sense, 3..5 the civic sense (70/30).
  auto favored = [](std::size_t s) { return s < kAmbiguous / 2 ? 0 : 1; };
  std::array<std::vector<std::size_t>, 2> schedule;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t s = 0; s < kAmbiguous; ++s) {
      const std::size_t count = favored(s) == c ? 14 : 6;
      for (std::size_t r = 0; r < count; ++r) schedule[c].push_back(s);
    }
    rng.Shuffle(schedule[c]);
  }

  std::array<std::size_t, 2> next_plain = {0, 0};
  std::array<std::size_t, 2> next_ambiguous = {0, 0};
  auto plain = [&](int c) {
    const std::size_t n = members[c].size() - kAmbiguous;
    const std::size_t i = kAmbiguous + (next_plain[c]++ % n);
    return std::make_pair(fx.kg.Get(members[c][i]).surface, members[c][i]);
  };

  for (std::size_t d = 0; d < config.train_docs; ++d) {
    const int c = static_cast<int>(d % 2);
    std::vector<std::pair<std::string, EntityId>> mentions;
    if (next_ambiguous[c] < schedule[c].size()) {
      const std::size_t s = schedule[c][next_ambiguous[c]++];
      mentions.emplace_back(kSharedSurfaces[s], members[c][s]);
    }
    while (mentions.size() < config.anchors_per_doc) mentions.push_back(plain(c));
    rng.Shuffle(mentions);
    fx.corpus.push_back(Compose("train-" + std::to_string(d), mentions, rng));
  }

  for (std::size_t d = 0; d < config.heldout_docs; ++d) {
    const int c = static_cast<int>(d % 2);
    std::vector<std::pair<std::string, EntityId>> mentions;
    for (std::size_t s = 0; s < kAmbiguous; ++s) {
      if (favored(s) != c) mentions.emplace_back(kSharedSurfaces[s], members[c][s]);
    }
    std::vector<std::size_t> pool(members[c].size() - kAmbiguous);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = kAmbiguous + i;
    for (std::size_t i : rng.Sample(pool, config.heldout_seed_mentions)) {
      mentions.emplace_back(fx.kg.Get(members[c][i]).surface, members[c][i]);
    }
    rng.Shuffle(mentions);
    fx.heldout.push_back(Compose("heldout-" + std::to_string(d), mentions, rng));
  }
  return fx;
}

}  // namespace dsrm
