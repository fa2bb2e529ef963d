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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "dsrm/error.h"
#include "dsrm/miner.h"
#include "fixtures.h"

namespace dsrm {
namespace {

using testing::Record;

// Dictionary where surface "s<k>" has k + 1 candidates named "s<k>_<i>".
MentionDictionary FanDictionary(int surfaces) {
  std::map<std::string, std::map<EntityId, std::int64_t>> counts;
  for (int k = 0; k < surfaces; ++k) {
    for (int i = 0; i <= k; ++i) {
      counts["s" + std::to_string(k)]["s" + std::to_string(k) + "_" + std::to_string(i)] = i + 1;
    }
  }
  return MentionDictionary::FromCounts(counts);
}

AnchorDocument TwoAnchors(std::int64_t gap) {
  AnchorDocument doc{"d", std::string(static_cast<std::size_t>(gap) + 10, 'x'), {}};
  doc.anchors.push_back({0, "s3", "s3_0"});
  doc.anchors.push_back({gap, "s3", "s3_1"});
  return doc;
}

TEST(MinePairs, HundredCharsApartGivesBothDirections) {
  const auto dict = FanDictionary(4);
  const std::vector<AnchorDocument> corpus = {TwoAnchors(100)};
  const auto groups = MinePairs(corpus, dict, {});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].anchor, "s3_0");
  EXPECT_EQ(groups[0].positive, "s3_1");
  EXPECT_EQ(groups[1].anchor, "s3_1");
  EXPECT_EQ(groups[1].positive, "s3_0");
}

TEST(MinePairs, TwoHundredCharsApartGivesNothing) {
  const auto dict = FanDictionary(4);
  const std::vector<AnchorDocument> corpus = {TwoAnchors(200)};
  EXPECT_TRUE(MinePairs(corpus, dict, {}).empty());
}

TEST(MinePairs, WindowBoundaryIsInclusive) {
  EXPECT_EQ(WindowPairs(TwoAnchors(150), 150).size(), 2u);
  EXPECT_EQ(WindowPairs(TwoAnchors(151), 150).size(), 0u);
}

TEST(MinePairs, SevenCandidatesGiveFiveNegatives) {
  const auto dict = FanDictionary(7);  // s6 has 7 candidates
  AnchorDocument doc{"d", std::string(40, 'x'), {{0, "s0", "s0_0"}, {10, "s6", "s6_3"}}};
  const std::vector<AnchorDocument> corpus = {doc};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MinerConfig config;
    config.seed = seed;
    const auto groups = MinePairs(corpus, dict, config);
    ASSERT_EQ(groups.size(), 1u);  // the reverse direction has no negatives
    const auto& g = groups[0];
    EXPECT_EQ(g.positive, "s6_3");
    EXPECT_EQ(g.negatives.size(), 5u);
    std::set<EntityId> distinct(g.negatives.begin(), g.negatives.end());
    EXPECT_EQ(distinct.size(), 5u);
    EXPECT_EQ(distinct.count("s6_3"), 0u);
    for (const auto& n : g.negatives) EXPECT_EQ(n.rfind("s6_", 0), 0u);
  }
}

TEST(MinePairs, NilAnchorsSkipped) {
  const auto dict = FanDictionary(4);
  AnchorDocument doc{"d", std::string(40, 'x'), {{0, "s3", std::nullopt}, {10, "s3", "s3_1"}}};
  const std::vector<AnchorDocument> corpus = {doc};
  EXPECT_TRUE(MinePairs(corpus, dict, {}).empty());
}

TEST(MinePairs, EmptyCorpus) { EXPECT_TRUE(MinePairs({}, FanDictionary(2), {}).empty()); }

std::vector<AnchorDocument> RandomCorpus(std::mt19937_64& gen, int surfaces) {
  std::vector<AnchorDocument> corpus;
  for (int d = 0; d < 10; ++d) {
    AnchorDocument doc{"d" + std::to_string(d), std::string(600, 'x'), {}};
    std::int64_t offset = 0;
    for (int a = 0; a < 8; ++a) {
      offset += static_cast<std::int64_t>(gen() % 90);
      const int k = static_cast<int>(gen() % surfaces);
      const int i = static_cast<int>(gen() % (k + 1));
      doc.anchors.push_back({offset, "s" + std::to_string(k),
                             "s" + std::to_string(k) + "_" + std::to_string(i)});
    }
    corpus.push_back(doc);
  }
  return corpus;
}

TEST(MinePairs, Properties) {
  std::mt19937_64 gen(17);
  const int surfaces = 9;
  const auto dict = FanDictionary(surfaces);
  for (int trial = 0; trial < 10; ++trial) {
    const auto corpus = RandomCorpus(gen, surfaces);
    MinerConfig config;
    config.seed = static_cast<std::uint64_t>(trial);
    const auto groups = MinePairs(corpus, dict, config);
    EXPECT_EQ(groups, MinePairs(corpus, dict, config));
    for (const auto& g : groups) {
      EXPECT_EQ(std::count(g.negatives.begin(), g.negatives.end(), g.positive), 0);
      const auto cands = dict.Candidates(g.positive.substr(0, g.positive.find('_')));
      EXPECT_EQ(g.negatives.size(), std::min<std::size_t>(5, cands.size() - 1));
    }
    // Positive pairs before negative filtering are symmetric.
    std::map<std::pair<EntityId, EntityId>, int> pairs;
    for (const auto& doc : corpus) {
      for (const auto& [i, j] : WindowPairs(doc, config.delta)) {
        ++pairs[{*doc.anchors[i].gold, *doc.anchors[j].gold}];
      }
    }
    for (const auto& [p, count] : pairs) {
      EXPECT_EQ(count, (pairs[{p.second, p.first}])) << p.first << " " << p.second;
    }
  }
}

TEST(MineKgPairs, BothDirectionsWithGlobalNegatives) {
  std::vector<EntityRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back(Record("e" + std::to_string(i)));
  records[0].facts = {{"r", "e1"}};
  const auto kg = KnowledgeGraph::Build(std::move(records), {});
  const auto groups = MineKgPairs(kg, {});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].anchor, "e0");
  EXPECT_EQ(groups[0].positive, "e1");
  EXPECT_EQ(groups[1].anchor, "e1");
  EXPECT_EQ(groups[1].positive, "e0");
  for (const auto& g : groups) {
    EXPECT_EQ(g.negatives.size(), 5u);
    for (const auto& n : g.negatives) {
      EXPECT_NE(n, g.positive);
      EXPECT_NE(n, g.anchor);
    }
  }
}

TEST(Groups, JsonlRoundTripAndValidation) {
  const std::vector<EntityGroup> groups = {{"a", "b", {"c", "d"}}, {"b", "a", {"e"}}};
  std::stringstream buf;
  WriteGroups(groups, buf);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')),
            R"({"anchor":"a","positive":"b","negatives":["c","d"]})");
  EXPECT_EQ(ReadGroups(buf), groups);
  std::istringstream bad(R"({"anchor":"a","positive":"b","negatives":["b"]})");
  EXPECT_THROW(ReadGroups(bad), DataError);
}

}  // namespace
}  // namespace dsrm
