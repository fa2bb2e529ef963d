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
#include <cmath>
#include <random>
#include <sstream>

#include "dsrm/error.h"
#include "dsrm/metrics.h"

namespace dsrm {
namespace {

RankedList List(std::vector<double> gains) {
  RankedList l{"q", {}, std::move(gains)};
  for (std::size_t i = 0; i < l.gains.size(); ++i) l.candidates.push_back("c" + std::to_string(i));
  return l;
}

TEST(Ndcg, HandValues) {
  EXPECT_NEAR(NdcgAtK(List({0, 1}), 2), 1.0 / std::log2(3.0), 1e-15);
  EXPECT_NEAR(NdcgAtK(List({0, 1}), 2), 0.6309, 1e-4);
  EXPECT_EQ(NdcgAtK(List({1, 0}), 2), 1.0);
  EXPECT_EQ(NdcgAtK(List({0, 0, 0}), 3), 0.0);
  EXPECT_EQ(NdcgAtK(List({0, 1}), 1), 0.0);
  // Graded gains: DCG = 1 + 3/log2(3), IDCG = 3 + 1/log2(3).
  EXPECT_NEAR(NdcgAtK(List({1, 2}), 5), (1 + 3 / std::log2(3.0)) / (3 + 1 / std::log2(3.0)),
              1e-15);
}

TEST(Ndcg, RejectsBadInput) {
  EXPECT_THROW(NdcgAtK(List({1}), 0), std::invalid_argument);
  EXPECT_THROW(NdcgAtK(List({-1}), 1), std::invalid_argument);
  RankedList dup{"q", {"a", "a"}, {1, 0}};
  EXPECT_THROW(NdcgAtK(dup, 2), std::invalid_argument);
}

TEST(Ndcg, SortedOrderDominates) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> g(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> gains(1 + gen() % 12);
    for (double& x : gains) x = g(gen);
    auto ideal = gains;
    std::sort(ideal.rbegin(), ideal.rend());
    for (std::size_t k : {1, 3, 5, 10}) {
      const double v = NdcgAtK(List(gains), k);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, NdcgAtK(List(ideal), k) + 1e-15);
    }
  }
}

TEST(AveragePrecision, HandValues) {
  EXPECT_NEAR(AveragePrecision(List({0, 1, 1})), (0.5 + 2.0 / 3.0) / 2.0, 1e-15);
  EXPECT_NEAR(AveragePrecision(List({0, 1, 1})), 0.5833, 1e-4);
  EXPECT_EQ(AveragePrecision(List({1, 1})), 1.0);
  EXPECT_EQ(AveragePrecision(List({0, 0})), 0.0);
  const std::vector<RankedList> lists = {List({0, 1, 1}), List({1, 0})};
  EXPECT_NEAR(MeanAveragePrecision(lists), (0.5833333333333334 + 1.0) / 2, 1e-15);
  const std::vector<RankedList> swapped = {lists[1], lists[0]};
  EXPECT_EQ(MeanAveragePrecision(lists), MeanAveragePrecision(swapped));
  EXPECT_THROW(MeanAveragePrecision(std::span<const RankedList>{}), std::invalid_argument);
}

using Decisions = std::map<MentionKey, std::optional<EntityId>>;

TEST(PrecisionAt1, MicroAndMacro) {
  const Decisions gold = {{{"d1", 0}, "A"}, {{"d1", 5}, "B"}, {{"d2", 0}, "C"},
                          {{"d2", 9}, std::nullopt}};
  const Decisions pred = {{{"d1", 0}, "A"}, {{"d1", 5}, "X"}, {{"d2", 0}, "C"},
                          {{"d2", 9}, "Y"}};
  EXPECT_NEAR(PrecisionAt1(pred, gold, Averaging::kMicro), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(PrecisionAt1(pred, gold, Averaging::kMacro), 0.75, 1e-15);
}

TEST(PrecisionAt1, MissingAndNilPredictionsAreWrong) {
  const Decisions gold = {{{"d", 0}, "A"}, {{"d", 1}, "B"}};
  const Decisions pred = {{{"d", 1}, std::nullopt}};
  EXPECT_EQ(PrecisionAt1(pred, gold, Averaging::kMicro), 0.0);
  const Decisions nil_only = {{{"d", 0}, std::nullopt}};
  EXPECT_THROW(PrecisionAt1(pred, nil_only, Averaging::kMicro), std::invalid_argument);
}

TEST(PrecisionAt1, DocumentsWithOnlyNilExcludedFromMacro) {
  const Decisions gold = {{{"a", 0}, "A"}, {{"b", 0}, std::nullopt}};
  const Decisions pred = {{{"a", 0}, "A"}, {{"b", 0}, "Z"}};
  EXPECT_EQ(PrecisionAt1(pred, gold, Averaging::kMacro), 1.0);
}

TEST(PrecisionAt1, MicroEqualsMacroOnUniformDocuments) {
  Decisions gold, pred;
  for (int d = 0; d < 5; ++d) {
    for (int m = 0; m < 4; ++m) {
      const MentionKey key{"d" + std::to_string(d), m};
      gold[key] = "e" + std::to_string(m);
      pred[key] = m < 3 ? gold[key] : std::optional<EntityId>("wrong");
    }
  }
  EXPECT_EQ(PrecisionAt1(pred, gold, Averaging::kMicro), 0.75);
  EXPECT_EQ(PrecisionAt1(pred, gold, Averaging::kMacro), 0.75);
}

TEST(GoldMentions, KeysByDocumentAndOffset) {
  const std::vector<AnchorDocument> docs = {
      {"d", "x y", {{0, "x", "X"}, {2, "y", std::nullopt}}}};
  const auto gold = GoldMentions(docs);
  ASSERT_EQ(gold.size(), 2u);
  EXPECT_EQ(gold.at({"d", 0}), std::optional<EntityId>("X"));
  EXPECT_FALSE(gold.at({"d", 2}).has_value());
}

TEST(ReadBenchmark, GroupsByQueryInFileOrder) {
  std::istringstream in("q2\ta\t1\nq1\tb\t0\n\nq2\tc\t2.5\n");
  const auto lists = ReadBenchmark(in);
  ASSERT_EQ(lists.size(), 2u);
  EXPECT_EQ(lists[0].query, "q2");
  EXPECT_EQ(lists[0].candidates, (std::vector<EntityId>{"a", "c"}));
  EXPECT_EQ(lists[0].gains, (std::vector<double>{1, 2.5}));
  EXPECT_EQ(lists[1].query, "q1");
}

TEST(ReadBenchmark, BadLinesReportLineNumber) {
  std::istringstream missing("q\ta\t1\nq\tb\n");
  try {
    ReadBenchmark(missing, "bench.tsv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("bench.tsv:2"), std::string::npos);
  }
  std::istringstream bad("q\ta\tx\n");
  EXPECT_THROW(ReadBenchmark(bad), DataError);
  std::istringstream negative("q\ta\t-1\n");
  EXPECT_THROW(ReadBenchmark(negative), DataError);
}

}  // namespace
}  // namespace dsrm
