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

#include "json.hpp"

#include "dsrm/kg.h"
#include "fixtures.h"
#include "pipeline.h"

namespace dsrm {
namespace {

using testing::RunCli;
using testing::TempDir;

// 100 entities; A and B each have 10 incoming links, 5 shared.
KnowledgeGraph OverlapKg() {
  std::vector<EntityRecord> records;
  std::map<EntityId, std::set<EntityId>> in;
  for (int i = 0; i < 98; ++i) records.push_back(testing::Record("E" + std::to_string(i)));
  records.push_back(testing::Record("A"));
  records.push_back(testing::Record("B"));
  for (int i = 0; i < 10; ++i) in["A"].insert("E" + std::to_string(i));
  for (int i = 5; i < 15; ++i) in["B"].insert("E" + std::to_string(i));
  return KnowledgeGraph::Build(std::move(records), std::move(in));
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  const auto r = RunCli({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("build-dict"), std::string::npos);
  EXPECT_EQ(RunCli({}).code, 1);
  EXPECT_EQ(RunCli({"score", "--measure", "ngd"}).code, 1);
}

TEST(Cli, MissingInputIsDataError) {
  TempDir dir;
  const auto r = RunCli({"prune", "--kg", dir.File("absent.jsonl"), "--out", dir.File("o")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, MalformedGraphIsDataError) {
  TempDir dir;
  testing::WriteText(dir.path() / "kg.jsonl", "{\"id\": \"x\"\n");
  EXPECT_EQ(RunCli({"prune", "--kg", dir.File("kg.jsonl"), "--out", dir.File("o")}).code, 2);
}

TEST(Cli, ScoreNgdOnOverlapFixture) {
  TempDir dir;
  SaveKg(OverlapKg(), dir.path() / "kg.jsonl");
  testing::WriteText(dir.path() / "pairs.tsv", "A\tB\n");
  const auto r = RunCli({"score", "--measure", "ngd", "--kg", dir.File("kg.jsonl"), "--pairs",
                         dir.File("pairs.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "A\tB\t0.698970\n");

  testing::WriteText(dir.path() / "bad.tsv", "A\tNobody\n");
  EXPECT_EQ(RunCli({"score", "--measure", "ngd", "--kg", dir.File("kg.jsonl"), "--pairs",
                    dir.File("bad.tsv")})
                .code,
            2);
}

TEST(Cli, DumpFeaturesWritesOneLinePerChannel) {
  TempDir dir;
  testing::WriteText(dir.path() / "kg.jsonl", testing::kThreeEntityKg);
  const auto r = RunCli({"dump-features", "--kg", dir.File("kg.jsonl"), "--ids", "Miami_Heat"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> channels;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("id"), "Miami_Heat");
    EXPECT_EQ(j.at("indices").size(), j.at("values").size());
    channels.push_back(j.at("channel"));
  }
  EXPECT_EQ(channels, (std::vector<std::string>{"entities", "relations", "types", "description"}));
}

TEST(Cli, ConfigFileSuppliesFlagsAndCliOverrides) {
  TempDir dir;
  SaveKg(OverlapKg(), dir.path() / "kg.jsonl");
  testing::WriteText(dir.path() / "pairs.tsv", "A\tB\n");
  testing::WriteText(dir.path() / "c.toml", "[score]\nmeasure = \"ngd\"\n");
  const std::vector<std::string> base = {"--config", dir.File("c.toml"), "score", "--kg",
                                         dir.File("kg.jsonl"), "--pairs", dir.File("pairs.tsv")};
  const auto from_file = RunCli(base);
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, "A\tB\t0.698970\n");
  auto args = base;
  args.insert(args.end(), {"--measure", "vsp"});
  const auto overridden = RunCli(args);
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(overridden.out, "A\tB\t0.000000\n");
}

TEST(Cli, SynthReproducesShippedData) {
  TempDir dir;
  const auto r = RunCli({"synth", "--out-dir", dir.File("syn")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"kg.jsonl", "corpus.jsonl", "heldout.jsonl", "clusters.json"}) {
    EXPECT_EQ(testing::ReadFile(dir.path() / "syn" / f),
              testing::ReadFile(testing::SyntheticDir() / f))
        << f;
  }
}

TEST(Cli, SyntheticPipelineMatchesExpectedReport) {
  TempDir dir;
  const auto run = testing::RunSyntheticPipeline(dir.path());
  ASSERT_TRUE(run.ok) << run.failed_step << "\n" << run.log;
  EXPECT_EQ(testing::ReadFile(run.report),
            testing::ReadFile(testing::SyntheticDir() / "expected_report.json"));
}

TEST(Cli, PriorOnlyLinkingIsMisled) {
  TempDir dir;
  const auto run = testing::RunSyntheticPipeline(dir.path(), 1, true);
  ASSERT_TRUE(run.ok) << run.failed_step << "\n" << run.log;
  const auto report = nlohmann::json::parse(testing::ReadFile(run.report));
  EXPECT_LE(report.at("micro_p_at_1").get<double>(), 0.6);
}

TEST(Cli, ThreadCountDoesNotChangeOutputs) {
  TempDir one, eight;
  const auto a = testing::RunSyntheticPipeline(one.path(), 1);
  const auto b = testing::RunSyntheticPipeline(eight.path(), 8);
  ASSERT_TRUE(a.ok && b.ok);
  EXPECT_EQ(testing::ReadFile(a.pairs), testing::ReadFile(b.pairs));
  EXPECT_EQ(testing::ReadFile(a.model), testing::ReadFile(b.model));
  EXPECT_EQ(testing::ReadFile(a.links), testing::ReadFile(b.links));
}

}  // namespace
}  // namespace dsrm
