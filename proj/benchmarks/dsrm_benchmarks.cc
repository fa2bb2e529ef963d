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

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "dsrm/disambiguator.h"
#include "dsrm/network.h"
#include "dsrm/relatedness.h"
#include "dsrm/synthetic.h"
#include "dsrm/vectorizer.h"

namespace dsrm {
namespace {

SparseVector SparseInput(std::size_t dim, std::size_t nnz, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t i = 0; i < nnz; ++i) {
    entries.emplace_back(static_cast<std::uint32_t>(gen() % dim), u(gen));
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                entries.end());
  auto v = SparseVector::FromEntries(dim, std::move(entries));
  v.Normalize();
  return v;
}

void BM_Forward(benchmark::State& state) {
  const std::size_t dim = 2 * TrigramIndexer::dimension() + 64;
  const auto h = static_cast<std::size_t>(state.range(0));
  const auto params = InitParams({dim, h, h, h}, 1);
  std::mt19937_64 gen(2);
  const auto x = SparseInput(dim, 200, gen);
  for (auto _ : state) benchmark::DoNotOptimize(Forward(params, x));
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(300);

void BM_Gradients(benchmark::State& state) {
  const std::size_t dim = 2 * TrigramIndexer::dimension() + 64;
  const auto params = InitParams({dim, 64, 64, 32}, 1);
  std::mt19937_64 gen(3);
  std::vector<TrainingGroup> batch;
  for (int g = 0; g < state.range(0); ++g) {
    TrainingGroup group{SparseInput(dim, 200, gen), SparseInput(dim, 200, gen), {}};
    for (int n = 0; n < 5; ++n) group.negatives.push_back(SparseInput(dim, 200, gen));
    batch.push_back(std::move(group));
  }
  for (auto _ : state) benchmark::DoNotOptimize(ComputeGradients(params, batch, 10.0));
}
BENCHMARK(BM_Gradients)->Arg(8)->Arg(32);

void BM_Regularize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GraphNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].mention = i;
    nodes[i].r0 = nodes[i].r = u(gen);
    nodes[i].is_seed = i % 10 == 0;
  }
  RelationalGraph g(std::move(nodes));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < 20; ++e) {
      const std::size_t j = gen() % n;
      if (j != i) g.SetEdge(i, j, u(gen));
    }
  }
  const ReguConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(Regularize(g, config));
}
BENCHMARK(BM_Regularize)->Arg(100)->Arg(1000);

void BM_Ngd(benchmark::State& state) {
  const auto fx = GenerateSynthetic();
  const auto fn = MakeNgdRelatedness(fx.kg);
  std::vector<EntityId> ids;
  for (const auto& [id, rec] : fx.kg.entities()) ids.push_back(id);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fn(ids[i % ids.size()], ids[(i * 7 + 3) % ids.size()]));
    ++i;
  }
}
BENCHMARK(BM_Ngd);

}  // namespace
}  // namespace dsrm

BENCHMARK_MAIN();
