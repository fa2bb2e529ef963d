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

#include "dsrm/scorer.h"

#include <algorithm>

#include "dsrm/error.h"
#include "dsrm/parallel.h"
#include "dsrm/vectorizer.h"

namespace dsrm {

DsrmScorer::DsrmScorer(const KnowledgeGraph& kg, const NetworkParams& params)
    : kg_(kg), params_(params) {
  if (FeatureDimension(kg) != params.input_dim()) {
    throw DataError("model input dimension " + std::to_string(params.input_dim()) +
                    " does not match graph feature dimension " +
                    std::to_string(FeatureDimension(kg)));
  }
}

void DsrmScorer::Prepare(std::span<const EntityId> ids, int threads) {
  std::vector<EntityId> todo;
  if (ids.empty()) {
    for (const auto& [id, rec] : kg_.entities()) todo.push_back(id);
  } else {
    todo.assign(ids.begin(), ids.end());
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  std::erase_if(todo, [&](const EntityId& id) { return cache_.count(id) > 0; });

  std::vector<std::vector<double>> out(todo.size());
  ParallelFor(todo.size(), threads,
              [&](std::size_t i) { out[i] = Embedding(todo[i]); });
  for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(todo[i], std::move(out[i]));
}

std::vector<double> DsrmScorer::Embedding(const EntityId& id) const {
  auto it = cache_.find(id);
  if (it != cache_.end()) return it->second;
  return Forward(params_, EncodeEntity(kg_, id).concatenated).y;
}

double DsrmScorer::Cosine(const EntityId& a, const EntityId& b) const {
  auto ia = cache_.find(a);
  auto ib = cache_.find(b);
  if (ia != cache_.end() && ib != cache_.end()) return DenseCosine(ia->second, ib->second);
  return DenseCosine(Embedding(a), Embedding(b));
}

RelatednessFn MakeDsrmRelatedness(const DsrmScorer& scorer) {
  return [&scorer](const EntityId& a, const EntityId& b) {
    return std::max(0.0, scorer.Cosine(a, b));
  };
}

}  // namespace dsrm
