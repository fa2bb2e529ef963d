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

#ifndef DSRM_SCORER_H_
#define DSRM_SCORER_H_

#include <map>
#include <span>
#include <vector>

#include "dsrm/kg.h"
#include "dsrm/network.h"
#include "dsrm/relatedness.h"

namespace dsrm {

// Entity-level DSRM relatedness over a graph. Embeddings are computed up
// front by Prepare(); Cosine() on an unprepared id falls back to a fresh
// forward pass, so the scorer is safe to share between threads.
class DsrmScorer {
 public:
  // Throws DataError when the network input does not match the graph's
  // feature dimension.
  DsrmScorer(const KnowledgeGraph& kg, const NetworkParams& params);

  // Embeds every listed id (all entities when empty).
  void Prepare(std::span<const EntityId> ids = {}, int threads = 1);

  std::vector<double> Embedding(const EntityId& id) const;

  // Raw cosine in [-1, 1].
  double Cosine(const EntityId& a, const EntityId& b) const;

 private:
  const KnowledgeGraph& kg_;
  const NetworkParams& params_;
  std::map<EntityId, std::vector<double>> cache_;
};

// Relatedness function for the disambiguator: the cosine clipped to [0, 1].
RelatednessFn MakeDsrmRelatedness(const DsrmScorer& scorer);

}  // namespace dsrm

#endif  // DSRM_SCORER_H_
