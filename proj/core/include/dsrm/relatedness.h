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

#ifndef DSRM_RELATEDNESS_H_
#define DSRM_RELATEDNESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsrm/kg.h"
#include "dsrm/vectorizer.h"

namespace dsrm {

// Symmetric entity relatedness in [0, 1].
using RelatednessFn = std::function<double(const EntityId&, const EntityId&)>;

// Milne & Witten relatedness (Normalized Google Distance over incoming
// anchor links) from set sizes, natural log:
//
//   1 - (ln max(|A|,|B|) - ln |A n B|) / (ln N - ln min(|A|,|B|))
//
// clamped to [0, 1]. Empty sets or an empty overlap give 0.
double NgdFromCounts(std::size_t total_entities, std::size_t size_a,
                     std::size_t size_b, std::size_t overlap);

// Throws DataError for unknown ids or a graph with fewer than 2 entities.
double NgdRelatedness(const KnowledgeGraph& kg, const EntityId& a,
                      const EntityId& b);

// Token bag of an entity: neighbor surfaces (one per fact), distinct relation
// labels, type labels and the description, all tokenized.
std::vector<std::string> EntityTokens(const KnowledgeGraph& kg, const EntityId& id);

// tf-idf vectors over EntityTokens, idf = ln(N / df).
class TfIdfModel {
 public:
  TfIdfModel() = default;

  // Throws DataError on an empty graph.
  static TfIdfModel Build(const KnowledgeGraph& kg);

  std::size_t num_entities() const { return vectors_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::optional<std::uint32_t> TokenIndex(const std::string& token) const;
  std::size_t DocumentFrequency(std::uint32_t token) const { return df_.at(token); }
  double Idf(std::uint32_t token) const { return idf_.at(token); }

  // Unit-norm (or zero) tf-idf vector. Throws DataError for unknown ids.
  const SparseVector& Vector(const EntityId& id) const;

  // tf-idf projection of an arbitrary token bag; out-of-vocabulary tokens
  // are ignored.
  SparseVector Project(std::span<const std::string> tokens) const;

 private:
  std::vector<std::string> vocabulary_;  // sorted
  std::vector<std::size_t> df_;
  std::vector<double> idf_;
  std::map<EntityId, SparseVector> vectors_;
};

// Cosine of the tf-idf vectors; 0 when either is zero.
double VspRelatedness(const TfIdfModel& model, const EntityId& a,
                      const EntityId& b);

RelatednessFn MakeNgdRelatedness(const KnowledgeGraph& kg);
RelatednessFn MakeVspRelatedness(const TfIdfModel& model);

}  // namespace dsrm

#endif  // DSRM_RELATEDNESS_H_
