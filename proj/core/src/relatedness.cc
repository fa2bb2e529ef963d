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

#include "dsrm/relatedness.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include "dsrm/error.h"
#include "dsrm/text.h"

namespace dsrm {

double NgdFromCounts(std::size_t total_entities, std::size_t size_a,
                     std::size_t size_b, std::size_t overlap) {
  if (size_a == 0 || size_b == 0 || overlap == 0) return 0.0;
  const double larger = static_cast<double>(std::max(size_a, size_b));
  const double smaller = static_cast<double>(std::min(size_a, size_b));
  const double numerator = std::log(larger) - std::log(static_cast<double>(overlap));
  const double denominator =
      std::log(static_cast<double>(total_entities)) - std::log(smaller);
  if (denominator <= 0.0) {
    // Both sets cover every entity; only identical sets get here with a
    // zero numerator.
    return numerator == 0.0 ? 1.0 : 0.0;
  }
  return std::clamp(1.0 - numerator / denominator, 0.0, 1.0);
}

double NgdRelatedness(const KnowledgeGraph& kg, const EntityId& a,
                      const EntityId& b) {
  if (kg.size() < 2) throw DataError("NGD needs at least 2 entities");
  const auto& in_a = kg.IncomingLinks(a);
  const auto& in_b = kg.IncomingLinks(b);
  std::size_t overlap = 0;
  // Walk the smaller set so the count is symmetric and cheap.
  const auto& small = in_a.size() <= in_b.size() ? in_a : in_b;
  const auto& large = in_a.size() <= in_b.size() ? in_b : in_a;
  for (const auto& s : small) overlap += large.count(s);
  return NgdFromCounts(kg.size(), in_a.size(), in_b.size(), overlap);
}

std::vector<std::string> EntityTokens(const KnowledgeGraph& kg,
                                      const EntityId& id) {
  const EntityRecord& rec = kg.Get(id);
  std::vector<std::string> tokens;
  auto append = [&tokens](std::string_view text) {
    auto t = Tokenize(text);
    tokens.insert(tokens.end(), std::make_move_iterator(t.begin()),
                  std::make_move_iterator(t.end()));
  };
  std::set<std::string> relations;
  for (const auto& fact : rec.facts) {
    append(kg.Get(fact.object).surface);
    relations.insert(fact.relation);
  }
  for (const auto& r : relations) append(r);
  for (const auto& t : rec.types) append(t);
  append(rec.description);
  return tokens;
}

TfIdfModel TfIdfModel::Build(const KnowledgeGraph& kg) {
  if (kg.size() == 0) throw DataError("cannot build tf-idf over an empty graph");

  std::map<EntityId, std::map<std::string, double>> term_counts;
  std::map<std::string, std::size_t> df;
  for (const auto& [id, rec] : kg.entities()) {
    auto& counts = term_counts[id];
    for (auto& tok : EntityTokens(kg, id)) counts[std::move(tok)] += 1.0;
    for (const auto& [tok, c] : counts) ++df[tok];
  }

  TfIdfModel model;
  std::map<std::string, std::uint32_t> index;
  for (const auto& [tok, count] : df) {
    index.emplace(tok, static_cast<std::uint32_t>(model.vocabulary_.size()));
    model.vocabulary_.push_back(tok);
    model.df_.push_back(count);
    model.idf_.push_back(std::log(static_cast<double>(kg.size()) /
                                  static_cast<double>(count)));
  }
  for (const auto& [id, counts] : term_counts) {
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (const auto& [tok, tf] : counts) {
      const std::uint32_t t = index.at(tok);
      entries.emplace_back(t, tf * model.idf_[t]);
    }
    SparseVector v = SparseVector::FromEntries(model.vocabulary_.size(), std::move(entries));
    v.Normalize();
    model.vectors_.emplace(id, std::move(v));
  }
  return model;
}

std::optional<std::uint32_t> TfIdfModel::TokenIndex(const std::string& token) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), token);
  if (it == vocabulary_.end() || *it != token) return std::nullopt;
  return static_cast<std::uint32_t>(it - vocabulary_.begin());
}

const SparseVector& TfIdfModel::Vector(const EntityId& id) const {
  auto it = vectors_.find(id);
  if (it == vectors_.end()) throw DataError("unknown entity " + id);
  return it->second;
}

SparseVector TfIdfModel::Project(std::span<const std::string> tokens) const {
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (const auto& tok : tokens) {
    if (auto t = TokenIndex(tok)) entries.emplace_back(*t, idf_[*t]);
  }
  SparseVector v = SparseVector::FromEntries(vocabulary_.size(), std::move(entries));
  v.Normalize();
  return v;
}

double VspRelatedness(const TfIdfModel& model, const EntityId& a,
                      const EntityId& b) {
  return std::clamp(Cosine(model.Vector(a), model.Vector(b)), 0.0, 1.0);
}

RelatednessFn MakeNgdRelatedness(const KnowledgeGraph& kg) {
  return [&kg](const EntityId& a, const EntityId& b) {
    return NgdRelatedness(kg, a, b);
  };
}

RelatednessFn MakeVspRelatedness(const TfIdfModel& model) {
  return [&model](const EntityId& a, const EntityId& b) {
    return VspRelatedness(model, a, b);
  };
}

}  // namespace dsrm
