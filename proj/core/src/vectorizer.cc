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

#include "dsrm/vectorizer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dsrm/error.h"
#include "dsrm/text.h"

namespace dsrm {

SparseVector SparseVector::FromEntries(
    std::size_t dimension, std::vector<std::pair<std::uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector v(dimension);
  for (std::size_t i = 0; i < entries.size();) {
    const std::uint32_t index = entries[i].first;
    if (index >= dimension) {
      throw DataError("sparse index " + std::to_string(index) +
                      " outside dimension " + std::to_string(dimension));
    }
    double sum = 0.0;
    for (; i < entries.size() && entries[i].first == index; ++i) {
      sum += entries[i].second;
    }
    if (sum != 0.0) {
      v.indices_.push_back(index);
      v.values_.push_back(sum);
    }
  }
  return v;
}

double SparseVector::Norm() const {
  double sq = 0.0;
  for (double x : values_) sq += x * x;
  return std::sqrt(sq);
}

double SparseVector::Dot(const SparseVector& other) const {
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < indices_.size() && j < other.indices_.size()) {
    if (indices_[i] == other.indices_[j]) {
      sum += values_[i++] * other.values_[j++];
    } else if (indices_[i] < other.indices_[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

void SparseVector::Normalize() {
  const double norm = Norm();
  if (norm == 0.0) return;
  for (double& x : values_) x /= norm;
}

double Cosine(const SparseVector& a, const SparseVector& b) {
  const double na = a.Norm();
  const double nb = b.Norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.Dot(b) / (na * nb);
}

std::size_t TrigramIndexer::SymbolCode(char c) {
  if (c >= 'a' && c <= 'z') return static_cast<std::size_t>(c - 'a');
  if (c >= '0' && c <= '9') return 26 + static_cast<std::size_t>(c - '0');
  if (c == kBoundary) return 36;
  if (c == kOther) return 37;
  throw std::invalid_argument(std::string("not a trigram symbol: ") + c);
}

char TrigramIndexer::SymbolAt(std::size_t code) {
  if (code < 26) return static_cast<char>('a' + code);
  if (code < 36) return static_cast<char>('0' + (code - 26));
  if (code == 36) return kBoundary;
  if (code == 37) return kOther;
  throw std::invalid_argument("symbol code out of range");
}

std::uint32_t TrigramIndexer::Index(std::string_view trigram) {
  if (trigram.size() != 3) throw std::invalid_argument("trigram must have length 3");
  return static_cast<std::uint32_t>(SymbolCode(trigram[0]) * kAlphabetSize * kAlphabetSize +
                                    SymbolCode(trigram[1]) * kAlphabetSize +
                                    SymbolCode(trigram[2]));
}

std::string TrigramIndexer::Trigram(std::uint32_t index) {
  if (index >= kDimension) throw std::invalid_argument("trigram index out of range");
  std::string out(3, ' ');
  out[2] = SymbolAt(index % kAlphabetSize);
  out[1] = SymbolAt((index / kAlphabetSize) % kAlphabetSize);
  out[0] = SymbolAt(index / (kAlphabetSize * kAlphabetSize));
  return out;
}

std::vector<std::string> LetterTrigrams(std::string_view word) {
  std::string wrapped;
  wrapped.reserve(word.size() + 2);
  wrapped.push_back(TrigramIndexer::kBoundary);
  for (char ch : word) {
    char c = ch;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    wrapped.push_back(keep ? c : TrigramIndexer::kOther);
  }
  wrapped.push_back(TrigramIndexer::kBoundary);

  std::vector<std::string> grams;
  for (std::size_t i = 0; i + 3 <= wrapped.size(); ++i) {
    grams.push_back(wrapped.substr(i, 3));
  }
  return grams;
}

SparseVector HashText(std::string_view text) {
  std::map<std::uint32_t, double> counts;
  for (const auto& token : Tokenize(text)) {
    for (const auto& gram : LetterTrigrams(token)) {
      counts[TrigramIndexer::Index(gram)] += 1.0;
    }
  }
  SparseVector v = SparseVector::FromEntries(
      TrigramIndexer::kDimension, {counts.begin(), counts.end()});
  v.Normalize();
  return v;
}

const char* ChannelName(Channel channel) {
  switch (channel) {
    case Channel::kEntities:
      return "entities";
    case Channel::kRelations:
      return "relations";
    case Channel::kTypes:
      return "types";
    case Channel::kDescription:
      return "description";
  }
  return "unknown";
}

std::size_t FeatureDimension(const KnowledgeGraph& kg) {
  return 2 * TrigramIndexer::kDimension + kg.relation_inventory().size() +
         kg.type_inventory().size();
}

FeatureVector EncodeEntity(const KnowledgeGraph& kg, const EntityId& id) {
  const EntityRecord& rec = kg.Get(id);
  FeatureVector fv;

  std::string neighbor_text;
  std::vector<std::pair<std::uint32_t, double>> relation_hot;
  for (const auto& fact : rec.facts) {
    if (!neighbor_text.empty()) neighbor_text.push_back(' ');
    neighbor_text += kg.Get(fact.object).surface;
    relation_hot.emplace_back(static_cast<std::uint32_t>(*kg.RelationIndex(fact.relation)), 1.0);
  }
  // Multi-hot: a label held several times still contributes a single 1.
  std::sort(relation_hot.begin(), relation_hot.end());
  relation_hot.erase(std::unique(relation_hot.begin(), relation_hot.end()),
                     relation_hot.end());

  std::vector<std::pair<std::uint32_t, double>> type_hot;
  for (const auto& t : rec.types) {
    type_hot.emplace_back(static_cast<std::uint32_t>(*kg.TypeIndex(t)), 1.0);
  }

  auto& channels = fv.channels;
  channels[0] = HashText(neighbor_text);
  channels[1] = SparseVector::FromEntries(kg.relation_inventory().size(),
                                          std::move(relation_hot));
  channels[1].Normalize();
  channels[2] = SparseVector::FromEntries(kg.type_inventory().size(),
                                          std::move(type_hot));
  channels[2].Normalize();
  channels[3] = HashText(rec.description);

  std::vector<std::pair<std::uint32_t, double>> all;
  std::size_t offset = 0;
  for (const auto& ch : channels) {
    for (std::size_t i = 0; i < ch.nnz(); ++i) {
      all.emplace_back(static_cast<std::uint32_t>(offset + ch.indices()[i]),
                       ch.values()[i]);
    }
    offset += ch.dimension();
  }
  fv.concatenated = SparseVector::FromEntries(offset, std::move(all));
  return fv;
}

}  // namespace dsrm
