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

#ifndef DSRM_VECTORIZER_H_
#define DSRM_VECTORIZER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsrm/kg.h"

namespace dsrm {

// Sorted sparse vector: strictly increasing indices below dimension(), no
// stored zeros.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}

  // Sorts, sums duplicate indices and drops zeros. Throws DataError for an
  // index outside the dimension.
  static SparseVector FromEntries(
      std::size_t dimension,
      std::vector<std::pair<std::uint32_t, double>> entries);

  std::size_t dimension() const { return dimension_; }
  std::size_t nnz() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<std::uint32_t>& indices() const { return indices_; }
  const std::vector<double>& values() const { return values_; }

  double Norm() const;
  double Dot(const SparseVector& other) const;
  // Scales to unit L2 norm; the zero vector is left alone.
  void Normalize();

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

// Cosine similarity; 0 when either vector is zero.
double Cosine(const SparseVector& a, const SparseVector& b);

// Exact letter-trigram indexing over a 38-symbol alphabet: a-z, 0-9, '#'
// (word boundary) and '_' (any other byte). Collision free by construction.
class TrigramIndexer {
 public:
  static constexpr std::size_t kAlphabetSize = 38;
  static constexpr std::size_t kDimension =
      kAlphabetSize * kAlphabetSize * kAlphabetSize;  // 54,872
  static constexpr char kBoundary = '#';
  static constexpr char kOther = '_';

  static constexpr std::size_t dimension() { return kDimension; }

  // Symbol code of an alphabet character; throws std::invalid_argument for
  // characters outside the alphabet.
  static std::size_t SymbolCode(char c);
  static char SymbolAt(std::size_t code);

  // index = s0 * 38^2 + s1 * 38 + s2. `trigram` must hold 3 alphabet symbols.
  static std::uint32_t Index(std::string_view trigram);
  static std::string Trigram(std::uint32_t index);
};

// Lowercases, maps bytes outside [a-z0-9] to '_', wraps in '#' and returns
// every consecutive 3-gram of the wrapped word.
std::vector<std::string> LetterTrigrams(std::string_view word);

// Bag of trigram counts over all tokens of `text`, L2-normalized.
SparseVector HashText(std::string_view text);

enum class Channel : std::size_t {
  kEntities = 0,
  kRelations = 1,
  kTypes = 2,
  kDescription = 3,
};
inline constexpr std::size_t kNumChannels = 4;
const char* ChannelName(Channel channel);

// Four-channel input encoding of one entity. Each non-empty channel is unit
// norm; `concatenated` lays the channels out in enum order.
struct FeatureVector {
  std::array<SparseVector, kNumChannels> channels;
  SparseVector concatenated;

  const SparseVector& channel(Channel c) const {
    return channels[static_cast<std::size_t>(c)];
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Total input dimension for a graph: two trigram channels plus the relation
// and type inventories.
std::size_t FeatureDimension(const KnowledgeGraph& kg);

// Throws DataError for unknown ids.
FeatureVector EncodeEntity(const KnowledgeGraph& kg, const EntityId& id);

}  // namespace dsrm

#endif  // DSRM_VECTORIZER_H_
