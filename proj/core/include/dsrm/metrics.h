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

#ifndef DSRM_METRICS_H_
#define DSRM_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsrm/kg.h"

namespace dsrm {

// Candidates for one query in ranked order, with their graded gains.
struct RankedList {
  std::string query;
  std::vector<EntityId> candidates;
  std::vector<double> gains;  // gains[i] belongs to candidates[i]
};

// Exponential-gain DCG with a log2 discount, normalized by the DCG of the
// gain-sorted list. 0 when the ideal DCG is 0. Throws std::invalid_argument
// for k < 1, duplicate candidates or negative gains.
double NdcgAtK(const RankedList& list, std::size_t k);

// Mean over queries of average precision, treating gain > 0 as relevant.
// Throws std::invalid_argument for an empty query set.
double MeanAveragePrecision(std::span<const RankedList> lists);
double AveragePrecision(const RankedList& list);

struct MentionKey {
  std::string doc_id;
  std::int64_t offset = 0;
  auto operator<=>(const MentionKey&) const = default;
};

enum class Averaging { kMicro, kMacro };

// P@1 over non-NIL gold mentions. Micro pools mentions; macro averages
// per-document precision over documents with at least one non-NIL mention.
// Predictions missing for a gold mention count as wrong. Throws
// std::invalid_argument when there is no non-NIL gold mention.
double PrecisionAt1(const std::map<MentionKey, std::optional<EntityId>>& predictions,
                    const std::map<MentionKey, std::optional<EntityId>>& gold,
                    Averaging mode);

std::map<MentionKey, std::optional<EntityId>> GoldMentions(
    std::span<const AnchorDocument> docs);

// TSV benchmark: query_id \t candidate_id \t gain. Lists keep file order.
std::vector<RankedList> ReadBenchmark(std::istream& in,
                                      const std::string& source_name = "benchmark");

}  // namespace dsrm

#endif  // DSRM_METRICS_H_
