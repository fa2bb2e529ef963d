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

#include "dsrm/metrics.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <stdexcept>

#include "dsrm/error.h"

namespace dsrm {
namespace {

void CheckList(const RankedList& list) {
  if (list.candidates.size() != list.gains.size()) {
    throw std::invalid_argument("candidates and gains differ in length");
  }
  std::set<EntityId> seen;
  for (const auto& c : list.candidates) {
    if (!seen.insert(c).second) {
      throw std::invalid_argument("duplicate candidate " + c + " in query " + list.query);
    }
  }
  for (double g : list.gains) {
    if (!(g >= 0.0)) throw std::invalid_argument("negative gain in query " + list.query);
  }
}

double Dcg(std::span<const double> gains, std::size_t k) {
  double dcg = 0.0;
  const std::size_t n = std::min(k, gains.size());
  for (std::size_t p = 1; p <= n; ++p) {
    dcg += (std::exp2(gains[p - 1]) - 1.0) / std::log2(static_cast<double>(p) + 1.0);
  }
  return dcg;
}

}  // namespace

double NdcgAtK(const RankedList& list, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  CheckList(list);
  std::vector<double> ideal = list.gains;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = Dcg(ideal, k);
  if (idcg == 0.0) return 0.0;
  return Dcg(list.gains, k) / idcg;
}

double AveragePrecision(const RankedList& list) {
  CheckList(list);
  double sum = 0.0;
  std::size_t relevant = 0;
  for (std::size_t p = 1; p <= list.gains.size(); ++p) {
    if (list.gains[p - 1] > 0.0) {
      ++relevant;
      sum += static_cast<double>(relevant) / static_cast<double>(p);
    }
  }
  return relevant == 0 ? 0.0 : sum / static_cast<double>(relevant);
}

double MeanAveragePrecision(std::span<const RankedList> lists) {
  if (lists.empty()) throw std::invalid_argument("MAP over an empty query set");
  double sum = 0.0;
  for (const auto& l : lists) sum += AveragePrecision(l);
  return sum / static_cast<double>(lists.size());
}

double PrecisionAt1(const std::map<MentionKey, std::optional<EntityId>>& predictions,
                    const std::map<MentionKey, std::optional<EntityId>>& gold,
                    Averaging mode) {
  std::size_t total = 0;
  std::size_t correct = 0;
  // doc -> (correct, total)
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_doc;
  for (const auto& [key, g] : gold) {
    if (!g) continue;
    auto it = predictions.find(key);
    const bool hit = it != predictions.end() && it->second && *it->second == *g;
    ++total;
    correct += hit;
    auto& d = per_doc[key.doc_id];
    d.first += hit;
    ++d.second;
  }
  if (total == 0) throw std::invalid_argument("no non-NIL gold mentions");
  if (mode == Averaging::kMicro) {
    return static_cast<double>(correct) / static_cast<double>(total);
  }
  double sum = 0.0;
  for (const auto& [doc, counts] : per_doc) {
    sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  return sum / static_cast<double>(per_doc.size());
}

std::map<MentionKey, std::optional<EntityId>> GoldMentions(
    std::span<const AnchorDocument> docs) {
  std::map<MentionKey, std::optional<EntityId>> gold;
  for (const auto& doc : docs) {
    for (const auto& a : doc.anchors) gold[{doc.doc_id, a.offset}] = a.gold;
  }
  return gold;
}

std::vector<RankedList> ReadBenchmark(std::istream& in, const std::string& source_name) {
  std::vector<RankedList> lists;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw DataError(source_name + ":" + std::to_string(line_no) +
                      ": expected query_id\\tcandidate_id\\tgain");
    }
    const std::string query = line.substr(0, t1);
    const std::string cand = line.substr(t1 + 1, t2 - t1 - 1);
    double gain = 0.0;
    try {
      gain = std::stod(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": bad gain");
    }
    if (gain < 0.0) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": negative gain");
    }
    auto [it, inserted] = index.emplace(query, lists.size());
    if (inserted) lists.push_back({query, {}, {}});
    lists[it->second].candidates.push_back(cand);
    lists[it->second].gains.push_back(gain);
  }
  return lists;
}

}  // namespace dsrm
