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

#ifndef DSRM_DISAMBIGUATOR_H_
#define DSRM_DISAMBIGUATOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsrm/kg.h"
#include "dsrm/relatedness.h"

namespace dsrm {

struct Mention {
  std::string doc_id;
  std::int64_t offset = 0;
  std::string surface;
  std::vector<std::string> context_tokens;
};

// Mentions of a document's anchors. The context is the tokenized text within
// `context_window` characters on each side of the mention, excluding the
// mention itself; a negative window uses the whole document.
std::vector<Mention> ExtractMentions(const AnchorDocument& doc,
                                     std::int64_t context_window = -1);

// Dictionary candidates ordered by (prior desc, id asc), truncated to top_n.
std::vector<Candidate> GenerateCandidates(const MentionDictionary& dict,
                                          const Mention& mention,
                                          std::size_t top_n = 30);

// Cosine between the entity's tf-idf vector and the tf-idf projection of the
// mention context. Stands in for keyphrase-based context matching.
double ContextSimilarity(const TfIdfModel& model, const EntityId& id,
                         const Mention& mention);

// lambda * prior + (1 - lambda) * context
double InitialRanking(double prior, double context, double lambda);

struct GraphNode {
  std::size_t mention = 0;  // index into the mention list
  EntityId candidate;
  double prior = 0.0;
  double context = 0.0;
  double r0 = 0.0;
  bool is_seed = false;
  double r = 0.0;
};

// Mention/candidate nodes with a symmetric, zero-diagonal weight matrix
// stored as sorted adjacency lists.
class RelationalGraph {
 public:
  RelationalGraph() = default;
  explicit RelationalGraph(std::vector<GraphNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::vector<GraphNode>& nodes() { return nodes_; }
  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const GraphNode& node(std::size_t i) const { return nodes_[i]; }

  // Sets W_ij = W_ji = weight. Self loops and negative or non-finite
  // weights throw std::invalid_argument.
  void SetEdge(std::size_t i, std::size_t j, double weight);
  double Weight(std::size_t i, std::size_t j) const;
  double Degree(std::size_t i) const;
  const std::vector<std::pair<std::size_t, double>>& Neighbors(std::size_t i) const {
    return adjacency_[i];
  }
  std::size_t num_edges() const;

  // Scores currently stored in the nodes.
  std::vector<double> Scores() const;
  std::vector<double> InitialScores() const;

 private:
  std::vector<GraphNode> nodes_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
};

struct ReguConfig {
  double mu = 0.8;
  std::size_t k = 20;
  double lambda_prior = 0.5;
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  double sr_min = 0.0;           // edges need sr > sr_min
  std::size_t top_n = 30;        // candidates per mention
  double seed_prior = 0.95;      // prior threshold of the second seed rule
  std::int64_t context_window = -1;
  int threads = 1;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

// Whether two mentions may be connected. The shipped rule is same-document.
using RelevanceFn = std::function<bool(const Mention&, const Mention&)>;
bool SameDocument(const Mention& a, const Mention& b);

// Nodes for every (mention, candidate) with prior, context similarity and
// r0 filled in, grouped by mention in mention order.
std::vector<GraphNode> MakeNodes(std::span<const Mention> mentions,
                                 const MentionDictionary& dict,
                                 const TfIdfModel& tfidf, const ReguConfig& config);

// Seed rules, applied per mention:
//  (i)  a mention with a single candidate: that node is a seed with r0 = 1.
//  (ii) the top-prior candidate e has prior >= seed_prior and is also the
//       top candidate by context similarity (ties broken by prior, then id):
//       every node of the mention becomes a seed, e at 1 and the rest at 0.
// Seeds also get r = r0. Returns the number of seed nodes.
std::size_t MineSeeds(std::vector<GraphNode>& nodes, double seed_prior = 0.95);

// Connects nodes of different, relevant mentions whose entities have
// sr > sr_min, keeping an edge when either endpoint ranks the other among its
// k heaviest such neighbors (ties by node index). W_ij = sr(e_i, e_j).
RelationalGraph BuildGraph(std::vector<GraphNode> nodes,
                           std::span<const Mention> mentions, const RelatednessFn& sr,
                           const ReguConfig& config,
                           const RelevanceFn& relevant = SameDocument);

//   F(R) = mu * sum_{non-seed i} (r_i - r0_i)^2
//        + 1/2 * sum_{i,j} W_ij (r_i - r_j)^2
// with the second sum over ordered pairs. Throws std::invalid_argument when
// scores.size() != graph.size().
double Objective(const RelationalGraph& graph, std::span<const double> scores,
                 double mu);

struct RegularizeResult {
  std::vector<double> scores;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // F after each sweep, when requested
};

// Minimizes F over non-seed scores with seeds fixed, by Gauss-Seidel sweeps
// in node order:
//   r_i <- (sum_j W_ij r_j + mu r0_i) / (D_ii + mu)
// Each update minimizes F exactly along one coordinate, so F never increases.
// Stops when the largest change in a sweep is below tol or after max_iter
// sweeps. Throws NumericError on non-finite weights or scores.
RegularizeResult Regularize(const RelationalGraph& graph, const ReguConfig& config,
                            bool record_objective = false);

// Chosen entity per mention: argmax score, ties by higher prior then id.
// Mentions without nodes map to nullopt (NIL).
std::vector<std::optional<std::size_t>> DecodeNodes(const RelationalGraph& graph,
                                                    std::span<const double> scores,
                                                    std::size_t num_mentions);
std::vector<std::optional<EntityId>> Decode(const RelationalGraph& graph,
                                            std::span<const double> scores,
                                            std::size_t num_mentions);

struct LinkDecision {
  std::string doc_id;
  std::int64_t offset = 0;
  std::string surface;
  std::optional<EntityId> chosen;
  double score = 0.0;
  bool seed = false;
};

// Full per-document pipeline: candidates, initial ranking, seeds, graph,
// regularization and decoding.
class Linker {
 public:
  Linker(const MentionDictionary& dict, const TfIdfModel& tfidf, RelatednessFn sr,
         ReguConfig config);

  std::vector<LinkDecision> Link(const AnchorDocument& doc) const;
  // Baseline: highest prior wins, no graph.
  std::vector<LinkDecision> LinkByPrior(const AnchorDocument& doc) const;

  const ReguConfig& config() const { return config_; }

 private:
  const MentionDictionary& dict_;
  const TfIdfModel& tfidf_;
  RelatednessFn sr_;
  ReguConfig config_;
};

// JSONL: {"doc_id","offset","surface","chosen","score","seed"} per mention.
void WriteLinks(std::span<const LinkDecision> links, std::ostream& out);
std::vector<LinkDecision> ReadLinks(std::istream& in,
                                    const std::string& source_name = "links");

}  // namespace dsrm

#endif  // DSRM_DISAMBIGUATOR_H_
