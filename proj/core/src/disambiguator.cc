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

#include "dsrm/disambiguator.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "dsrm/error.h"
#include "dsrm/parallel.h"
#include "dsrm/text.h"
#include "json.hpp"

namespace dsrm {

std::vector<Mention> ExtractMentions(const AnchorDocument& doc,
                                     std::int64_t context_window) {
  const auto text_len = static_cast<std::int64_t>(doc.text.size());
  std::vector<Mention> mentions;
  mentions.reserve(doc.anchors.size());
  for (const auto& a : doc.anchors) {
    Mention m;
    m.doc_id = doc.doc_id;
    m.offset = a.offset;
    m.surface = a.surface;
    const std::int64_t start = a.offset;
    const std::int64_t end =
        std::min(text_len, a.offset + static_cast<std::int64_t>(a.surface.size()));
    const std::int64_t left =
        context_window < 0 ? 0 : std::max<std::int64_t>(0, start - context_window);
    const std::int64_t right =
        context_window < 0 ? text_len : std::min(text_len, end + context_window);
    std::string context = doc.text.substr(left, start - left);
    context.push_back(' ');
    context += doc.text.substr(end, right - end);
    m.context_tokens = Tokenize(context);
    mentions.push_back(std::move(m));
  }
  return mentions;
}

std::vector<Candidate> GenerateCandidates(const MentionDictionary& dict,
                                          const Mention& mention, std::size_t top_n) {
  const auto cands = dict.Candidates(mention.surface);
  std::vector<Candidate> out(cands.begin(), cands.end());
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.prior != b.prior) return a.prior > b.prior;
    return a.id < b.id;
  });
  if (out.size() > top_n) out.resize(top_n);
  return out;
}

double ContextSimilarity(const TfIdfModel& model, const EntityId& id,
                         const Mention& mention) {
  const SparseVector& entity = model.Vector(id);
  if (mention.context_tokens.empty()) return 0.0;
  return std::clamp(Cosine(entity, model.Project(mention.context_tokens)), 0.0, 1.0);
}

double InitialRanking(double prior, double context, double lambda) {
  return lambda * prior + (1.0 - lambda) * context;
}

RelationalGraph::RelationalGraph(std::vector<GraphNode> nodes)
    : nodes_(std::move(nodes)), adjacency_(nodes_.size()) {}

void RelationalGraph::SetEdge(std::size_t i, std::size_t j, double weight) {
  if (i == j) throw std::invalid_argument("self loop in relational graph");
  if (i >= nodes_.size() || j >= nodes_.size()) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("edge weight must be finite and non-negative");
  }
  auto set = [weight](std::vector<std::pair<std::size_t, double>>& row, std::size_t to) {
    auto it = std::lower_bound(row.begin(), row.end(), to,
                               [](const auto& e, std::size_t v) { return e.first < v; });
    if (weight == 0.0) {
      if (it != row.end() && it->first == to) row.erase(it);
    } else if (it != row.end() && it->first == to) {
      it->second = weight;
    } else {
      row.insert(it, {to, weight});
    }
  };
  set(adjacency_[i], j);
  set(adjacency_[j], i);
}

double RelationalGraph::Weight(std::size_t i, std::size_t j) const {
  const auto& row = adjacency_.at(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const auto& e, std::size_t v) { return e.first < v; });
  return it != row.end() && it->first == j ? it->second : 0.0;
}

double RelationalGraph::Degree(std::size_t i) const {
  double d = 0.0;
  for (const auto& [j, w] : adjacency_.at(i)) d += w;
  return d;
}

std::size_t RelationalGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& row : adjacency_) n += row.size();
  return n / 2;
}

std::vector<double> RelationalGraph::Scores() const {
  std::vector<double> r;
  r.reserve(nodes_.size());
  for (const auto& n : nodes_) r.push_back(n.r);
  return r;
}

std::vector<double> RelationalGraph::InitialScores() const {
  std::vector<double> r;
  r.reserve(nodes_.size());
  for (const auto& n : nodes_) r.push_back(n.r0);
  return r;
}

void ReguConfig::Validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(lambda_prior >= 0.0 && lambda_prior <= 1.0)) {
    throw std::invalid_argument("lambda must be in [0, 1]");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  if (top_n < 1) throw std::invalid_argument("top_n must be positive");
}

bool SameDocument(const Mention& a, const Mention& b) { return a.doc_id == b.doc_id; }

std::vector<GraphNode> MakeNodes(std::span<const Mention> mentions,
                                 const MentionDictionary& dict,
                                 const TfIdfModel& tfidf, const ReguConfig& config) {
  std::vector<GraphNode> nodes;
  for (std::size_t m = 0; m < mentions.size(); ++m) {
    for (const auto& c : GenerateCandidates(dict, mentions[m], config.top_n)) {
      GraphNode node;
      node.mention = m;
      node.candidate = c.id;
      node.prior = c.prior;
      node.context = ContextSimilarity(tfidf, c.id, mentions[m]);
      node.r0 = InitialRanking(node.prior, node.context, config.lambda_prior);
      node.r = node.r0;
      nodes.push_back(std::move(node));
    }
  }
  return nodes;
}

std::size_t MineSeeds(std::vector<GraphNode>& nodes, double seed_prior) {
  std::size_t seeds = 0;
  std::size_t begin = 0;
  while (begin < nodes.size()) {
    std::size_t end = begin;
    while (end < nodes.size() && nodes[end].mention == nodes[begin].mention) ++end;
    const std::span<GraphNode> group(nodes.data() + begin, end - begin);
    begin = end;

    if (group.size() == 1) {
      group[0].is_seed = true;
      group[0].r0 = group[0].r = 1.0;
      ++seeds;
      continue;
    }
    auto by_prior = [](const GraphNode& a, const GraphNode& b) {
      if (a.prior != b.prior) return a.prior > b.prior;
      return a.candidate < b.candidate;
    };
    auto by_context = [&](const GraphNode& a, const GraphNode& b) {
      if (a.context != b.context) return a.context > b.context;
      return by_prior(a, b);
    };
    const auto top_prior = std::min_element(group.begin(), group.end(), by_prior);
    const auto top_context = std::min_element(group.begin(), group.end(), by_context);
    if (top_prior->prior >= seed_prior && top_prior == top_context) {
      for (auto& n : group) {
        n.is_seed = true;
        n.r0 = n.r = (&n == &*top_prior) ? 1.0 : 0.0;
        ++seeds;
      }
    }
  }
  return seeds;
}

RelationalGraph BuildGraph(std::vector<GraphNode> nodes,
                           std::span<const Mention> mentions, const RelatednessFn& sr,
                           const ReguConfig& config, const RelevanceFn& relevant) {
  RelationalGraph graph(std::move(nodes));
  const auto& ns = graph.nodes();
  const std::size_t n = ns.size();

  // Row i holds sr for j > i passing the mention and relatedness conditions.
  std::vector<std::vector<std::pair<std::size_t, double>>> upper(n);
  ParallelFor(n, config.threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ns[i].mention == ns[j].mention) continue;
      if (!relevant(mentions[ns[i].mention], mentions[ns[j].mention])) continue;
      const double w = sr(ns[i].candidate, ns[j].candidate);
      if (!std::isfinite(w)) throw NumericError("non-finite relatedness score");
      if (w > config.sr_min && w > 0.0) upper[i].emplace_back(j, w);
    }
  });

  std::vector<std::vector<std::pair<std::size_t, double>>> eligible(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : upper[i]) {
      eligible[i].emplace_back(j, w);
      eligible[j].emplace_back(i, w);
    }
  }
  std::vector<std::vector<std::size_t>> chosen(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& cand = eligible[i];
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    const std::size_t keep = std::min(config.k, cand.size());
    for (std::size_t t = 0; t < keep; ++t) chosen[i].push_back(cand[t].first);
    std::sort(chosen[i].begin(), chosen[i].end());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : upper[i]) {
      const bool picked = std::binary_search(chosen[i].begin(), chosen[i].end(), j) ||
                          std::binary_search(chosen[j].begin(), chosen[j].end(), i);
      if (picked) graph.SetEdge(i, j, w);
    }
  }
  return graph;
}

double Objective(const RelationalGraph& graph, std::span<const double> scores,
                 double mu) {
  if (scores.size() != graph.size()) {
    throw std::invalid_argument("score vector does not match graph size");
  }
  double fidelity = 0.0;
  double smoothness = 0.0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const GraphNode& node = graph.node(i);
    if (!node.is_seed) {
      const double d = scores[i] - node.r0;
      fidelity += d * d;
    }
    for (const auto& [j, w] : graph.Neighbors(i)) {
      const double d = scores[i] - scores[j];
      smoothness += w * d * d;
    }
  }
  return mu * fidelity + 0.5 * smoothness;
}

RegularizeResult Regularize(const RelationalGraph& graph, const ReguConfig& config,
                            bool record_objective) {
  config.Validate();
  const std::size_t n = graph.size();
  RegularizeResult result;
  result.scores.resize(n);
  std::vector<double> degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GraphNode& node = graph.node(i);
    if (!std::isfinite(node.r0)) throw NumericError("non-finite initial score");
    for (const auto& [j, w] : graph.Neighbors(i)) {
      if (!std::isfinite(w)) throw NumericError("non-finite edge weight");
    }
    degree[i] = graph.Degree(i);
    result.scores[i] = node.r0;
  }

  auto& r = result.scores;
  const double mu = config.mu;
  while (result.iterations < config.max_iter) {
    double max_change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const GraphNode& node = graph.node(i);
      if (node.is_seed) continue;
      double pull = mu * node.r0;
      for (const auto& [j, w] : graph.Neighbors(i)) pull += w * r[j];
      const double updated = pull / (degree[i] + mu);
      max_change = std::max(max_change, std::abs(updated - r[i]));
      r[i] = updated;
    }
    ++result.iterations;
    if (record_objective) result.objective_trace.push_back(Objective(graph, r, mu));
    if (!std::isfinite(max_change)) throw NumericError("regularization diverged");
    if (max_change < config.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::vector<std::optional<std::size_t>> DecodeNodes(const RelationalGraph& graph,
                                                    std::span<const double> scores,
                                                    std::size_t num_mentions) {
  std::vector<std::optional<std::size_t>> best(num_mentions);
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const GraphNode& node = graph.node(i);
    auto& slot = best.at(node.mention);
    if (!slot) {
      slot = i;
      continue;
    }
    const GraphNode& cur = graph.node(*slot);
    const double si = scores[i];
    const double sc = scores[*slot];
    const bool better = si > sc || (si == sc && (node.prior > cur.prior ||
                                                 (node.prior == cur.prior &&
                                                  node.candidate < cur.candidate)));
    if (better) slot = i;
  }
  return best;
}

std::vector<std::optional<EntityId>> Decode(const RelationalGraph& graph,
                                            std::span<const double> scores,
                                            std::size_t num_mentions) {
  std::vector<std::optional<EntityId>> out;
  out.reserve(num_mentions);
  for (const auto& slot : DecodeNodes(graph, scores, num_mentions)) {
    out.push_back(slot ? std::optional<EntityId>(graph.node(*slot).candidate)
                       : std::nullopt);
  }
  return out;
}

Linker::Linker(const MentionDictionary& dict, const TfIdfModel& tfidf, RelatednessFn sr,
               ReguConfig config)
    : dict_(dict), tfidf_(tfidf), sr_(std::move(sr)), config_(config) {
  config_.Validate();
}

std::vector<LinkDecision> Linker::Link(const AnchorDocument& doc) const {
  const auto mentions = ExtractMentions(doc, config_.context_window);
  auto nodes = MakeNodes(mentions, dict_, tfidf_, config_);
  MineSeeds(nodes, config_.seed_prior);
  const RelationalGraph graph = BuildGraph(std::move(nodes), mentions, sr_, config_);
  const RegularizeResult solved = Regularize(graph, config_);
  const auto picks = DecodeNodes(graph, solved.scores, mentions.size());

  std::vector<LinkDecision> out;
  out.reserve(mentions.size());
  for (std::size_t m = 0; m < mentions.size(); ++m) {
    LinkDecision d;
    d.doc_id = mentions[m].doc_id;
    d.offset = mentions[m].offset;
    d.surface = mentions[m].surface;
    if (picks[m]) {
      d.chosen = graph.node(*picks[m]).candidate;
      d.score = solved.scores[*picks[m]];
      d.seed = graph.node(*picks[m]).is_seed;
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<LinkDecision> Linker::LinkByPrior(const AnchorDocument& doc) const {
  std::vector<LinkDecision> out;
  for (const auto& m : ExtractMentions(doc, 0)) {
    LinkDecision d;
    d.doc_id = m.doc_id;
    d.offset = m.offset;
    d.surface = m.surface;
    const auto cands = GenerateCandidates(dict_, m, config_.top_n);
    if (!cands.empty()) {
      d.chosen = cands.front().id;
      d.score = cands.front().prior;
    }
    out.push_back(std::move(d));
  }
  return out;
}

void WriteLinks(std::span<const LinkDecision> links, std::ostream& out) {
  for (const auto& d : links) {
    nlohmann::ordered_json j;
    j["doc_id"] = d.doc_id;
    j["offset"] = d.offset;
    j["surface"] = d.surface;
    j["chosen"] = d.chosen ? nlohmann::ordered_json(*d.chosen) : nlohmann::ordered_json(nullptr);
    j["score"] = d.score;
    j["seed"] = d.seed;
    out << j.dump() << '\n';
  }
}

std::vector<LinkDecision> ReadLinks(std::istream& in, const std::string& source_name) {
  std::vector<LinkDecision> links;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LinkDecision d;
      d.doc_id = j.at("doc_id").get<std::string>();
      d.offset = j.at("offset").get<std::int64_t>();
      d.surface = j.value("surface", std::string());
      if (j.contains("chosen") && !j.at("chosen").is_null()) {
        d.chosen = j.at("chosen").get<std::string>();
      }
      d.score = j.value("score", 0.0);
      d.seed = j.value("seed", false);
      links.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return links;
}

}  // namespace dsrm
