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

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsrm/checkpoint.h"
#include "dsrm/disambiguator.h"
#include "dsrm/error.h"
#include "dsrm/kg.h"
#include "dsrm/metrics.h"
#include "dsrm/miner.h"
#include "dsrm/network.h"
#include "dsrm/relatedness.h"
#include "dsrm/scorer.h"
#include "dsrm/synthetic.h"
#include "dsrm/trainer.h"
#include "dsrm/vectorizer.h"

namespace dsrm::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
};

std::ifstream OpenRead(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

// Writes through a temporary buffer so a failed run leaves no partial file.
void WriteFile(const std::string& path, const std::function<void(std::ostream&)>& fn,
               std::ostream& fallback) {
  std::ostringstream buf;
  fn(buf);
  if (path.empty() || path == "-") {
    fallback << buf.str();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << buf.str();
  if (!out) throw DataError("write failed for " + path);
}

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void AddCommon(CLI::App* sub, Common& c, std::uint64_t default_seed) {
  c.seed = default_seed;
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads; output is identical for any value")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  sub->fallthrough();
}

// Restricts the dictionary to entities present in the graph.
MentionDictionary FilterDictionary(const MentionDictionary& dict, const KnowledgeGraph& kg) {
  std::map<std::string, std::map<EntityId, std::int64_t>> counts;
  for (const auto& [surface, cands] : dict.entries()) {
    for (const auto& c : cands) {
      if (kg.Contains(c.id)) counts[surface][c.id] = c.count;
    }
  }
  return MentionDictionary::FromCounts(counts);
}

MentionDictionary SurfaceDictionary(const KnowledgeGraph& kg) {
  std::map<std::string, std::map<EntityId, std::int64_t>> counts;
  for (const auto& [id, rec] : kg.entities()) {
    if (!rec.surface.empty()) counts[rec.surface][id] = 1;
  }
  return MentionDictionary::FromCounts(counts);
}

// Owns everything a relatedness measure borrows.
struct Measure {
  std::string name;
  std::unique_ptr<TfIdfModel> tfidf;
  std::unique_ptr<Checkpoint> checkpoint;
  std::unique_ptr<DsrmScorer> scorer;
  RelatednessFn fn;
  std::function<double(const EntityId&, const EntityId&)> raw;
};

std::unique_ptr<Measure> MakeMeasure(const std::string& name, const KnowledgeGraph& kg,
                                     const std::string& model_path, int threads) {
  auto m = std::make_unique<Measure>();
  m->name = name;
  if (name == "ngd") {
    m->fn = MakeNgdRelatedness(kg);
    m->raw = m->fn;
  } else if (name == "vsp") {
    m->tfidf = std::make_unique<TfIdfModel>(TfIdfModel::Build(kg));
    m->fn = MakeVspRelatedness(*m->tfidf);
    m->raw = m->fn;
  } else if (name == "dsrm") {
    if (model_path.empty()) throw DataError("--measure dsrm needs --model");
    m->checkpoint = std::make_unique<Checkpoint>(LoadCheckpoint(model_path));
    m->scorer = std::make_unique<DsrmScorer>(kg, m->checkpoint->params);
    m->scorer->Prepare({}, threads);
    m->fn = MakeDsrmRelatedness(*m->scorer);
    const DsrmScorer* s = m->scorer.get();
    m->raw = [s](const EntityId& a, const EntityId& b) { return s->Cosine(a, b); };
  } else {
    throw CLI::ValidationError("--measure", "must be ngd, vsp or dsrm");
  }
  return m;
}

std::vector<std::pair<EntityId, EntityId>> ReadIdPairs(const std::string& path) {
  auto in = OpenRead(path);
  std::vector<std::pair<EntityId, EntityId>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected e_i\\te_j");
    }
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return pairs;
}

void CheckKnown(const KnowledgeGraph& kg, const EntityId& id) {
  if (!kg.Contains(id)) throw DataError("unknown entity " + id);
}

// ---- subcommands -------------------------------------------------------

struct BuildDictArgs {
  Common common;
  std::string corpus, kg, out;
};

void RunBuildDict(const BuildDictArgs& a, std::ostream& out, std::ostream& err) {
  auto corpus = LoadCorpus(a.corpus);
  if (!a.kg.empty()) {
    const auto kg = LoadKg(a.kg);
    const std::size_t demoted = ResolveGold(kg, corpus);
    if (demoted > 0) err << "build-dict: " << demoted << " anchors point outside the graph\n";
  }
  const auto dict = BuildDictionary(corpus);
  WriteFile(a.out, [&](std::ostream& o) { WriteDictionary(dict, o); }, out);
  err << "build-dict: " << dict.size() << " surfaces\n";
}

struct PruneArgs {
  Common common;
  std::string kg, out;
  std::size_t min_incoming = 5;
};

void RunPrune(const PruneArgs& a, std::ostream& out, std::ostream& err) {
  const auto kg = LoadKg(a.kg);
  const auto pruned = PruneEntities(kg, a.min_incoming);
  WriteFile(a.out, [&](std::ostream& o) { WriteKg(pruned, o); }, out);
  err << "prune: kept " << pruned.size() << " of " << kg.size() << " entities\n";
}

struct MineArgs {
  Common common;
  std::string corpus, kg, dict, out;
  std::int64_t delta = 150;
  std::size_t negatives = 5;
  bool no_kg_pairs = false;
};

void RunMine(const MineArgs& a, std::ostream& out, std::ostream& err) {
  auto corpus = LoadCorpus(a.corpus);
  std::optional<KnowledgeGraph> kg;
  if (!a.kg.empty()) {
    kg = LoadKg(a.kg);
    ResolveGold(*kg, corpus);
  }
  MentionDictionary dict = a.dict.empty() ? BuildDictionary(corpus) : LoadDictionary(a.dict);
  if (kg) dict = FilterDictionary(dict, *kg);
  MinerConfig config;
  config.delta = a.delta;
  config.negatives = a.negatives;
  config.seed = a.common.seed;
  auto groups = MinePairs(corpus, dict, config);
  const std::size_t from_corpus = groups.size();
  if (kg && !a.no_kg_pairs) {
    auto extra = MineKgPairs(*kg, config);
    groups.insert(groups.end(), extra.begin(), extra.end());
  }
  WriteFile(a.out, [&](std::ostream& o) { WriteGroups(groups, o); }, out);
  err << "mine-pairs: " << from_corpus << " corpus groups, "
      << groups.size() - from_corpus << " graph groups\n";
}

struct TrainArgs {
  Common common;
  std::string kg, pairs, out;
  TrainConfig config;
  std::vector<std::size_t> layers = {64, 64, 32};
};

void RunTrain(TrainArgs a, std::ostream& err) {
  if (a.layers.size() != 3) throw CLI::ValidationError("--layers", "expects h1,h2,out");
  const auto kg = LoadKg(a.kg);
  const auto groups = LoadGroups(a.pairs);
  const auto training = BuildTrainingGroups(kg, groups);
  a.config.seed = a.common.seed;
  a.config.threads = a.common.threads;
  a.config.Validate();
  const LayerSizes sizes = {FeatureDimension(kg), a.layers[0], a.layers[1], a.layers[2]};
  const auto initial = InitParams(sizes, a.common.seed);
  const auto result = Train(initial, training, a.config);
  for (const auto& e : result.report.epochs) {
    err << "train: epoch " << e.epoch << " train_loss " << e.train_loss
        << " validation_loss " << e.validation_loss << " lr " << e.learning_rate << "\n";
  }
  SaveCheckpoint({result.params, a.config.gamma}, a.out);
  WriteFile(a.out + ".json", [&](std::ostream& o) { o << result.report.ToJson() << "\n"; },
            err);
  err << "train: best epoch " << result.report.best_epoch << " validation_loss "
      << result.report.best_validation_loss << "\n";
}

struct ScoreArgs {
  Common common;
  std::string measure, pairs, kg, model, out;
};

void RunScore(const ScoreArgs& a, std::ostream& out) {
  const auto kg = LoadKg(a.kg);
  const auto pairs = ReadIdPairs(a.pairs);
  for (const auto& [x, y] : pairs) {
    CheckKnown(kg, x);
    CheckKnown(kg, y);
  }
  const auto measure = MakeMeasure(a.measure, kg, a.model, a.common.threads);
  WriteFile(a.out, [&](std::ostream& o) {
    for (const auto& [x, y] : pairs) o << x << '\t' << y << '\t' << Fixed6(measure->raw(x, y)) << '\n';
  }, out);
}

struct LinkArgs {
  Common common;
  std::string kg, model, dict, docs, measure = "dsrm", out;
  ReguConfig config;
  bool prior_only = false;
};

void RunLink(LinkArgs a, std::ostream& out, std::ostream& err) {
  a.config.threads = a.common.threads;
  a.config.Validate();
  const auto kg = LoadKg(a.kg);
  const auto docs = LoadCorpus(a.docs);
  const MentionDictionary dict =
      a.dict.empty() ? SurfaceDictionary(kg) : FilterDictionary(LoadDictionary(a.dict), kg);
  const TfIdfModel tfidf = TfIdfModel::Build(kg);
  std::unique_ptr<Measure> measure;
  RelatednessFn sr = [](const EntityId&, const EntityId&) { return 0.0; };
  if (!a.prior_only) {
    measure = MakeMeasure(a.measure, kg, a.model, a.common.threads);
    sr = measure->fn;
  }
  const Linker linker(dict, tfidf, sr, a.config);
  std::vector<LinkDecision> links;
  for (const auto& doc : docs) {
    auto d = a.prior_only ? linker.LinkByPrior(doc) : linker.Link(doc);
    links.insert(links.end(), d.begin(), d.end());
  }
  WriteFile(a.out, [&](std::ostream& o) { WriteLinks(links, o); }, out);
  err << "link: " << links.size() << " mentions in " << docs.size() << " documents\n";
}

struct EvaluateArgs {
  Common common;
  std::string pred, gold, report;
  std::string benchmark, measure, kg, model;
};

json EvaluateLinks(const EvaluateArgs& a) {
  auto in = OpenRead(a.pred);
  const auto links = ReadLinks(in, a.pred);
  const auto docs = LoadCorpus(a.gold);
  const auto gold = GoldMentions(docs);
  std::map<MentionKey, std::optional<EntityId>> pred;
  for (const auto& l : links) pred[{l.doc_id, l.offset}] = l.chosen;
  std::size_t mentions = 0;
  std::set<std::string> documents;
  for (const auto& [key, g] : gold) {
    if (!g) continue;
    ++mentions;
    documents.insert(key.doc_id);
  }
  json report;
  report["micro_p_at_1"] = PrecisionAt1(pred, gold, Averaging::kMicro);
  report["macro_p_at_1"] = PrecisionAt1(pred, gold, Averaging::kMacro);
  report["mentions"] = mentions;
  report["documents"] = documents.size();
  return report;
}

json EvaluateBenchmark(const EvaluateArgs& a) {
  if (a.kg.empty() || a.measure.empty()) {
    throw CLI::ValidationError("--benchmark", "needs --kg and --measure");
  }
  const auto kg = LoadKg(a.kg);
  auto in = OpenRead(a.benchmark);
  const auto lists = ReadBenchmark(in, a.benchmark);
  if (lists.empty()) throw DataError(a.benchmark + ": no queries");
  const auto measure = MakeMeasure(a.measure, kg, a.model, a.common.threads);
  std::vector<RankedList> ranked;
  for (const auto& l : lists) {
    CheckKnown(kg, l.query);
    std::vector<std::size_t> order(l.candidates.size());
    std::vector<double> score(l.candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      CheckKnown(kg, l.candidates[i]);
      order[i] = i;
      score[i] = measure->raw(l.query, l.candidates[i]);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (score[x] != score[y]) return score[x] > score[y];
      return l.candidates[x] < l.candidates[y];
    });
    RankedList r{l.query, {}, {}};
    for (std::size_t i : order) {
      r.candidates.push_back(l.candidates[i]);
      r.gains.push_back(l.gains[i]);
    }
    ranked.push_back(std::move(r));
  }
  json report;
  for (std::size_t k : {1, 5, 10}) {
    double sum = 0.0;
    for (const auto& r : ranked) sum += NdcgAtK(r, k);
    report["ndcg@" + std::to_string(k)] = sum / static_cast<double>(ranked.size());
  }
  report["map"] = MeanAveragePrecision(ranked);
  report["measure"] = a.measure;
  report["queries"] = ranked.size();
  return report;
}

void RunEvaluate(const EvaluateArgs& a, std::ostream& out) {
  json report;
  if (!a.benchmark.empty()) {
    report = EvaluateBenchmark(a);
  } else {
    if (a.pred.empty() || a.gold.empty()) {
      throw CLI::ValidationError("evaluate", "needs --pred and --gold, or --benchmark");
    }
    report = EvaluateLinks(a);
  }
  WriteFile(a.report, [&](std::ostream& o) { o << report.dump(2) << "\n"; }, out);
}

struct DumpArgs {
  Common common;
  std::string kg, out;
  std::vector<std::string> ids;
};

void RunDump(const DumpArgs& a, std::ostream& out) {
  const auto kg = LoadKg(a.kg);
  std::vector<EntityId> ids = a.ids;
  if (ids.empty()) {
    for (const auto& [id, rec] : kg.entities()) ids.push_back(id);
  }
  for (const auto& id : ids) CheckKnown(kg, id);
  WriteFile(a.out, [&](std::ostream& o) {
    for (const auto& id : ids) {
      const FeatureVector fv = EncodeEntity(kg, id);
      for (Channel ch : {Channel::kEntities, Channel::kRelations, Channel::kTypes,
                         Channel::kDescription}) {
        const SparseVector& v = fv.channel(ch);
        nlohmann::ordered_json j;
        j["id"] = id;
        j["channel"] = ChannelName(ch);
        j["indices"] = std::vector<std::uint32_t>(v.indices().begin(), v.indices().end());
        j["values"] = std::vector<double>(v.values().begin(), v.values().end());
        o << j.dump() << '\n';
      }
    }
  }, out);
}

struct SynthArgs {
  Common common;
  std::string out_dir;
};

void RunSynth(const SynthArgs& a, std::ostream& err) {
  SyntheticConfig config;
  config.seed = a.common.seed;
  const auto fx = GenerateSynthetic(config);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  SaveKg(fx.kg, dir / "kg.jsonl");
  SaveCorpus(fx.corpus, dir / "corpus.jsonl");
  SaveCorpus(fx.heldout, dir / "heldout.jsonl");
  json clusters(fx.cluster);
  WriteFile((dir / "clusters.json").string(),
            [&](std::ostream& o) { o << clusters.dump(2) << "\n"; }, err);
  err << "synth: " << fx.kg.size() << " entities, " << fx.corpus.size()
      << " training documents, " << fx.heldout.size() << " held-out documents\n";
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deep semantic relatedness and collective entity linking", "dsrm"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file; keys go under a [subcommand] table")
      ->check(CLI::ExistingFile);
  app.allow_config_extras(CLI::config_extras_mode::ignore);
  app.footer("Exit codes: 0 ok, 1 usage, 2 data or validation error, 3 numeric failure.");

  BuildDictArgs bd;
  auto* s_bd = app.add_subcommand("build-dict", "count surface->entity anchors into a dictionary");
  AddCommon(s_bd, bd.common, 0);
  s_bd->add_option("--corpus", bd.corpus, "anchor corpus JSONL")->required();
  s_bd->add_option("--kg", bd.kg, "graph JSONL; anchors to unknown entities become NIL");
  s_bd->add_option("--out", bd.out, "dictionary TSV")->required();

  PruneArgs pr;
  auto* s_pr = app.add_subcommand("prune", "drop entities with too few incoming links");
  AddCommon(s_pr, pr.common, 0);
  s_pr->add_option("--kg", pr.kg, "graph JSONL")->required();
  s_pr->add_option("--min-incoming", pr.min_incoming, "minimum incoming links")
      ->capture_default_str();
  s_pr->add_option("--out", pr.out, "pruned graph JSONL")->required();

  MineArgs mi;
  auto* s_mi = app.add_subcommand("mine-pairs", "mine training groups from anchors and facts");
  AddCommon(s_mi, mi.common, 0);
  s_mi->add_option("--corpus", mi.corpus, "anchor corpus JSONL")->required();
  s_mi->add_option("--kg", mi.kg, "graph JSONL; also adds fact-based groups");
  s_mi->add_option("--dict", mi.dict, "dictionary TSV (default: built from the corpus)");
  s_mi->add_option("--out", mi.out, "training groups JSONL")->required();
  s_mi->add_option("--delta", mi.delta, "character window between anchors")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  s_mi->add_option("--negatives", mi.negatives, "negatives sampled per group")
      ->capture_default_str();
  s_mi->add_flag("--no-kg-pairs", mi.no_kg_pairs, "skip fact-based groups");

  TrainArgs tr;
  auto* s_tr = app.add_subcommand("train", "train the relatedness network");
  AddCommon(s_tr, tr.common, 1);
  s_tr->add_option("--kg", tr.kg, "graph JSONL")->required();
  s_tr->add_option("--pairs", tr.pairs, "training groups JSONL")->required();
  s_tr->add_option("--out", tr.out, "checkpoint path; the report goes to <out>.json")
      ->required();
  s_tr->add_option("--gamma", tr.config.gamma, "softmax smoothing factor")
      ->capture_default_str();
  s_tr->add_option("--lr", tr.config.learning_rate, "SGD learning rate")->capture_default_str();
  s_tr->add_option("--lr-decay", tr.config.lr_decay, "learning-rate factor on a stalled epoch")
      ->capture_default_str();
  s_tr->add_option("--batch", tr.config.minibatch_size, "minibatch size")
      ->capture_default_str();
  s_tr->add_option("--epochs", tr.config.max_epochs, "maximum epochs")->capture_default_str();
  s_tr->add_option("--val-fraction", tr.config.validation_fraction, "held-out fraction")
      ->capture_default_str();
  s_tr->add_option("--patience", tr.config.patience, "stalled epochs before stopping")
      ->capture_default_str();
  s_tr->add_option("--layers", tr.layers,
                   "h1,h2,out (full-scale setting: 300,300,300)")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();

  ScoreArgs sc;
  auto* s_sc = app.add_subcommand("score", "score entity pairs with a relatedness measure");
  AddCommon(s_sc, sc.common, 0);
  s_sc->add_option("--measure", sc.measure, "ngd, vsp or dsrm")
      ->required()
      ->check(CLI::IsMember({"ngd", "vsp", "dsrm"}));
  s_sc->add_option("--pairs", sc.pairs, "TSV of e_i<TAB>e_j")->required();
  s_sc->add_option("--kg", sc.kg, "graph JSONL")->required();
  s_sc->add_option("--model", sc.model, "checkpoint (dsrm only)");
  s_sc->add_option("--out", sc.out, "output TSV (default stdout)");

  LinkArgs li;
  auto* s_li = app.add_subcommand("link", "collectively link the mentions of each document");
  AddCommon(s_li, li.common, 0);
  s_li->add_option("--kg", li.kg, "graph JSONL")->required();
  s_li->add_option("--docs", li.docs, "documents JSONL; anchors are the mentions")->required();
  s_li->add_option("--dict", li.dict, "dictionary TSV (default: entity surfaces)");
  s_li->add_option("--model", li.model, "checkpoint (dsrm only)");
  s_li->add_option("--measure", li.measure, "ngd, vsp or dsrm")
      ->capture_default_str()
      ->check(CLI::IsMember({"ngd", "vsp", "dsrm"}));
  s_li->add_option("--mu", li.config.mu, "fidelity weight")->capture_default_str();
  s_li->add_option("--k", li.config.k, "nearest neighbors per node")->capture_default_str();
  s_li->add_option("--lambda", li.config.lambda_prior, "prior weight of the initial score")
      ->capture_default_str();
  s_li->add_option("--sr-min", li.config.sr_min, "edges need relatedness above this")
      ->capture_default_str();
  s_li->add_option("--top-n", li.config.top_n, "candidates per mention")
      ->capture_default_str();
  s_li->add_option("--seed-prior", li.config.seed_prior, "prior needed for a high-prior seed")
      ->capture_default_str();
  s_li->add_option("--context-window", li.config.context_window,
                   "context tokens on each side; -1 is the whole document")
      ->capture_default_str();
  s_li->add_option("--tol", li.config.tol, "solver tolerance")->capture_default_str();
  s_li->add_option("--max-iter", li.config.max_iter, "solver sweep cap")->capture_default_str();
  s_li->add_flag("--prior-only", li.prior_only, "decode by prior popularity alone");
  s_li->add_option("--out", li.out, "links JSONL (default stdout)");

  EvaluateArgs ev;
  auto* s_ev = app.add_subcommand("evaluate", "P@1 of links, or ranking quality of a measure");
  AddCommon(s_ev, ev.common, 0);
  s_ev->add_option("--pred", ev.pred, "links JSONL");
  s_ev->add_option("--gold", ev.gold, "documents JSONL with gold anchors");
  s_ev->add_option("--benchmark", ev.benchmark, "TSV of query<TAB>candidate<TAB>gain");
  s_ev->add_option("--measure", ev.measure, "measure ranked in benchmark mode")
      ->check(CLI::IsMember({"ngd", "vsp", "dsrm"}));
  s_ev->add_option("--kg", ev.kg, "graph JSONL (benchmark mode)");
  s_ev->add_option("--model", ev.model, "checkpoint (benchmark mode, dsrm)");
  s_ev->add_option("--report", ev.report, "JSON report (default stdout)");

  DumpArgs du;
  auto* s_du = app.add_subcommand("dump-features", "write per-channel feature vectors");
  AddCommon(s_du, du.common, 0);
  s_du->add_option("--kg", du.kg, "graph JSONL")->required();
  s_du->add_option("--ids", du.ids, "entity ids (default: all)")->delimiter(',');
  s_du->add_option("--out", du.out, "JSONL (default stdout)");

  SynthArgs sy;
  auto* s_sy = app.add_subcommand("synth", "generate the two-cluster synthetic fixture");
  AddCommon(s_sy, sy.common, SyntheticConfig{}.seed);
  s_sy->add_option("--out-dir", sy.out_dir, "output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  try {
    if (*s_bd) RunBuildDict(bd, out, err);
    if (*s_pr) RunPrune(pr, out, err);
    if (*s_mi) RunMine(mi, out, err);
    if (*s_tr) RunTrain(tr, err);
    if (*s_sc) RunScore(sc, out);
    if (*s_li) RunLink(li, out, err);
    if (*s_ev) RunEvaluate(ev, out);
    if (*s_du) RunDump(du, out);
    if (*s_sy) RunSynth(sy, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace dsrm::cli
