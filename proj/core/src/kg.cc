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

#include "dsrm/kg.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dsrm/error.h"
#include "json.hpp"

namespace dsrm {
namespace {

using ordered_json = nlohmann::ordered_json;

bool ValidId(const std::string& id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  });
}

std::string Location(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::string JoinLimited(const std::vector<std::string>& items) {
  constexpr std::size_t kShown = 20;
  std::string out;
  for (std::size_t i = 0; i < items.size() && i < kShown; ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  if (items.size() > kShown) {
    out += " (+" + std::to_string(items.size() - kShown) + " more)";
  }
  return out;
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

bool Blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

template <typename Fn>
void ForEachJsonLine(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(Location(source, line_no) + "parse error: " + e.what());
    }
    try {
      fn(j, line_no);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(Location(source, line_no) + "bad record: " + e.what());
    }
  }
}

}  // namespace

KnowledgeGraph KnowledgeGraph::Build(
    std::vector<EntityRecord> records,
    std::map<EntityId, std::set<EntityId>> incoming) {
  KnowledgeGraph kg;
  for (auto& rec : records) {
    if (!ValidId(rec.id)) {
      throw DataError("invalid entity id '" + rec.id + "'");
    }
    EntityId id = rec.id;
    if (!kg.entities_.emplace(id, std::move(rec)).second) {
      throw DataError("duplicate entity id " + id);
    }
  }

  std::set<std::string> relations;
  std::set<std::string> types;
  std::vector<std::string> dangling;
  for (const auto& [id, rec] : kg.entities_) {
    for (const auto& fact : rec.facts) {
      relations.insert(fact.relation);
      if (!kg.entities_.count(fact.object)) {
        dangling.push_back(id + " -" + fact.relation + "-> " + fact.object);
      }
    }
    types.insert(rec.types.begin(), rec.types.end());
  }
  for (auto& [target, sources] : incoming) {
    if (!kg.entities_.count(target)) {
      dangling.push_back("incoming target " + target);
    }
    for (const auto& src : sources) {
      if (!kg.entities_.count(src)) {
        dangling.push_back("incoming " + src + " -> " + target);
      }
    }
  }
  if (!dangling.empty()) {
    throw DataError("dangling reference(s): " + JoinLimited(dangling));
  }

  for (auto& [target, sources] : incoming) {
    if (!sources.empty()) kg.incoming_.emplace(target, std::move(sources));
  }
  kg.relations_.assign(relations.begin(), relations.end());
  kg.types_.assign(types.begin(), types.end());
  return kg;
}

const EntityRecord* KnowledgeGraph::Find(const EntityId& id) const {
  auto it = entities_.find(id);
  return it == entities_.end() ? nullptr : &it->second;
}

const EntityRecord& KnowledgeGraph::Get(const EntityId& id) const {
  const EntityRecord* rec = Find(id);
  if (!rec) throw DataError("unknown entity " + id);
  return *rec;
}

const std::set<EntityId>& KnowledgeGraph::IncomingLinks(const EntityId& id) const {
  static const std::set<EntityId> kEmpty;
  if (!Contains(id)) throw DataError("unknown entity " + id);
  auto it = incoming_.find(id);
  return it == incoming_.end() ? kEmpty : it->second;
}

std::optional<std::size_t> KnowledgeGraph::RelationIndex(
    const std::string& label) const {
  auto it = std::lower_bound(relations_.begin(), relations_.end(), label);
  if (it == relations_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - relations_.begin());
}

std::optional<std::size_t> KnowledgeGraph::TypeIndex(
    const std::string& label) const {
  auto it = std::lower_bound(types_.begin(), types_.end(), label);
  if (it == types_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - types_.begin());
}

KnowledgeGraph ReadKg(std::istream& in, const std::string& source_name) {
  std::vector<EntityRecord> records;
  std::map<EntityId, std::set<EntityId>> incoming;
  std::set<EntityId> seen;
  ForEachJsonLine(in, source_name, [&](const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) {
      throw DataError(Location(source_name, line) + "expected a JSON object");
    }
    EntityRecord rec;
    rec.id = j.at("id").get<std::string>();
    if (!ValidId(rec.id)) {
      throw DataError(Location(source_name, line) + "invalid entity id '" +
                      rec.id + "'");
    }
    rec.surface = j.value("surface", std::string());
    rec.description = j.value("description", std::string());
    if (j.contains("types")) {
      for (const auto& t : j.at("types")) rec.types.insert(t.get<std::string>());
    }
    if (j.contains("facts")) {
      for (const auto& f : j.at("facts")) {
        if (!f.is_array() || f.size() != 2) {
          throw DataError(Location(source_name, line) +
                          "fact must be [relation, object_id]");
        }
        rec.facts.push_back({f[0].get<std::string>(), f[1].get<std::string>()});
      }
    }
    if (j.contains("incoming")) {
      auto& set = incoming[rec.id];
      for (const auto& s : j.at("incoming")) set.insert(s.get<std::string>());
    }
    if (!seen.insert(rec.id).second) {
      throw DataError(Location(source_name, line) + "duplicate entity id " +
                      rec.id);
    }
    records.push_back(std::move(rec));
  });
  return KnowledgeGraph::Build(std::move(records), std::move(incoming));
}

KnowledgeGraph LoadKg(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadKg(in, path.string());
}

void WriteKg(const KnowledgeGraph& kg, std::ostream& out) {
  for (const auto& [id, rec] : kg.entities()) {
    ordered_json j;
    j["id"] = rec.id;
    j["surface"] = rec.surface;
    j["description"] = rec.description;
    j["types"] = ordered_json::array();
    for (const auto& t : rec.types) j["types"].push_back(t);
    j["facts"] = ordered_json::array();
    for (const auto& f : rec.facts) {
      j["facts"].push_back(ordered_json::array({f.relation, f.object}));
    }
    j["incoming"] = ordered_json::array();
    for (const auto& s : kg.IncomingLinks(id)) j["incoming"].push_back(s);
    out << j.dump() << '\n';
  }
}

void SaveKg(const KnowledgeGraph& kg, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteKg(kg, out);
}

KnowledgeGraph PruneEntities(const KnowledgeGraph& kg, std::size_t min_incoming) {
  std::set<EntityId> alive;
  for (const auto& [id, rec] : kg.entities()) alive.insert(id);

  auto live_count = [&](const EntityId& id) {
    const auto& sources = kg.IncomingLinks(id);
    return static_cast<std::size_t>(std::count_if(
        sources.begin(), sources.end(),
        [&](const EntityId& s) { return alive.count(s) > 0; }));
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<EntityId> doomed;
    for (const auto& id : alive) {
      if (live_count(id) < min_incoming) doomed.push_back(id);
    }
    for (const auto& id : doomed) alive.erase(id);
    changed = !doomed.empty();
  }

  std::vector<EntityRecord> records;
  std::map<EntityId, std::set<EntityId>> incoming;
  for (const auto& id : alive) {
    EntityRecord rec = kg.Get(id);
    std::erase_if(rec.facts,
                  [&](const Fact& f) { return alive.count(f.object) == 0; });
    records.push_back(std::move(rec));
    std::set<EntityId> sources;
    for (const auto& s : kg.IncomingLinks(id)) {
      if (alive.count(s)) sources.insert(s);
    }
    if (!sources.empty()) incoming.emplace(id, std::move(sources));
  }
  return KnowledgeGraph::Build(std::move(records), std::move(incoming));
}

std::vector<AnchorDocument> ReadCorpus(std::istream& in,
                                       const std::string& source_name) {
  std::vector<AnchorDocument> docs;
  ForEachJsonLine(in, source_name, [&](const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) {
      throw DataError(Location(source_name, line) + "expected a JSON object");
    }
    AnchorDocument doc;
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.text = j.value("text", std::string());
    if (j.contains("anchors")) {
      for (const auto& a : j.at("anchors")) {
        Anchor anchor;
        anchor.offset = a.at("offset").get<std::int64_t>();
        anchor.surface = a.at("surface").get<std::string>();
        if (a.contains("gold") && !a.at("gold").is_null()) {
          anchor.gold = a.at("gold").get<std::string>();
        }
        if (anchor.offset < 0 ||
            anchor.offset > static_cast<std::int64_t>(doc.text.size())) {
          throw DataError(Location(source_name, line) + "anchor offset " +
                          std::to_string(anchor.offset) + " outside text");
        }
        if (!doc.anchors.empty() && anchor.offset < doc.anchors.back().offset) {
          throw DataError(Location(source_name, line) +
                          "anchors not sorted by offset");
        }
        doc.anchors.push_back(std::move(anchor));
      }
    }
    docs.push_back(std::move(doc));
  });
  return docs;
}

std::vector<AnchorDocument> LoadCorpus(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadCorpus(in, path.string());
}

void WriteCorpus(std::span<const AnchorDocument> docs, std::ostream& out) {
  for (const auto& doc : docs) {
    ordered_json j;
    j["doc_id"] = doc.doc_id;
    j["text"] = doc.text;
    j["anchors"] = ordered_json::array();
    for (const auto& a : doc.anchors) {
      ordered_json aj;
      aj["offset"] = a.offset;
      aj["surface"] = a.surface;
      aj["gold"] = a.gold ? ordered_json(*a.gold) : ordered_json(nullptr);
      j["anchors"].push_back(std::move(aj));
    }
    out << j.dump() << '\n';
  }
}

void SaveCorpus(std::span<const AnchorDocument> docs,
                const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteCorpus(docs, out);
}

std::size_t ResolveGold(const KnowledgeGraph& kg,
                        std::vector<AnchorDocument>& docs) {
  std::size_t demoted = 0;
  for (auto& doc : docs) {
    for (auto& a : doc.anchors) {
      if (a.gold && !kg.Contains(*a.gold)) {
        a.gold.reset();
        ++demoted;
      }
    }
  }
  return demoted;
}

MentionDictionary MentionDictionary::FromCounts(
    const std::map<std::string, std::map<EntityId, std::int64_t>>& counts) {
  MentionDictionary dict;
  for (const auto& [surface, per_entity] : counts) {
    std::int64_t total = 0;
    std::vector<Candidate> cands;
    for (const auto& [id, count] : per_entity) {
      if (count < 0) {
        throw DataError("negative count for (" + surface + ", " + id + ")");
      }
      if (count == 0) continue;
      total += count;
      cands.push_back({id, count, 0.0});
    }
    if (total <= 0) throw DataError("surface '" + surface + "' has no counts");
    for (auto& c : cands) {
      c.prior = static_cast<double>(c.count) / static_cast<double>(total);
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.id < b.id;
    });
    dict.entries_.emplace(surface, std::move(cands));
  }
  return dict;
}

std::span<const Candidate> MentionDictionary::Candidates(
    const std::string& surface) const {
  auto it = entries_.find(surface);
  if (it == entries_.end()) return {};
  return it->second;
}

double MentionDictionary::Prior(const std::string& surface,
                                const EntityId& id) const {
  for (const auto& c : Candidates(surface)) {
    if (c.id == id) return c.prior;
  }
  return 0.0;
}

MentionDictionary BuildDictionary(std::span<const AnchorDocument> corpus) {
  std::map<std::string, std::map<EntityId, std::int64_t>> counts;
  for (const auto& doc : corpus) {
    for (const auto& a : doc.anchors) {
      if (a.gold) ++counts[a.surface][*a.gold];
    }
  }
  return MentionDictionary::FromCounts(counts);
}

MentionDictionary ReadDictionary(std::istream& in, const std::string& source_name) {
  std::map<std::string, std::map<EntityId, std::int64_t>> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw DataError(Location(source_name, line_no) +
                      "expected surface\\tentity_id\\tcount");
    }
    const std::string surface = line.substr(0, t1);
    const std::string id = line.substr(t1 + 1, t2 - t1 - 1);
    std::int64_t count = 0;
    try {
      std::size_t used = 0;
      const std::string field = line.substr(t2 + 1);
      count = std::stoll(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw DataError(Location(source_name, line_no) + "bad count");
    }
    if (!ValidId(id)) {
      throw DataError(Location(source_name, line_no) + "invalid entity id");
    }
    counts[surface][id] += count;
  }
  return MentionDictionary::FromCounts(counts);
}

MentionDictionary LoadDictionary(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadDictionary(in, path.string());
}

void WriteDictionary(const MentionDictionary& dict, std::ostream& out) {
  for (const auto& [surface, cands] : dict.entries()) {
    if (surface.find_first_of("\t\n\r") != std::string::npos) {
      throw DataError("surface contains tab or newline: '" + surface + "'");
    }
    for (const auto& c : cands) {
      out << surface << '\t' << c.id << '\t' << c.count << '\n';
    }
  }
}

void SaveDictionary(const MentionDictionary& dict,
                    const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteDictionary(dict, out);
}

}  // namespace dsrm
