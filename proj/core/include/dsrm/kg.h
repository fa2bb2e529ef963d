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

#ifndef DSRM_KG_H_
#define DSRM_KG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dsrm {

// Opaque, whitespace-free entity token.
using EntityId = std::string;

struct Fact {
  std::string relation;
  EntityId object;

  friend bool operator==(const Fact&, const Fact&) = default;
};

struct EntityRecord {
  EntityId id;
  std::string surface;
  std::string description;
  std::set<std::string> types;
  std::vector<Fact> facts;

  friend bool operator==(const EntityRecord&, const EntityRecord&) = default;
};

struct KgStats {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t types = 0;
};

// Entities, their facts and the incoming anchor-link sets. Immutable once
// built; relation and type inventories are sorted so one-hot indices depend
// only on the label sets.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  // Validates ids, rejects dangling fact objects and incoming sources.
  // Throws DataError listing the offenders.
  static KnowledgeGraph Build(std::vector<EntityRecord> records,
                              std::map<EntityId, std::set<EntityId>> incoming);

  bool Contains(const EntityId& id) const { return entities_.count(id) > 0; }
  const EntityRecord* Find(const EntityId& id) const;
  // Throws DataError for unknown ids.
  const EntityRecord& Get(const EntityId& id) const;

  // Stored incoming anchor-link set; empty when none were recorded.
  // Throws DataError for unknown ids.
  const std::set<EntityId>& IncomingLinks(const EntityId& id) const;

  const std::map<EntityId, EntityRecord>& entities() const { return entities_; }
  const std::map<EntityId, std::set<EntityId>>& incoming() const {
    return incoming_;
  }
  const std::vector<std::string>& relation_inventory() const {
    return relations_;
  }
  const std::vector<std::string>& type_inventory() const { return types_; }

  std::optional<std::size_t> RelationIndex(const std::string& label) const;
  std::optional<std::size_t> TypeIndex(const std::string& label) const;

  std::size_t size() const { return entities_.size(); }
  KgStats stats() const { return {entities_.size(), relations_.size(), types_.size()}; }

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.entities_ == b.entities_ && a.incoming_ == b.incoming_ &&
           a.relations_ == b.relations_ && a.types_ == b.types_;
  }

 private:
  std::map<EntityId, EntityRecord> entities_;
  // Only entities with at least one incoming link have an entry.
  std::map<EntityId, std::set<EntityId>> incoming_;
  std::vector<std::string> relations_;
  std::vector<std::string> types_;
};

KnowledgeGraph ReadKg(std::istream& in, const std::string& source_name = "kg");
KnowledgeGraph LoadKg(const std::filesystem::path& path);
void WriteKg(const KnowledgeGraph& kg, std::ostream& out);
void SaveKg(const KnowledgeGraph& kg, const std::filesystem::path& path);

// Keeps entities with at least `min_incoming` incoming links, dropping facts
// and links that point at removed entities. Removal can lower the counts of
// survivors, so this repeats until nothing else is removed; the result is a
// fixed point and pruning it again is a no-op.
KnowledgeGraph PruneEntities(const KnowledgeGraph& kg, std::size_t min_incoming);

struct Anchor {
  std::int64_t offset = 0;
  std::string surface;
  std::optional<EntityId> gold;  // nullopt is NIL

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct AnchorDocument {
  std::string doc_id;
  std::string text;
  std::vector<Anchor> anchors;  // sorted by offset

  friend bool operator==(const AnchorDocument&, const AnchorDocument&) = default;
};

std::vector<AnchorDocument> ReadCorpus(std::istream& in,
                                       const std::string& source_name = "corpus");
std::vector<AnchorDocument> LoadCorpus(const std::filesystem::path& path);
void WriteCorpus(std::span<const AnchorDocument> docs, std::ostream& out);
void SaveCorpus(std::span<const AnchorDocument> docs,
                const std::filesystem::path& path);

// Rewrites gold ids that do not resolve in `kg` to NIL. Returns how many
// anchors were demoted.
std::size_t ResolveGold(const KnowledgeGraph& kg,
                        std::vector<AnchorDocument>& docs);

struct Candidate {
  EntityId id;
  std::int64_t count = 0;
  double prior = 0.0;  // count / total count of the surface
};

// surface -> candidates ordered by (count desc, id asc).
class MentionDictionary {
 public:
  MentionDictionary() = default;

  // Throws DataError on negative counts or a surface whose counts sum to 0.
  static MentionDictionary FromCounts(
      const std::map<std::string, std::map<EntityId, std::int64_t>>& counts);

  // Empty span for unknown surfaces.
  std::span<const Candidate> Candidates(const std::string& surface) const;
  // 0 when the pair was never observed.
  double Prior(const std::string& surface, const EntityId& id) const;

  const std::map<std::string, std::vector<Candidate>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, std::vector<Candidate>> entries_;
};

// Counts (surface, gold) over all non-NIL anchors.
MentionDictionary BuildDictionary(std::span<const AnchorDocument> corpus);

MentionDictionary ReadDictionary(std::istream& in,
                                 const std::string& source_name = "dictionary");
MentionDictionary LoadDictionary(const std::filesystem::path& path);
// TSV: surface \t entity_id \t count, LF line endings.
void WriteDictionary(const MentionDictionary& dict, std::ostream& out);
void SaveDictionary(const MentionDictionary& dict,
                    const std::filesystem::path& path);

}  // namespace dsrm

#endif  // DSRM_KG_H_
