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

#ifndef DSRM_TESTS_SUPPORT_FIXTURES_H_
#define DSRM_TESTS_SUPPORT_FIXTURES_H_

#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsrm/kg.h"
#include "dsrm/network.h"
#include "dsrm/vectorizer.h"

namespace dsrm::testing {

// Three entities, two relations, one type.
inline const char* kThreeEntityKg =
    R"({"id":"Miami_Heat","surface":"Miami Heat","description":"basketball team in Miami","types":["sports_team"],"facts":[["coach","Erik_Spoelstra"],["location","Miami"]],"incoming":["Miami","Erik_Spoelstra"]}
{"id":"Erik_Spoelstra","surface":"Erik Spoelstra","description":"","types":[],"facts":[],"incoming":["Miami_Heat"]}
{"id":"Miami","surface":"Miami","description":"city in Florida","types":[],"facts":[],"incoming":[]}
)";

inline KnowledgeGraph ParseKg(const std::string& text) {
  std::istringstream in(text);
  return ReadKg(in, "fixture");
}

inline EntityRecord Record(const std::string& id, const std::string& surface = "",
                           const std::string& description = "",
                           std::set<std::string> types = {},
                           std::vector<Fact> facts = {}) {
  return {id, surface.empty() ? id : surface, description, std::move(types), std::move(facts)};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("dsrm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" +
             std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Dense random input of the given dimension with a few exact zeros.
inline SparseVector RandomInput(std::size_t dim, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t i = 0; i < dim; ++i) {
    if (gen() % 4 == 0) continue;
    entries.emplace_back(static_cast<std::uint32_t>(i), u(gen));
  }
  return SparseVector::FromEntries(dim, std::move(entries));
}

inline std::vector<TrainingGroup> RandomGroups(std::size_t dim, std::size_t count,
                                               std::size_t negatives, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<TrainingGroup> groups;
  for (std::size_t g = 0; g < count; ++g) {
    TrainingGroup group{RandomInput(dim, gen), RandomInput(dim, gen), {}};
    for (std::size_t n = 0; n < negatives; ++n) group.negatives.push_back(RandomInput(dim, gen));
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace dsrm::testing

#endif  // DSRM_TESTS_SUPPORT_FIXTURES_H_
