// Copyright 2026 The eKG Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ekg/rdf.hpp"

namespace ekg {

using TermId = std::uint32_t;

/// Immutable graph with interned terms and SPO, POS and OSP sorted indexes.
/// Every combination of bound positions is a prefix of one of the three.
class IndexedGraph {
 public:
  explicit IndexedGraph(rdf::Graph g);

  const rdf::Graph& graph() const { return graph_; }
  std::size_t size() const { return spo_.size(); }

  std::optional<TermId> lookup(const rdf::Term& t) const;
  const rdf::Term& term(TermId id) const { return terms_[id]; }

  /// Calls `visit(s, p, o)` for each triple matching the bound positions.
  template <class Visit>
  void match(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o, Visit&& visit) const;

 private:
  using Key = std::array<TermId, 3>;
  static std::string term_key(const rdf::Term& t);
  static std::pair<std::vector<Key>::const_iterator, std::vector<Key>::const_iterator> prefix_range(
      const std::vector<Key>& index, const Key& key, std::size_t bound);

  rdf::Graph graph_;
  std::vector<rdf::Term> terms_;
  std::unordered_map<std::string, TermId> ids_;
  std::vector<Key> spo_, pos_, osp_;
};

/// Point-in-time view of every loaded graph. Queries run against one of these.
struct StoreSnapshot {
  std::map<std::string, std::shared_ptr<const IndexedGraph>> graphs;
  std::map<std::string, std::string> aliases;
  std::shared_ptr<const IndexedGraph> merged;  // union of all graphs; the default graph

  /// Graph by name or alias; nullptr when absent.
  const IndexedGraph* find(const std::string& name) const;
  std::size_t triple_count() const { return merged ? merged->size() : 0; }
};

/// Named-graph store. Readers take snapshots; writers swap in a new snapshot
/// under a lock, so in-flight queries keep their view.
class TripleStore {
 public:
  TripleStore();

  /// Inserts or replaces graph `name`.
  void load_graph(const std::string& name, rdf::Graph g);
  void drop_graph(const std::string& name);
  /// Lets FROM <alias> address graph `name`.
  void add_alias(const std::string& alias, const std::string& name);
  /// Rebuilds every index from the stored triples.
  void reindex();

  std::shared_ptr<const StoreSnapshot> snapshot() const;

 private:
  void publish(std::map<std::string, std::shared_ptr<const IndexedGraph>> graphs,
               std::map<std::string, std::string> aliases);

  mutable std::mutex mu_;
  std::shared_ptr<const StoreSnapshot> current_;
};

template <class Visit>
void IndexedGraph::match(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
                         Visit&& visit) const {
  if (s && o && !p) {
    auto [b, e] = prefix_range(osp_, {*o, *s, 0}, 2);
    for (auto it = b; it != e; ++it) visit((*it)[1], (*it)[2], (*it)[0]);
  } else if (s) {
    std::size_t bound = p ? (o ? 3 : 2) : 1;
    auto [b, e] = prefix_range(spo_, {*s, p.value_or(0), o.value_or(0)}, bound);
    for (auto it = b; it != e; ++it) visit((*it)[0], (*it)[1], (*it)[2]);
  } else if (p) {
    auto [b, e] = prefix_range(pos_, {*p, o.value_or(0), 0}, o ? 2 : 1);
    for (auto it = b; it != e; ++it) visit((*it)[2], (*it)[0], (*it)[1]);
  } else if (o) {
    auto [b, e] = prefix_range(osp_, {*o, 0, 0}, 1);
    for (auto it = b; it != e; ++it) visit((*it)[1], (*it)[2], (*it)[0]);
  } else {
    for (const auto& k : spo_) visit(k[0], k[1], k[2]);
  }
}

}  // namespace ekg
