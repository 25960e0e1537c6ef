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

#include "ekg/store.hpp"

#include <algorithm>

namespace ekg {

std::string IndexedGraph::term_key(const rdf::Term& t) {
  std::string k;
  k.reserve(t.value.size() + t.datatype.size() + t.language.size() + 3);
  k += static_cast<char>('0' + static_cast<int>(t.kind));
  k += t.value;
  k += '\x1f';
  k += t.datatype;
  k += '\x1f';
  k += t.language;
  return k;
}

IndexedGraph::IndexedGraph(rdf::Graph g) : graph_(std::move(g)) {
  auto intern = [&](const rdf::Term& t) {
    auto [it, fresh] = ids_.emplace(term_key(t), static_cast<TermId>(terms_.size()));
    if (fresh) terms_.push_back(t);
    return it->second;
  };
  spo_.reserve(graph_.size());
  for (const auto& t : graph_.triples()) spo_.push_back({intern(t.subject), intern(t.predicate), intern(t.object)});
  pos_.reserve(spo_.size());
  osp_.reserve(spo_.size());
  for (const auto& k : spo_) {
    pos_.push_back({k[1], k[2], k[0]});
    osp_.push_back({k[2], k[0], k[1]});
  }
  std::sort(spo_.begin(), spo_.end());
  std::sort(pos_.begin(), pos_.end());
  std::sort(osp_.begin(), osp_.end());
}

std::optional<TermId> IndexedGraph::lookup(const rdf::Term& t) const {
  auto it = ids_.find(term_key(t));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::pair<std::vector<IndexedGraph::Key>::const_iterator, std::vector<IndexedGraph::Key>::const_iterator>
IndexedGraph::prefix_range(const std::vector<Key>& index, const Key& key, std::size_t bound) {
  auto less = [bound](const Key& a, const Key& b) {
    for (std::size_t i = 0; i < bound; ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  };
  return std::equal_range(index.begin(), index.end(), key, less);
}

const IndexedGraph* StoreSnapshot::find(const std::string& name) const {
  if (auto it = graphs.find(name); it != graphs.end()) return it->second.get();
  if (auto a = aliases.find(name); a != aliases.end())
    if (auto it = graphs.find(a->second); it != graphs.end()) return it->second.get();
  return nullptr;
}

TripleStore::TripleStore() { publish({}, {}); }

void TripleStore::publish(std::map<std::string, std::shared_ptr<const IndexedGraph>> graphs,
                          std::map<std::string, std::string> aliases) {
  auto snap = std::make_shared<StoreSnapshot>();
  if (graphs.size() == 1) {
    snap->merged = graphs.begin()->second;
  } else {
    rdf::Graph all;
    for (const auto& [name, g] : graphs) all.insert_all(g->graph().triples());
    snap->merged = std::make_shared<const IndexedGraph>(std::move(all));
  }
  snap->graphs = std::move(graphs);
  snap->aliases = std::move(aliases);
  current_ = std::move(snap);
}

void TripleStore::load_graph(const std::string& name, rdf::Graph g) {
  g.set_name(name);
  auto indexed = std::make_shared<const IndexedGraph>(std::move(g));
  std::lock_guard lock(mu_);
  auto graphs = current_->graphs;
  graphs[name] = std::move(indexed);
  publish(std::move(graphs), current_->aliases);
}

void TripleStore::drop_graph(const std::string& name) {
  std::lock_guard lock(mu_);
  auto graphs = current_->graphs;
  graphs.erase(name);
  publish(std::move(graphs), current_->aliases);
}

void TripleStore::add_alias(const std::string& alias, const std::string& name) {
  std::lock_guard lock(mu_);
  auto aliases = current_->aliases;
  aliases[alias] = name;
  publish(current_->graphs, std::move(aliases));
}

void TripleStore::reindex() {
  std::lock_guard lock(mu_);
  std::map<std::string, std::shared_ptr<const IndexedGraph>> graphs;
  for (const auto& [name, g] : current_->graphs) graphs[name] = std::make_shared<const IndexedGraph>(g->graph());
  publish(std::move(graphs), current_->aliases);
}

std::shared_ptr<const StoreSnapshot> TripleStore::snapshot() const {
  std::lock_guard lock(mu_);
  return current_;
}

}  // namespace ekg
