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

#include "ekg/synonyms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ekg/log.hpp"
#include "ekg/simd/kernels.hpp"
#include "ekg/union_find.hpp"
#include "json.hpp"

namespace ekg {

std::string_view to_string(FieldKind kind) { return kind == FieldKind::disease ? "disease" : "country"; }

FieldKind field_kind_from_string(std::string_view s) {
  if (s == "disease") return FieldKind::disease;
  if (s == "country") return FieldKind::country;
  throw std::invalid_argument("unknown field kind: " + std::string(s));
}

std::string normalize_term(std::string_view term) {
  std::string spaced;
  spaced.reserve(term.size() + 8);
  for (char c : term) {
    switch (c) {
      case '&': spaced += " and "; break;
      case '(': case ')': case ',': case '.': case '-': case '/':
        spaced += ' ';
        break;
      default:
        spaced += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  std::vector<std::string> tokens;
  std::istringstream in(spaced);
  for (std::string tok; in >> tok;) tokens.push_back(std::move(tok));
  std::sort(tokens.begin(), tokens.end());
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool syntactic_equivalent(std::string_view a, std::string_view b) {
  return normalize_term(a) == normalize_term(b);
}

TableLexicon TableLexicon::from_json(std::string_view json_text) {
  auto doc = nlohmann::json::parse(json_text);
  TableLexicon lex;
  for (const auto& [id, terms] : doc.at("synsets").items())
    for (const auto& t : terms) lex.add(id, t.get<std::string>());
  return lex;
}

void TableLexicon::add(const std::string& synset_id, std::string_view term) {
  by_term_[normalize_term(term)].insert(synset_id);
}

std::set<std::string> TableLexicon::synsets(std::string_view term) const {
  auto it = by_term_.find(normalize_term(term));
  return it == by_term_.end() ? std::set<std::string>{} : it->second;
}

const TableLexicon& builtin_lexicon() {
  static const TableLexicon lex = [] {
    TableLexicon l;
    const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
        {"influenza.n.01", {"influenza", "flu", "grippe"}},
        {"avian_influenza.n.01", {"avian influenza", "bird flu", "avian flu"}},
        {"dengue.n.01", {"dengue", "dengue fever", "breakbone fever"}},
        {"mers.n.01",
         {"MERS", "MERS-CoV", "MERSCoV", "Middle East respiratory syndrome",
          "Middle East respiratory syndrome coronavirus"}},
        {"sars.n.01", {"SARS", "severe acute respiratory syndrome"}},
        {"ebola.n.01", {"Ebola", "Ebola virus disease", "EVD", "Ebola haemorrhagic fever",
                        "Ebola hemorrhagic fever"}},
        {"yellow_fever.n.01", {"yellow fever", "yellow jack"}},
        {"viet_nam.n.01", {"Viet Nam", "Vietnam"}},
        {"congo_drc.n.01",
         {"Democratic Republic of the Congo", "Democratic Republic of Congo", "DRC", "DR Congo"}},
        {"united_states.n.01", {"United States", "United States of America", "USA", "US"}},
        {"united_kingdom.n.01", {"United Kingdom", "UK", "Great Britain"}},
        {"tanzania.n.01", {"United Republic of Tanzania", "Tanzania"}},
        {"netherlands.n.01", {"The Netherlands", "Netherlands", "Holland"}},
    };
    for (const auto& [id, terms] : table)
      for (const auto& t : terms) l.add(id, t);
    return l;
  }();
  return lex;
}

bool lexicon_synonym(std::string_view a, std::string_view b, const SynonymLexicon& lex) {
  auto sa = lex.synsets(a);
  if (sa.empty()) return false;
  for (const auto& id : lex.synsets(b))
    if (sa.count(id)) return true;
  return false;
}

std::vector<double> TrigramEmbedding::embed(std::string_view text) const {
  std::vector<double> v(dim_, 0.0);
  auto norm = normalize_term(text);
  if (norm.empty()) return v;
  std::string padded = "#" + norm + "#";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (std::size_t k = i; k < i + 3; ++k) {
      h ^= static_cast<unsigned char>(padded[k]);
      h *= 1099511628211ULL;
    }
    v[h % dim_] += 1.0;
  }
  return v;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double uu = simd::dot(u, u), vv = simd::dot(v, v);
  if (uu == 0.0 || vv == 0.0) throw std::invalid_argument("cosine: zero vector");
  double c = simd::dot(u, v) / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

bool semantic_similar(std::string_view a, std::string_view b, const EmbeddingProvider& provider,
                      const SimilarityConfig& cfg) {
  try {
    auto ea = provider.embed(a);
    auto eb = provider.embed(b);
    return cosine(ea, eb) > cfg.semantic_threshold;
  } catch (const std::exception& e) {
    log_warning("semantic similarity failed for '" + std::string(a) + "' / '" + std::string(b) +
                "': " + e.what());
    return false;
  }
}

SynonymDictionary::SynonymDictionary(FieldKind kind, std::vector<std::vector<std::string>> clusters,
                                     std::vector<std::string> canonical)
    : kind_(kind), clusters_(std::move(clusters)), canonical_(std::move(canonical)) {
  if (clusters_.size() != canonical_.size())
    throw std::invalid_argument("synonym dictionary: clusters and canonical differ in length");
  index();
}

void SynonymDictionary::index() {
  by_term_.clear();
  by_normal_form_.clear();
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    if (std::find(clusters_[c].begin(), clusters_[c].end(), canonical_[c]) == clusters_[c].end())
      throw std::invalid_argument("synonym dictionary: canonical '" + canonical_[c] +
                                  "' is not a member of its cluster");
    for (const auto& t : clusters_[c]) {
      if (!by_term_.emplace(t, c).second)
        throw std::invalid_argument("synonym dictionary: term '" + t + "' in two clusters");
      by_normal_form_.emplace(normalize_term(t), c);
    }
  }
}

std::optional<std::size_t> SynonymDictionary::cluster_of(std::string_view term) const {
  if (auto it = by_term_.find(std::string(term)); it != by_term_.end()) return it->second;
  if (auto it = by_normal_form_.find(normalize_term(term)); it != by_normal_form_.end()) return it->second;
  return std::nullopt;
}

std::string SynonymDictionary::canonical_of(std::string_view term) const {
  auto c = cluster_of(term);
  return c ? canonical_[*c] : std::string(term);
}

bool SynonymDictionary::same_cluster(std::string_view a, std::string_view b) const {
  if (a == b) return true;
  auto ca = cluster_of(a), cb = cluster_of(b);
  if (ca && cb) return *ca == *cb;
  return normalize_term(a) == normalize_term(b);
}

std::string SynonymDictionary::to_json() const {
  nlohmann::json doc = {{"field_kind", std::string(to_string(kind_))},
                        {"clusters", clusters_},
                        {"canonical", canonical_}};
  return doc.dump(2);
}

SynonymDictionary SynonymDictionary::from_json(std::string_view json_text) {
  auto doc = nlohmann::json::parse(json_text);
  return SynonymDictionary(field_kind_from_string(doc.at("field_kind").get<std::string>()),
                           doc.at("clusters").get<std::vector<std::vector<std::string>>>(),
                           doc.at("canonical").get<std::vector<std::string>>());
}

SynonymDictionary build_synonym_dictionary(const std::vector<std::string>& terms,
                                           const SynonymLexicon* lexicon,
                                           const EmbeddingProvider* provider,
                                           const SimilarityConfig& cfg) {
  std::map<std::string, std::size_t> freq;
  for (const auto& t : terms) ++freq[t];
  std::vector<std::string> unique;
  unique.reserve(freq.size());
  for (const auto& [t, n] : freq) unique.push_back(t);
  const std::size_t n = unique.size();
  UnionFind uf(n);

  std::unordered_map<std::string, std::size_t> first_by_form;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = first_by_form.emplace(normalize_term(unique[i]), i);
    if (!fresh) uf.unite(it->second, i);
  }

  if (lexicon) {
    std::unordered_map<std::string, std::size_t> first_by_synset;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& id : lexicon->synsets(unique[i])) {
        auto [it, fresh] = first_by_synset.emplace(id, i);
        if (!fresh) uf.unite(it->second, i);
      }
  }

  if (provider && n > 1) {
    // Unit-normalize once so each pair costs one dot product.
    std::vector<std::vector<double>> unit(n);
    for (std::size_t i = 0; i < n; ++i) {
      try {
        auto e = provider->embed(unique[i]);
        double len = std::sqrt(simd::dot(e, e));
        if (len > 0.0) {
          for (auto& x : e) x /= len;
          unit[i] = std::move(e);
        }
      } catch (const std::exception& ex) {
        log_warning("embedding failed for '" + unique[i] + "': " + ex.what());
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (unit[i].empty()) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (unit[j].size() != unit[i].size() || uf.connected(i, j)) continue;
        if (simd::dot(unit[i], unit[j]) > cfg.semantic_threshold) uf.unite(i, j);
      }
    }
  }

  std::map<std::size_t, std::vector<std::string>> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[uf.find(i)].push_back(unique[i]);
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (auto& [root, members] : by_root) {
    std::string best = members.front();
    for (const auto& m : members)
      if (freq[m] > freq[best] || (freq[m] == freq[best] && m < best)) best = m;
    out.emplace_back(best, std::move(members));
  }
  std::sort(out.begin(), out.end());
  std::vector<std::vector<std::string>> clusters;
  std::vector<std::string> canonical;
  for (auto& [c, members] : out) {
    canonical.push_back(std::move(c));
    clusters.push_back(std::move(members));
  }
  return SynonymDictionary(cfg.field_kind, std::move(clusters), std::move(canonical));
}

}  // namespace ekg
