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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ekg {

enum class FieldKind { disease, country };

std::string_view to_string(FieldKind kind);
FieldKind field_kind_from_string(std::string_view s);

struct SimilarityConfig {
  double semantic_threshold = 0.8;
  FieldKind field_kind = FieldKind::disease;
};

/// Case-folded, "&" spelled out, punctuation `(),.-/` dropped, tokens sorted.
/// "Florida, USA" and "USA (Florida)" share the form "florida usa".
std::string normalize_term(std::string_view term);

bool syntactic_equivalent(std::string_view a, std::string_view b);

/// Lexical database role: term -> synset ids. Unknown terms have no synsets.
class SynonymLexicon {
 public:
  virtual ~SynonymLexicon() = default;
  virtual std::set<std::string> synsets(std::string_view term) const = 0;
};

/// Lexicon backed by an explicit table, matched on normalize_term.
class TableLexicon : public SynonymLexicon {
 public:
  TableLexicon() = default;

  /// `{"synsets": {"<id>": ["term", ...], ...}}`
  static TableLexicon from_json(std::string_view json_text);

  void add(const std::string& synset_id, std::string_view term);
  std::set<std::string> synsets(std::string_view term) const override;

 private:
  std::unordered_map<std::string, std::set<std::string>> by_term_;
};

/// The small lexicon shipped with the pipeline (common outbreak synonyms).
const TableLexicon& builtin_lexicon();

bool lexicon_synonym(std::string_view a, std::string_view b, const SynonymLexicon& lex);

/// Sentence-embedding role. embed() must be deterministic with a fixed dimension.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Offline default: hashed character trigrams of the normalized term.
class TrigramEmbedding : public EmbeddingProvider {
 public:
  explicit TrigramEmbedding(std::size_t dim = 256) : dim_(dim) {}
  std::size_t dimension() const override { return dim_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  std::size_t dim_;
};

/// dot(u,v)/(|u||v|). Throws std::invalid_argument on a dimension mismatch or
/// a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

/// cosine(embed(a), embed(b)) > threshold. Provider errors count as "not similar".
bool semantic_similar(std::string_view a, std::string_view b, const EmbeddingProvider& provider,
                      const SimilarityConfig& cfg);

/// Partition of observed surface forms into synonym clusters.
class SynonymDictionary {
 public:
  SynonymDictionary() = default;
  SynonymDictionary(FieldKind kind, std::vector<std::vector<std::string>> clusters,
                    std::vector<std::string> canonical);

  FieldKind field_kind() const { return kind_; }
  const std::vector<std::vector<std::string>>& clusters() const { return clusters_; }
  const std::vector<std::string>& canonical() const { return canonical_; }
  std::size_t size() const { return clusters_.size(); }

  /// Exact member match first, then a member with the same normal form.
  std::optional<std::size_t> cluster_of(std::string_view term) const;

  /// Canonical form of the term's cluster; the term itself when unknown.
  std::string canonical_of(std::string_view term) const;

  bool same_cluster(std::string_view a, std::string_view b) const;

  /// `{"field_kind", "clusters": [[...]], "canonical": [...]}`
  std::string to_json() const;
  static SynonymDictionary from_json(std::string_view json_text);

 private:
  void index();

  FieldKind kind_ = FieldKind::disease;
  std::vector<std::vector<std::string>> clusters_;
  std::vector<std::string> canonical_;
  std::unordered_map<std::string, std::size_t> by_term_;
  std::unordered_map<std::string, std::size_t> by_normal_form_;
};

/// Connected components of syntactic ∨ lexicon ∨ semantic over the distinct
/// terms. `terms` may repeat; the most frequent surface form of each cluster
/// becomes canonical, ties broken lexicographically. Null lexicon or
/// provider disables that check.
SynonymDictionary build_synonym_dictionary(const std::vector<std::string>& terms,
                                           const SynonymLexicon* lexicon,
                                           const EmbeddingProvider* provider,
                                           const SimilarityConfig& cfg);

/// Disease and country dictionaries used together by voting and scoring.
struct SynonymDictionaries {
  SynonymDictionary disease{FieldKind::disease, {}, {}};
  SynonymDictionary country{FieldKind::country, {}, {}};
};

}  // namespace ekg
