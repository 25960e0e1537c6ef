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

#include <compare>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ekg::rdf {

namespace vocab {
inline constexpr std::string_view ekg = "http://data.jrc.ec.europa.eu/dataset/89056048-7f5d-4d7c-96ad-f99d1c0f6601/";
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view xml = "http://www.w3.org/XML/1998/namespace";
inline constexpr std::string_view obo = "http://purl.obolibrary.org/obo/";
inline constexpr std::string_view dcterms = "http://purl.org/dc/terms/";
inline constexpr std::string_view dc = "http://purl.org/dc/elements/1.1/";
inline constexpr std::string_view skos = "http://www.w3.org/2004/02/skos/core#";

inline std::string rdf_type() { return std::string(rdf) + "type"; }
inline std::string rdfs_label() { return std::string(rdfs) + "label"; }
inline std::string rdfs_subclass_of() { return std::string(rdfs) + "subClassOf"; }
inline std::string owl_class() { return std::string(owl) + "Class"; }
inline std::string xsd_date() { return std::string(xsd) + "date"; }
inline std::string xsd_integer() { return std::string(xsd) + "integer"; }
}  // namespace vocab

/// Prefix bindings written by the serializers, in output order.
const std::vector<std::pair<std::string, std::string>>& standard_prefixes();

struct Term {
  enum class Kind : unsigned char { iri, literal, variable };

  Kind kind = Kind::iri;
  std::string value;
  std::string datatype;  // literals only; empty = plain
  std::string language;  // literals only

  static Term iri(std::string v) { return {Kind::iri, std::move(v), {}, {}}; }
  static Term literal(std::string v, std::string datatype = {}, std::string language = {}) {
    return {Kind::literal, std::move(v), std::move(datatype), std::move(language)};
  }
  static Term variable(std::string name) { return {Kind::variable, std::move(name), {}, {}}; }

  bool is_iri() const { return kind == Kind::iri; }
  bool is_literal() const { return kind == Kind::literal; }
  bool is_variable() const { return kind == Kind::variable; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

/// Named set of triples. Subjects and predicates must be IRIs.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Returns false for a duplicate. Throws std::invalid_argument when the
  /// triple is not ground data (non-IRI subject or predicate, variables).
  bool insert(Triple t);
  template <class Range>
  void insert_all(const Range& triples) {
    for (const auto& t : triples) insert(t);
  }

  const std::set<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  bool contains(const Triple& t) const { return triples_.count(t) > 0; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.triples_ == b.triples_; }

 private:
  std::string name_;
  std::set<Triple> triples_;
};

/// Absolute IRI: a scheme followed by ':' and no whitespace or `<>"{}|^`\` characters.
bool is_absolute_iri(std::string_view s);

/// One `<s> <p> <o> .` line per triple, sorted.
std::string serialize_ntriples(const Graph& g);

/// Escapes a literal lexical form for Turtle/N-Triples double-quoted strings.
std::string escape_string_literal(std::string_view s);

}  // namespace ekg::rdf
