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

#include "ekg/rdf.hpp"

#include <cctype>
#include <cstdio>

namespace ekg::rdf {

const std::vector<std::pair<std::string, std::string>>& standard_prefixes() {
  static const std::vector<std::pair<std::string, std::string>> prefixes = {
      {"eKG", std::string(vocab::ekg)},     {"rdf", std::string(vocab::rdf)},
      {"rdfs", std::string(vocab::rdfs)},   {"owl", std::string(vocab::owl)},
      {"xsd", std::string(vocab::xsd)},     {"obo", std::string(vocab::obo)},
      {"dcterms", std::string(vocab::dcterms)}, {"dc", std::string(vocab::dc)},
      {"skos", std::string(vocab::skos)}};
  return prefixes;
}

bool Graph::insert(Triple t) {
  if (!t.subject.is_iri() || !t.predicate.is_iri() || t.object.is_variable())
    throw std::invalid_argument("graph triples need IRI subject/predicate and a ground object");
  if (!t.object.is_literal() && (!t.object.datatype.empty() || !t.object.language.empty()))
    throw std::invalid_argument("datatype or language on a non-literal term");
  return triples_.insert(std::move(t)).second;
}

bool is_absolute_iri(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == s.size()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = s[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20) return false;
    switch (c) {
      case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
        return false;
      default:
        break;
    }
  }
  return true;
}

std::string escape_string_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace {

std::string nt_term(const Term& t) {
  if (t.is_iri()) return "<" + t.value + ">";
  std::string out = "\"" + escape_string_literal(t.value) + "\"";
  if (!t.language.empty()) out += "@" + t.language;
  else if (!t.datatype.empty()) out += "^^<" + t.datatype + ">";
  return out;
}

}  // namespace

std::string serialize_ntriples(const Graph& g) {
  std::string out;
  for (const auto& t : g.triples())
    out += nt_term(t.subject) + " " + nt_term(t.predicate) + " " + nt_term(t.object) + " .\n";
  return out;
}

}  // namespace ekg::rdf
