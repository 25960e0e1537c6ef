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

#include "ekg/rdfxml.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <vector>

namespace ekg::rdf {
namespace {

std::string xml_escape(std::string_view s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      case '\r': out += "&#13;"; break;
      case '\n': out += attribute ? "&#10;" : "\n"; break;
      case '\t': out += attribute ? "&#9;" : "\t"; break;
      default:
        if (u < 0x20) throw std::invalid_argument("rdf/xml: control character in literal");
        out += c;
    }
  }
  return out;
}

bool ncname_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ncname_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

// Splits an IRI into namespace and an NCName local part.
std::pair<std::string, std::string> split_qname(const std::string& iri) {
  std::size_t i = iri.size();
  while (i > 0 && ncname_char(iri[i - 1])) --i;
  while (i < iri.size() && !ncname_start(iri[i])) ++i;
  if (i == iri.size() || i == 0) throw std::invalid_argument("rdf/xml: cannot abbreviate predicate " + iri);
  return {iri.substr(0, i), iri.substr(i)};
}

}  // namespace

std::string serialize_rdfxml(const Graph& g, std::string_view base_iri) {
  const std::string base(base_iri);
  std::vector<std::pair<std::string, std::string>> ns = {
      {"owl", std::string(vocab::owl)},     {"rdf", std::string(vocab::rdf)},
      {"xml", std::string(vocab::xml)},     {"rdfs", std::string(vocab::rdfs)},
      {"xsd", std::string(vocab::xsd)},     {"skos", std::string(vocab::skos)},
      {"obo", std::string(vocab::obo)},     {"dcterms", std::string(vocab::dcterms)}};

  std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<rdf:RDF\n";
  out += "    xmlns=\"" + xml_escape(base, true) + "\"\n";
  out += "    xml:base=\"" + xml_escape(base, true) + "\"";
  for (const auto& [p, uri] : ns) out += "\n    xmlns:" + p + "=\"" + uri + "\"";
  out += ">\n";

  const Term type = Term::iri(vocab::rdf_type());
  const Term owl_class = Term::iri(vocab::owl_class());

  std::map<Term, std::vector<const Triple*>> by_subject;
  for (const auto& t : g.triples()) by_subject[t.subject].push_back(&t);

  for (const auto& [subject, triples] : by_subject) {
    bool is_class = false;
    for (const auto* t : triples)
      if (t->predicate == type && t->object == owl_class) is_class = true;
    const std::string element = is_class ? "owl:Class" : "rdf:Description";
    out += "  <" + element + " rdf:about=\"" + xml_escape(subject.value, true) + "\">\n";
    for (const auto* t : triples) {
      if (is_class && t->predicate == type && t->object == owl_class) continue;
      auto [space, local] = split_qname(t->predicate.value);
      std::string name, decl;
      if (space == base) {
        name = local;
      } else {
        for (const auto& [p, uri] : ns)
          if (uri == space && p != "xml") name = p + ":" + local;
        if (name.empty()) {
          name = "ns0:" + local;
          decl = " xmlns:ns0=\"" + xml_escape(space, true) + "\"";
        }
      }
      out += "    <" + name + decl;
      if (t->object.is_iri()) {
        out += " rdf:resource=\"" + xml_escape(t->object.value, true) + "\"/>\n";
        continue;
      }
      if (!t->object.language.empty()) out += " xml:lang=\"" + xml_escape(t->object.language, true) + "\"";
      else if (!t->object.datatype.empty())
        out += " rdf:datatype=\"" + xml_escape(t->object.datatype, true) + "\"";
      out += ">" + xml_escape(t->object.value, false) + "</" + name + ">\n";
    }
    out += "  </" + element + ">\n";
  }
  out += "</rdf:RDF>\n";
  return out;
}

}  // namespace ekg::rdf
