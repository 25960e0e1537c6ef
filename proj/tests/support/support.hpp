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

// Fixtures, generators and independent oracles shared by the unit tests and
// the acceptance runner. Oracles here deliberately avoid the library's own
// indexes, parsers and voting code.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "ekg/rdf.hpp"
#include "ekg/sparql.hpp"

namespace ekg::testing {

inline std::string fixture_path(const std::string& rel) { return std::string(EKG_FIXTURES) + "/" + rel; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_fixture(const std::string& rel) { return read_text(fixture_path(rel)); }

// ---------------------------------------------------------------- graphs

inline const std::string kTestNs = "http://example.org/t/";

struct GraphShape {
  int subjects = 20;
  int predicates = 6;
  int literals = 25;
  bool awkward_strings = false;  // quotes, newlines, unicode, markup
};

inline rdf::Term random_literal(std::mt19937_64& rng, const GraphShape& shape) {
  std::uniform_int_distribution<int> kind(0, 5), pick(0, shape.literals - 1);
  int i = pick(rng);
  switch (kind(rng)) {
    case 0: return rdf::Term::literal(std::to_string(i));
    case 1: {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", 2010 + i % 8, 1 + i % 12, 1 + i % 28);
      return rdf::Term::literal(buf, rdf::vocab::xsd_date());
    }
    case 2: return rdf::Term::literal("label " + std::to_string(i), {}, i % 2 ? "en" : "fr");
    case 3: return rdf::Term::literal(std::to_string(i), rdf::vocab::xsd_integer());
    default: {
      static const char* words[] = {"Nipah Virus", "nipah", "Italy", "MERS-CoV", "Avian influenza", "Cholera",
                                    "Zika virus", "Ebola"};
      std::string w = words[i % 8];
      if (shape.awkward_strings) {
        static const char* odd[] = {"say \"hi\"", "line\nbreak", "tab\there", "back\\slash", "caf\xC3\xA9",
                                    "<b>&amp;</b>", "\xE2\x80\x9Cquoted\xE2\x80\x9D", "trailing space ", "cr\rlf"};
        if (i % 3 == 0) w = odd[i % 9];
      }
      return rdf::Term::literal(w);
    }
  }
}

inline rdf::Graph random_graph(std::mt19937_64& rng, std::size_t n, const GraphShape& shape = {}) {
  rdf::Graph g;
  std::uniform_int_distribution<int> s(0, shape.subjects - 1), p(0, shape.predicates - 1), obj_kind(0, 2);
  std::size_t guard = 0;
  while (g.size() < n && guard++ < n * 20) {
    rdf::Term subject = rdf::Term::iri(kTestNs + "s" + std::to_string(s(rng)));
    rdf::Term predicate = rdf::Term::iri(kTestNs + "p" + std::to_string(p(rng)));
    rdf::Term object = obj_kind(rng) == 0 ? rdf::Term::iri(kTestNs + "s" + std::to_string(s(rng)))
                                          : random_literal(rng, shape);
    g.insert({subject, predicate, object});
  }
  return g;
}

// ---------------------------------------------------------------- SPARQL oracle

using Row = std::vector<std::optional<rdf::Term>>;

// Filter semantics restated: string constants compare lexical forms, numeric
// constants compare by value, year() needs an xsd:date(Time) literal, regex
// is a search over the lexical form or IRI string.
inline bool oracle_filter(const sparql::Filter& f, const rdf::Term& v) {
  const std::string xsd(rdf::vocab::xsd);
  if (auto e = std::get_if<sparql::EqualsFilter>(&f)) {
    const rdf::Term& c = e->constant;
    if (c.is_iri()) return e->via_str ? v.value == c.value : (v.is_iri() && v.value == c.value);
    if (!e->via_str && !v.is_literal()) return false;
    if (c.datatype == xsd + "integer" || c.datatype == xsd + "decimal" || c.datatype == xsd + "double") {
      static const std::regex num(R"([+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)");
      if (!std::regex_match(v.value, num) || !std::regex_match(c.value, num)) return false;
      return std::stod(v.value) == std::stod(c.value);
    }
    return v.value == c.value;
  }
  if (auto r = std::get_if<sparql::RegexFilter>(&f)) {
    if (!r->via_str && !v.is_literal()) return false;
    auto flags = std::regex::ECMAScript;
    if (r->flags.find('i') != std::string::npos) flags |= std::regex::icase;
    return std::regex_search(v.value, std::regex(r->pattern, flags));
  }
  const auto& y = std::get<sparql::YearFilter>(f);
  if (!v.is_literal() || (v.datatype != xsd + "date" && v.datatype != xsd + "dateTime")) return false;
  static const std::regex date(R"((-?\d{4,})-.*)");
  std::smatch m;
  if (!std::regex_match(v.value, m, date)) return false;
  return std::stol(m[1].str()) == y.year;
}

// Every combination of triples, one per pattern, checked against the
// bindings so far; no indexes, no join ordering. Returns full rows over
// q.pattern_vars(), or nullopt once more than `cap` solutions exist.
inline std::optional<std::vector<Row>> brute_force_solutions(const sparql::Query& q, const rdf::Graph& g,
                                                              std::size_t cap = SIZE_MAX) {
  std::vector<std::string> vars = q.pattern_vars();
  auto slot = [&](const std::string& v) {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
  };
  std::vector<rdf::Triple> triples(g.triples().begin(), g.triples().end());
  std::vector<Row> solutions;
  Row current(vars.size());
  bool overflow = false;

  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (overflow) return;
    if (i == q.patterns.size()) {
      for (const auto& f : q.filters)
        if (!oracle_filter(f, *current[slot(sparql::filter_var(f))])) return;
      solutions.push_back(current);
      overflow = solutions.size() > cap;
      return;
    }
    const auto& pat = q.patterns[i];
    const rdf::Term* want[3] = {&pat.subject, &pat.predicate, &pat.object};
    for (const auto& t : triples) {
      const rdf::Term* got[3] = {&t.subject, &t.predicate, &t.object};
      std::size_t fresh[3];
      int nfresh = 0;
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        if (!want[k]->is_variable()) {
          ok = *want[k] == *got[k];
        } else {
          auto& cell = current[slot(want[k]->value)];
          if (!cell) {
            cell = *got[k];
            fresh[nfresh++] = slot(want[k]->value);
          } else {
            ok = *cell == *got[k];
          }
        }
      }
      if (ok) step(i + 1);
      for (int k = 0; k < nfresh; ++k) current[fresh[k]].reset();
    }
  };
  step(0);
  if (overflow) return std::nullopt;
  return solutions;
}

inline std::vector<Row> project(const sparql::Query& q, const std::vector<Row>& solutions) {
  if (q.projection == sparql::Projection::count)
    return {Row{rdf::Term::literal(std::to_string(solutions.size()), rdf::vocab::xsd_integer())}};
  if (q.projection == sparql::Projection::star) return solutions;
  std::vector<std::string> vars = q.pattern_vars();
  std::vector<Row> projected;
  for (const auto& s : solutions) {
    Row r;
    for (const auto& v : q.vars) r.push_back(s[std::find(vars.begin(), vars.end(), v) - vars.begin()]);
    projected.push_back(std::move(r));
  }
  return projected;
}

inline std::vector<Row> brute_force_select(const sparql::Query& q, const rdf::Graph& g) {
  return project(q, *brute_force_solutions(q, g));
}

inline std::vector<Row> sorted_rows(std::vector<Row> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

// ---------------------------------------------------------------- RDF/XML reader

// Reads the RDF/XML profile the serializer uses (typed node elements,
// property elements with rdf:resource or text) with boost::property_tree,
// resolving qualified names from the xmlns declarations in scope.
inline rdf::Graph read_rdfxml(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  std::istringstream in(text);
  pt::read_xml(in, doc);
  const std::string RDF(rdf::vocab::rdf);

  using Ns = std::map<std::string, std::string>;
  auto declare = [](Ns ns, const pt::ptree& node) {
    if (auto attrs = node.get_child_optional("<xmlattr>"))
      for (const auto& [k, v] : *attrs) {
        if (k == "xmlns") ns[""] = v.data();
        else if (k.rfind("xmlns:", 0) == 0) ns[k.substr(6)] = v.data();
      }
    return ns;
  };
  auto expand = [](const Ns& ns, const std::string& qname) {
    auto colon = qname.find(':');
    std::string prefix = colon == std::string::npos ? "" : qname.substr(0, colon);
    std::string local = colon == std::string::npos ? qname : qname.substr(colon + 1);
    auto it = ns.find(prefix);
    if (it == ns.end()) throw std::runtime_error("undeclared prefix in " + qname);
    return it->second + local;
  };
  auto attr = [](const pt::ptree& node, const std::string& name) -> std::optional<std::string> {
    if (auto v = node.get_optional<std::string>("<xmlattr>." + name)) return *v;
    return std::nullopt;
  };

  rdf::Graph g;
  const pt::ptree& root = doc.get_child("rdf:RDF");
  Ns root_ns = declare(Ns{{"xml", std::string(rdf::vocab::xml)}}, root);
  std::string base = attr(root, "xml:base").value_or("");
  auto resolve = [&](const std::string& iri) { return rdf::is_absolute_iri(iri) ? iri : base + iri; };
  for (const auto& [name, node] : root) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    Ns ns = declare(root_ns, node);
    auto about = attr(node, "rdf:about");
    if (!about) throw std::runtime_error("node element without rdf:about");
    rdf::Term subject = rdf::Term::iri(resolve(*about));
    if (expand(ns, name) != RDF + "Description")
      g.insert({subject, rdf::Term::iri(RDF + "type"), rdf::Term::iri(expand(ns, name))});
    for (const auto& [pname, pnode] : node) {
      if (pname == "<xmlattr>" || pname == "<xmlcomment>") continue;
      Ns pns = declare(ns, pnode);
      rdf::Term predicate = rdf::Term::iri(expand(pns, pname));
      if (auto res = attr(pnode, "rdf:resource")) {
        g.insert({subject, predicate, rdf::Term::iri(resolve(*res))});
      } else {
        g.insert({subject, predicate,
                  rdf::Term::literal(pnode.data(), attr(pnode, "rdf:datatype").value_or(""),
                                     attr(pnode, "xml:lang").value_or(""))});
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------- voting oracle

// Counts votes per key; absents win only with strictly more votes than every
// present key, otherwise the earliest voter holding a top key wins.
template <class T, class KeyFn>
std::optional<std::size_t> tally_winner(const std::vector<std::optional<T>>& values, KeyFn key) {
  std::map<std::string, int> votes;
  int absent = 0;
  for (const auto& v : values) v ? ++votes[key(*v)] : ++absent;
  int top = 0;
  for (const auto& [k, n] : votes) top = std::max(top, n);
  if (votes.empty() || absent > top) return std::nullopt;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] && votes[key(*values[i])] == top) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------- clustering oracle

// Connected components by repeated flooding over an explicit adjacency
// matrix; returns sets of distinct surface forms.
inline std::set<std::set<std::string>> brute_components(const std::vector<std::string>& terms,
                                                        const std::function<bool(const std::string&,
                                                                                 const std::string&)>& related) {
  std::vector<std::string> uniq;
  for (const auto& t : terms)
    if (std::find(uniq.begin(), uniq.end(), t) == uniq.end()) uniq.push_back(t);
  const std::size_t n = uniq.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = i == j || related(uniq[i], uniq[j]) || related(uniq[j], uniq[i]);
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = next;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (comp[a] == next && comp[b] < 0 && adj[a][b]) comp[b] = next, grew = true;
    }
    ++next;
  }
  std::vector<std::set<std::string>> out(next);
  for (std::size_t i = 0; i < n; ++i) out[comp[i]].insert(uniq[i]);
  return {out.begin(), out.end()};
}

// Most frequent surface form in the input list, ties lexicographic.
inline std::string expected_canonical(const std::set<std::string>& cluster, const std::vector<std::string>& terms) {
  std::string best;
  long best_n = -1;
  for (const auto& m : cluster) {
    long n = std::count(terms.begin(), terms.end(), m);
    if (n > best_n) best = m, best_n = n;  // set order gives the lexicographic tie break
  }
  return best;
}

}  // namespace ekg::testing
