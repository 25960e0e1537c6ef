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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ekg/rdf.hpp"
#include "ekg/store.hpp"

// SPARQL subset: PREFIX/BASE, SELECT (vars | * | COUNT(*)), DESCRIBE, one
// optional FROM, a WHERE block of triple patterns and FILTERs of the three
// forms below, plus ORDER BY / LIMIT / OFFSET. No OPTIONAL, UNION, paths.
namespace ekg::sparql {

using rdf::Term;

struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;
  bool operator==(const TriplePattern&) const = default;
};

/// `?v = const` or `str(?v) = const`. String constants compare lexical forms
/// (language and datatype ignored); numeric constants compare numerically.
struct EqualsFilter {
  std::string var;
  bool via_str = false;
  Term constant;
  bool operator==(const EqualsFilter&) const = default;
};

/// `regex(str(?v), "pattern", "flags")`; ECMAScript search, flag i supported.
struct RegexFilter {
  std::string var;
  bool via_str = true;
  std::string pattern;
  std::string flags;
  bool operator==(const RegexFilter&) const = default;
};

/// `year(?v) = N`; false unless ?v is an xsd:date or xsd:dateTime literal.
struct YearFilter {
  std::string var;
  long year = 0;
  bool operator==(const YearFilter&) const = default;
};

using Filter = std::variant<EqualsFilter, RegexFilter, YearFilter>;
const std::string& filter_var(const Filter& f);

enum class Form { select, describe };
enum class Projection { vars, star, count };

struct OrderKey {
  std::string var;
  bool descending = false;
  bool operator==(const OrderKey&) const = default;
};

struct Query {
  Form form = Form::select;
  std::vector<std::pair<std::string, std::string>> prefixes;
  std::string base;
  Projection projection = Projection::star;
  std::vector<std::string> vars;
  std::string count_var = "count";
  std::vector<Term> describe_targets;  // IRIs or variables
  std::optional<std::string> from;
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;
  std::vector<OrderKey> order_by;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> offset;

  bool operator==(const Query&) const = default;

  /// Variables in order of first occurrence in the patterns.
  std::vector<std::string> pattern_vars() const;
};

class QueryError : public std::runtime_error {
 public:
  QueryError(const std::string& message, std::size_t offset, std::string expected = {});
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Throws QueryError for syntax errors, unknown prefixes, unsupported query
/// forms (CONSTRUCT, ASK) and variables that no pattern binds.
Query parse_query(std::string_view text);

/// Canonical text; parse_query(print_query(q)) == q.
std::string print_query(const Query& q);

struct Solutions {
  std::vector<std::string> vars;
  std::vector<std::vector<std::optional<Term>>> rows;
};

/// Runs a SELECT. FROM naming an absent graph yields no rows; without FROM
/// the union of all graphs is queried.
Solutions evaluate(const Query& q, const StoreSnapshot& store);

/// Runs a DESCRIBE: every triple whose subject is a target IRI or a binding
/// of a target variable.
rdf::Graph describe(const Query& q, const StoreSnapshot& store);

enum class ResultFormat { json, xml, csv, html };
std::string media_type(ResultFormat f);
std::string serialize_results(const Solutions& s, ResultFormat f);

/// Lexical form for literals, the IRI string for IRIs.
std::string str(const Term& t);

}  // namespace ekg::sparql
