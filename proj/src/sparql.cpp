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

#include "ekg/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <map>
#include <regex>
#include <set>

#include "ekg/csv.hpp"
#include "json.hpp"

namespace ekg::sparql {

namespace {

enum class Tok { iri, pname, var, string, number, word, punct, langtag, dtype, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;      // decoded value; pname keeps "prefix:local"
  std::size_t offset = 0;
  std::string datatype;  // numbers
  std::size_t colon = 0; // pname split point
};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (c & 0x80); }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || (c & 0x80);
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string xsd(const char* local) { return std::string(rdf::vocab::xsd) + local; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto error = [&](const std::string& msg, std::size_t at, const std::string& expected = {}) {
    throw QueryError(msg, at, expected);
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.offset = i;
    if (c == '<') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '>' && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '<') ++j;
      if (j >= s.size() || s[j] != '>') error("unterminated IRI", i, "'>'");
      t.kind = Tok::iri;
      t.text = std::string(s.substr(i + 1, j - i - 1));
      i = j + 1;
    } else if (c == '?' || c == '$') {
      std::size_t j = i + 1;
      while (j < s.size() && (is_name_char(s[j]) && s[j] != '-')) ++j;
      if (j == i + 1) error("empty variable name", i, "variable name");
      t.kind = Tok::var;
      t.text = std::string(s.substr(i + 1, j - i - 1));
      i = j;
    } else if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      std::string v;
      for (;;) {
        if (j >= s.size() || s[j] == '\n' || s[j] == '\r') error("unterminated string", i, std::string(1, c));
        char d = s[j];
        if (d == c) break;
        if (d != '\\') {
          v += d;
          ++j;
          continue;
        }
        if (j + 1 >= s.size()) error("unterminated string", i, std::string(1, c));
        char e = s[j + 1];
        j += 2;
        switch (e) {
          case 't': v += '\t'; break;
          case 'n': v += '\n'; break;
          case 'r': v += '\r'; break;
          case 'b': v += '\b'; break;
          case 'f': v += '\f'; break;
          case '"': v += '"'; break;
          case '\'': v += '\''; break;
          case '\\': v += '\\'; break;
          case 'u':
          case 'U': {
            std::size_t n = e == 'u' ? 4 : 8;
            if (j + n > s.size()) error("bad escape", j - 2, "hex digits");
            std::string hex(s.substr(j, n));
            if (!std::all_of(hex.begin(), hex.end(), [](char h) { return std::isxdigit(static_cast<unsigned char>(h)); }))
              error("bad escape", j - 2, "hex digits");
            append_utf8(v, std::strtoul(hex.c_str(), nullptr, 16));
            j += n;
            break;
          }
          default:
            error("bad escape", j - 2, "escape sequence");
        }
      }
      t.kind = Tok::string;
      t.text = std::move(v);
      i = j + 1;
    } else if (c == '@') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '-')) ++j;
      if (j == i + 1) error("empty language tag", i, "language tag");
      t.kind = Tok::langtag;
      t.text = std::string(s.substr(i + 1, j - i - 1));
      i = j;
    } else if (c == '^' && i + 1 < s.size() && s[i + 1] == '^') {
      t.kind = Tok::dtype;
      t.text = "^^";
      i += 2;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               ((c == '+' || c == '-' || c == '.') && i + 1 < s.size() &&
                std::isdigit(static_cast<unsigned char>(s[i + 1]))) ||
               ((c == '+' || c == '-') && i + 2 < s.size() && s[i + 1] == '.' &&
                std::isdigit(static_cast<unsigned char>(s[i + 2])))) {
      std::size_t j = i;
      if (s[j] == '+' || s[j] == '-') ++j;
      auto digits = [&] {
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      };
      digits();
      t.datatype = xsd("integer");
      if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        digits();
        t.datatype = xsd("decimal");
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          j = k;
          digits();
          t.datatype = xsd("double");
        }
      }
      t.kind = Tok::number;
      t.text = std::string(s.substr(i, j - i));
      i = j;
    } else if (is_name_start(c) || c == ':') {
      std::size_t j = i;
      while (j < s.size() && (is_name_char(s[j]) || s[j] == '.')) ++j;
      while (j > i && s[j - 1] == '.') --j;
      if (j < s.size() && s[j] == ':') {
        t.kind = Tok::pname;
        t.colon = j - i;
        std::size_t k = j + 1;
        while (k < s.size() && (is_name_char(s[k]) || s[k] == '.' || s[k] == ':' || s[k] == '%')) ++k;
        while (k > j + 1 && s[k - 1] == '.') --k;
        t.text = std::string(s.substr(i, k - i));
        i = k;
      } else {
        t.kind = Tok::word;
        t.text = std::string(s.substr(i, j - i));
        i = j;
      }
    } else if (std::string_view("{}().,;=*").find(c) != std::string_view::npos) {
      t.kind = Tok::punct;
      t.text = std::string(1, c);
      ++i;
    } else {
      error(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.offset = s.size();
  out.push_back(end);
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Query run() {
    prologue();
    const Token& t = peek();
    if (is_word(t, "SELECT")) {
      next();
      select_clause();
    } else if (is_word(t, "DESCRIBE")) {
      next();
      describe_clause();
    } else if (is_word(t, "CONSTRUCT") || is_word(t, "ASK")) {
      throw QueryError(upper(t.text) + " queries are not supported", t.offset, "SELECT or DESCRIBE");
    } else {
      fail("SELECT or DESCRIBE");
    }
    modifiers();
    if (peek().kind != Tok::end) fail("end of query");
    validate();
    return std::move(q_);
  }

 private:
  static std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }
  static bool is_word(const Token& t, std::string_view w) { return t.kind == Tok::word && iequals(t.text, w); }
  static bool is_punct(const Token& t, char c) { return t.kind == Tok::punct && t.text[0] == c; }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::end ? "end of query" : "'" + t.text + "'";
    throw QueryError("expected " + expected + ", found " + found, t.offset, expected);
  }

  void expect_punct(char c) {
    if (!is_punct(peek(), c)) fail(std::string("'") + c + "'");
    next();
  }
  void expect_word(std::string_view w) {
    if (!is_word(peek(), w)) fail(std::string(w));
    next();
  }
  std::string expect_var() {
    if (peek().kind != Tok::var) fail("variable");
    const Token& t = next();
    used_.emplace_back(t.text, t.offset);
    return t.text;
  }

  std::string resolve(const std::string& iri) const {
    if (!q_.base.empty() && !rdf::is_absolute_iri(iri)) return q_.base + iri;
    return iri;
  }

  std::string expand(const Token& t) const {
    std::string prefix = t.text.substr(0, t.colon);
    for (auto it = q_.prefixes.rbegin(); it != q_.prefixes.rend(); ++it)
      if (it->first == prefix) return it->second + t.text.substr(t.colon + 1);
    throw QueryError("unknown prefix '" + prefix + ":'", t.offset, "declared prefix");
  }

  void prologue() {
    for (;;) {
      if (is_word(peek(), "PREFIX")) {
        next();
        const Token& p = peek();
        if (p.kind != Tok::pname || p.colon + 1 != p.text.size()) fail("prefix name ending in ':'");
        next();
        if (peek().kind != Tok::iri) fail("IRI");
        q_.prefixes.emplace_back(p.text.substr(0, p.colon), resolve(next().text));
      } else if (is_word(peek(), "BASE")) {
        next();
        if (peek().kind != Tok::iri) fail("IRI");
        q_.base = resolve(next().text);
      } else {
        return;
      }
    }
  }

  void select_clause() {
    if (is_word(peek(), "DISTINCT") || is_word(peek(), "REDUCED"))
      throw QueryError(upper(peek().text) + " is not supported", peek().offset, "projection");
    if (is_punct(peek(), '*')) {
      next();
      q_.projection = Projection::star;
    } else if (is_word(peek(), "COUNT")) {
      count_star();
      if (is_word(peek(), "AS")) {
        next();
        q_.count_var = declared_var();
      }
    } else if (is_punct(peek(), '(') && is_word(peek(1), "COUNT")) {
      next();
      count_star();
      expect_word("AS");
      q_.count_var = declared_var();
      expect_punct(')');
    } else if (peek().kind == Tok::var) {
      q_.projection = Projection::vars;
      while (peek().kind == Tok::var) q_.vars.push_back(expect_var());
    } else {
      fail("variable, '*' or COUNT(*)");
    }
    dataset();
    if (is_word(peek(), "WHERE")) next();
    group();
  }

  std::string declared_var() {
    if (peek().kind != Tok::var) fail("variable");
    return next().text;
  }

  void count_star() {
    expect_word("COUNT");
    expect_punct('(');
    expect_punct('*');
    expect_punct(')');
    q_.projection = Projection::count;
  }

  void describe_clause() {
    if (is_punct(peek(), '*')) {
      next();
      q_.projection = Projection::star;
    } else {
      q_.projection = Projection::vars;
      for (;;) {
        const Token& t = peek();
        if (t.kind == Tok::var) {
          q_.describe_targets.push_back(Term::variable(expect_var()));
        } else if (t.kind == Tok::iri) {
          q_.describe_targets.push_back(Term::iri(resolve(next().text)));
        } else if (t.kind == Tok::pname) {
          q_.describe_targets.push_back(Term::iri(expand(next())));
        } else {
          break;
        }
      }
      if (q_.describe_targets.empty()) fail("IRI, variable or '*'");
    }
    q_.form = Form::describe;
    dataset();
    bool where = is_word(peek(), "WHERE");
    if (where) next();
    if (where || is_punct(peek(), '{')) group();
    if (q_.projection == Projection::star && q_.patterns.empty())
      throw QueryError("DESCRIBE * needs a WHERE clause", peek().offset, "WHERE");
  }

  void dataset() {
    if (!is_word(peek(), "FROM")) return;
    next();
    if (is_word(peek(), "NAMED")) throw QueryError("FROM NAMED is not supported", peek().offset, "IRI");
    const Token& t = peek();
    if (t.kind == Tok::iri) {
      q_.from = resolve(next().text);
    } else if (t.kind == Tok::pname) {
      q_.from = expand(next());
    } else {
      fail("graph IRI");
    }
    if (is_word(peek(), "FROM")) throw QueryError("only one FROM clause is supported", peek().offset, "WHERE");
  }

  void group() {
    expect_punct('{');
    for (;;) {
      if (is_punct(peek(), '}')) {
        next();
        return;
      }
      if (is_word(peek(), "FILTER")) {
        next();
        filter();
      } else {
        triples();
      }
      if (is_punct(peek(), '.')) {
        next();
      } else if (!is_punct(peek(), '}') && !is_word(peek(), "FILTER")) {
        fail("'.' or '}'");
      }
    }
  }

  Term var_or_iri(const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::var) {
      std::string v = t.text;
      next();
      return Term::variable(v);
    }
    if (t.kind == Tok::iri) return Term::iri(resolve(next().text));
    if (t.kind == Tok::pname) return Term::iri(expand(next()));
    fail(what);
  }

  Term predicate() {
    if (peek().kind == Tok::word && peek().text == "a") {
      next();
      return Term::iri(rdf::vocab::rdf_type());
    }
    return var_or_iri("predicate");
  }

  Term constant(const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::string) {
      std::string v = next().text;
      if (peek().kind == Tok::langtag) return Term::literal(std::move(v), {}, next().text);
      if (peek().kind == Tok::dtype) {
        next();
        const Token& d = peek();
        if (d.kind == Tok::iri) return Term::literal(std::move(v), resolve(next().text));
        if (d.kind == Tok::pname) return Term::literal(std::move(v), expand(next()));
        fail("datatype IRI");
      }
      return Term::literal(std::move(v));
    }
    if (t.kind == Tok::number) {
      const Token& n = next();
      return Term::literal(n.text, n.datatype);
    }
    if (is_word(t, "true") || is_word(t, "false")) {
      std::string v = next().text;
      for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return Term::literal(v, xsd("boolean"));
    }
    if (t.kind == Tok::iri) return Term::iri(resolve(next().text));
    if (t.kind == Tok::pname) return Term::iri(expand(next()));
    fail(what);
  }

  Term object() {
    if (peek().kind == Tok::var) return Term::variable(next().text);
    return constant("object");
  }

  void triples() {
    Term s = var_or_iri("subject, FILTER or '}'");
    for (;;) {
      Term p = predicate();
      for (;;) {
        q_.patterns.push_back({s, p, object()});
        if (!is_punct(peek(), ',')) break;
        next();
      }
      if (!is_punct(peek(), ';')) return;
      while (is_punct(peek(), ';')) next();
      if (is_punct(peek(), '.') || is_punct(peek(), '}')) return;
    }
  }

  // var or str(var); returns {name, via_str}
  std::pair<std::string, bool> filter_operand() {
    if (is_word(peek(), "str")) {
      next();
      expect_punct('(');
      std::string v = expect_var();
      expect_punct(')');
      return {v, true};
    }
    if (peek().kind != Tok::var) fail("variable or str(variable)");
    return {expect_var(), false};
  }

  void filter() {
    bool paren = is_punct(peek(), '(');
    if (paren) next();
    if (is_word(peek(), "regex")) {
      next();
      expect_punct('(');
      RegexFilter f;
      std::tie(f.var, f.via_str) = filter_operand();
      expect_punct(',');
      if (peek().kind != Tok::string) fail("pattern string");
      std::size_t at = peek().offset;
      f.pattern = next().text;
      if (is_punct(peek(), ',')) {
        next();
        if (peek().kind != Tok::string) fail("flags string");
        f.flags = next().text;
      }
      expect_punct(')');
      for (char c : f.flags)
        if (c != 'i') throw QueryError(std::string("unsupported regex flag '") + c + "'", at, "flag i");
      try {
        std::regex re(f.pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw QueryError(std::string("invalid regular expression: ") + e.what(), at, "regular expression");
      }
      q_.filters.emplace_back(std::move(f));
    } else if (is_word(peek(), "year")) {
      next();
      expect_punct('(');
      YearFilter f;
      f.var = expect_var();
      expect_punct(')');
      expect_punct('=');
      if (peek().kind != Tok::number || peek().datatype != xsd("integer")) fail("integer year");
      f.year = std::strtol(next().text.c_str(), nullptr, 10);
      q_.filters.emplace_back(std::move(f));
    } else {
      EqualsFilter f;
      std::tie(f.var, f.via_str) = filter_operand();
      expect_punct('=');
      f.constant = constant("constant");
      q_.filters.emplace_back(std::move(f));
    }
    if (paren) expect_punct(')');
  }

  void modifiers() {
    for (;;) {
      if (is_word(peek(), "ORDER")) {
        next();
        expect_word("BY");
        std::size_t n = 0;
        for (;; ++n) {
          OrderKey k;
          if (is_word(peek(), "ASC") || is_word(peek(), "DESC")) {
            k.descending = is_word(peek(), "DESC");
            next();
            expect_punct('(');
            k.var = expect_var();
            expect_punct(')');
          } else if (peek().kind == Tok::var) {
            k.var = expect_var();
          } else {
            break;
          }
          q_.order_by.push_back(std::move(k));
        }
        if (n == 0) fail("ordering variable");
      } else if (is_word(peek(), "LIMIT")) {
        next();
        q_.limit = count_value();
      } else if (is_word(peek(), "OFFSET")) {
        next();
        q_.offset = count_value();
      } else {
        return;
      }
    }
  }

  std::size_t count_value() {
    const Token& t = peek();
    if (t.kind != Tok::number || t.datatype != xsd("integer") || t.text[0] == '-' || t.text[0] == '+')
      fail("non-negative integer");
    return static_cast<std::size_t>(std::strtoull(next().text.c_str(), nullptr, 10));
  }

  void validate() const {
    auto vars = q_.pattern_vars();
    std::set<std::string> bound(vars.begin(), vars.end());
    for (const auto& [name, at] : used_)
      if (!bound.count(name)) throw QueryError("variable ?" + name + " is not bound by any pattern", at, "bound variable");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Query q_;
  std::vector<std::pair<std::string, std::size_t>> used_;
};

std::string print_term(const Term& t) {
  switch (t.kind) {
    case Term::Kind::variable:
      return "?" + t.value;
    case Term::Kind::iri:
      return "<" + t.value + ">";
    case Term::Kind::literal: {
      std::string out = "\"" + rdf::escape_string_literal(t.value) + "\"";
      if (!t.language.empty()) {
        out += "@" + t.language;
      } else if (!t.datatype.empty()) {
        out += "^^<" + t.datatype + ">";
      }
      return out;
    }
  }
  return {};
}

bool numeric_lexical(const std::string& s, double& out) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac_digits;
  }
  if (int_digits + frac_digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  if (i != s.size()) return false;
  out = std::strtod(s.c_str(), nullptr);
  return true;
}

bool is_numeric_type(const std::string& dt) {
  return dt == xsd("integer") || dt == xsd("decimal") || dt == xsd("double");
}

bool date_year(const Term& t, long& year) {
  if (!t.is_literal() || (t.datatype != xsd("date") && t.datatype != xsd("dateTime"))) return false;
  const std::string& v = t.value;
  std::size_t i = v.size() && v[0] == '-' ? 1 : 0;
  std::size_t j = i;
  while (j < v.size() && std::isdigit(static_cast<unsigned char>(v[j]))) ++j;
  if (j - i < 4 || j >= v.size() || v[j] != '-') return false;
  year = std::strtol(v.substr(0, j).c_str(), nullptr, 10);
  return true;
}

struct CompiledFilter {
  const Filter* filter;
  std::optional<std::regex> re;
};

bool passes(const CompiledFilter& cf, const Term& v) {
  if (const auto* e = std::get_if<EqualsFilter>(cf.filter)) {
    const Term& c = e->constant;
    if (c.is_iri()) return e->via_str ? str(v) == c.value : v == c;
    if (!e->via_str && !v.is_literal()) return false;
    if (is_numeric_type(c.datatype)) {
      double a = 0, b = 0;
      if (!numeric_lexical(str(v), a) || !numeric_lexical(c.value, b)) return false;
      return a == b;
    }
    return str(v) == c.value;
  }
  if (const auto* r = std::get_if<RegexFilter>(cf.filter)) {
    if (!r->via_str && !v.is_literal()) return false;
    return std::regex_search(str(v), *cf.re);
  }
  const auto& y = std::get<YearFilter>(*cf.filter);
  long year = 0;
  return date_year(v, year) && year == y.year;
}

int compare_terms(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a || !b) return a ? 1 : (b ? -1 : 0);
  if (a->kind != b->kind) return a->is_iri() ? -1 : 1;
  if (a->is_literal()) {
    double x = 0, y = 0;
    if (numeric_lexical(a->value, x) && numeric_lexical(b->value, y) && x != y) return x < y ? -1 : 1;
  }
  if (auto c = a->value.compare(b->value); c != 0) return c < 0 ? -1 : 1;
  if (auto c = a->datatype.compare(b->datatype); c != 0) return c < 0 ? -1 : 1;
  if (auto c = a->language.compare(b->language); c != 0) return c < 0 ? -1 : 1;
  return 0;
}

constexpr TermId kUnbound = std::numeric_limits<TermId>::max();

// Solutions as term ids over the chosen graph.
std::vector<std::vector<TermId>> match_patterns(const Query& q, const IndexedGraph& g,
                                                const std::vector<std::string>& vars) {
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < vars.size(); ++i) slot[vars[i]] = i;

  // filter k runs right after the first pattern that binds its variable
  std::vector<std::vector<CompiledFilter>> after(q.patterns.size());
  for (const auto& f : q.filters) {
    CompiledFilter cf{&f, std::nullopt};
    if (const auto* r = std::get_if<RegexFilter>(&f)) {
      auto flags = std::regex::ECMAScript;
      if (r->flags.find('i') != std::string::npos) flags |= std::regex::icase;
      cf.re.emplace(r->pattern, flags);
    }
    const std::string& v = filter_var(f);
    for (std::size_t i = 0; i < q.patterns.size(); ++i) {
      const auto& p = q.patterns[i];
      auto binds = [&](const Term& t) { return t.is_variable() && t.value == v; };
      if (binds(p.subject) || binds(p.predicate) || binds(p.object)) {
        after[i].push_back(std::move(cf));
        break;
      }
    }
  }

  std::vector<std::vector<TermId>> rows(1, std::vector<TermId>(vars.size(), kUnbound));
  for (std::size_t pi = 0; pi < q.patterns.size() && !rows.empty(); ++pi) {
    const auto& pat = q.patterns[pi];
    const Term* pos[3] = {&pat.subject, &pat.predicate, &pat.object};
    std::optional<TermId> constant[3];
    std::size_t var_slot[3] = {kUnbound, kUnbound, kUnbound};
    bool missing = false;
    for (int k = 0; k < 3; ++k) {
      if (pos[k]->is_variable()) {
        var_slot[k] = slot.at(pos[k]->value);
      } else if (auto id = g.lookup(*pos[k])) {
        constant[k] = id;
      } else {
        missing = true;
      }
    }
    if (missing) {
      rows.clear();
      break;
    }
    std::vector<std::vector<TermId>> next;
    for (const auto& row : rows) {
      std::optional<TermId> key[3];
      for (int k = 0; k < 3; ++k) {
        if (constant[k]) {
          key[k] = constant[k];
        } else if (row[var_slot[k]] != kUnbound) {
          key[k] = row[var_slot[k]];
        }
      }
      g.match(key[0], key[1], key[2], [&](TermId s, TermId p, TermId o) {
        const TermId got[3] = {s, p, o};
        std::vector<TermId> out = row;
        for (int k = 0; k < 3; ++k) {
          if (var_slot[k] == kUnbound) continue;
          TermId& cell = out[var_slot[k]];
          if (cell == kUnbound) {
            cell = got[k];
          } else if (cell != got[k]) {
            return;  // repeated variable, e.g. ?x ?p ?x
          }
        }
        for (const auto& cf : after[pi])
          if (!passes(cf, g.term(out[slot.at(filter_var(*cf.filter))]))) return;
        next.push_back(std::move(out));
      });
    }
    rows = std::move(next);
  }
  return rows;
}

const IndexedGraph* target_graph(const Query& q, const StoreSnapshot& store) {
  return q.from ? store.find(*q.from) : store.merged.get();
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

QueryError::QueryError(const std::string& message, std::size_t offset, std::string expected)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      expected_(std::move(expected)) {}

const std::string& filter_var(const Filter& f) {
  return std::visit([](const auto& x) -> const std::string& { return x.var; }, f);
}

std::vector<std::string> Query::pattern_vars() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& p : patterns)
    for (const Term* t : {&p.subject, &p.predicate, &p.object})
      if (t->is_variable() && seen.insert(t->value).second) out.push_back(t->value);
  return out;
}

Query parse_query(std::string_view text) { return Parser(text).run(); }

std::string print_query(const Query& q) {
  std::string out;
  if (!q.base.empty()) out += "BASE <" + q.base + ">\n";
  for (const auto& [p, iri] : q.prefixes) out += "PREFIX " + p + ": <" + iri + ">\n";
  if (q.form == Form::select) {
    out += "SELECT ";
    switch (q.projection) {
      case Projection::star: out += "*"; break;
      case Projection::count: out += "(COUNT(*) AS ?" + q.count_var + ")"; break;
      case Projection::vars:
        for (std::size_t i = 0; i < q.vars.size(); ++i) out += (i ? " ?" : "?") + q.vars[i];
        break;
    }
  } else {
    out += "DESCRIBE";
    if (q.projection == Projection::star) out += " *";
    for (const auto& t : q.describe_targets) out += " " + print_term(t);
  }
  out += "\n";
  if (q.from) out += "FROM <" + *q.from + ">\n";
  if (q.form == Form::select || !q.patterns.empty() || !q.filters.empty()) {
    out += "WHERE {\n";
    for (const auto& p : q.patterns)
      out += "  " + print_term(p.subject) + " " + print_term(p.predicate) + " " + print_term(p.object) + " .\n";
    for (const auto& f : q.filters) {
      out += "  FILTER ";
      if (const auto* e = std::get_if<EqualsFilter>(&f)) {
        out += "(" + (e->via_str ? "str(?" + e->var + ")" : "?" + e->var) + " = " + print_term(e->constant) + ")";
      } else if (const auto* r = std::get_if<RegexFilter>(&f)) {
        out += "regex(" + (r->via_str ? "str(?" + r->var + ")" : "?" + r->var) + ", \"" +
               rdf::escape_string_literal(r->pattern) + "\"";
        if (!r->flags.empty()) out += ", \"" + rdf::escape_string_literal(r->flags) + "\"";
        out += ")";
      } else {
        const auto& y = std::get<YearFilter>(f);
        out += "(year(?" + y.var + ") = " + std::to_string(y.year) + ")";
      }
      out += " .\n";
    }
    out += "}\n";
  }
  if (!q.order_by.empty()) {
    out += "ORDER BY";
    for (const auto& k : q.order_by) out += k.descending ? " DESC(?" + k.var + ")" : " ?" + k.var;
    out += "\n";
  }
  if (q.limit) out += "LIMIT " + std::to_string(*q.limit) + "\n";
  if (q.offset) out += "OFFSET " + std::to_string(*q.offset) + "\n";
  return out;
}

std::string str(const Term& t) { return t.value; }

Solutions evaluate(const Query& q, const StoreSnapshot& store) {
  if (q.form != Form::select) throw std::invalid_argument("evaluate: not a SELECT query");
  std::vector<std::string> vars = q.pattern_vars();
  const IndexedGraph* g = target_graph(q, store);
  std::vector<std::vector<std::optional<Term>>> rows;
  if (g) {
    for (const auto& ids : match_patterns(q, *g, vars)) {
      std::vector<std::optional<Term>> row(vars.size());
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (ids[i] != kUnbound) row[i] = g->term(ids[i]);
      rows.push_back(std::move(row));
    }
  }

  Solutions out;
  if (q.projection == Projection::count) {
    out.vars = {q.count_var};
    out.rows.push_back({Term::literal(std::to_string(rows.size()), xsd("integer"))});
  } else {
    if (!q.order_by.empty()) {
      std::vector<std::pair<std::size_t, bool>> keys;
      for (const auto& k : q.order_by)
        keys.emplace_back(std::find(vars.begin(), vars.end(), k.var) - vars.begin(), k.descending);
      std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        for (const auto& [i, desc] : keys) {
          int c = compare_terms(a[i], b[i]);
          if (c != 0) return desc ? c > 0 : c < 0;
        }
        return false;
      });
    }
    out.vars = q.projection == Projection::star ? vars : q.vars;
    std::vector<std::size_t> idx;
    for (const auto& v : out.vars) idx.push_back(std::find(vars.begin(), vars.end(), v) - vars.begin());
    for (auto& row : rows) {
      std::vector<std::optional<Term>> r;
      r.reserve(idx.size());
      for (std::size_t i : idx) r.push_back(std::move(row[i]));
      out.rows.push_back(std::move(r));
    }
  }
  std::size_t off = std::min(q.offset.value_or(0), out.rows.size());
  out.rows.erase(out.rows.begin(), out.rows.begin() + static_cast<std::ptrdiff_t>(off));
  if (q.limit && *q.limit < out.rows.size()) out.rows.resize(*q.limit);
  return out;
}

rdf::Graph describe(const Query& q, const StoreSnapshot& store) {
  if (q.form != Form::describe) throw std::invalid_argument("describe: not a DESCRIBE query");
  rdf::Graph out;
  const IndexedGraph* g = target_graph(q, store);
  if (!g) return out;

  std::set<Term> targets;
  std::vector<std::string> wanted;
  for (const auto& t : q.describe_targets) {
    if (t.is_iri()) {
      targets.insert(t);
    } else {
      wanted.push_back(t.value);
    }
  }
  if (q.projection == Projection::star) wanted = q.pattern_vars();
  if (!wanted.empty()) {
    Query sel = q;
    sel.form = Form::select;
    sel.projection = Projection::vars;
    sel.vars = wanted;
    sel.describe_targets.clear();
    for (const auto& row : evaluate(sel, store).rows)
      for (const auto& cell : row)
        if (cell && cell->is_iri()) targets.insert(*cell);
  }
  for (const auto& t : targets) {
    auto id = g->lookup(t);
    if (!id) continue;
    g->match(id, std::nullopt, std::nullopt, [&](TermId s, TermId p, TermId o) {
      out.insert({g->term(s), g->term(p), g->term(o)});
    });
  }
  return out;
}

std::string media_type(ResultFormat f) {
  switch (f) {
    case ResultFormat::json: return "application/sparql-results+json";
    case ResultFormat::xml: return "application/sparql-results+xml";
    case ResultFormat::csv: return "text/csv; charset=utf-8";
    case ResultFormat::html: return "text/html; charset=utf-8";
  }
  return {};
}

std::string serialize_results(const Solutions& s, ResultFormat f) {
  switch (f) {
    case ResultFormat::json: {
      nlohmann::ordered_json doc;
      doc["head"]["vars"] = s.vars;
      auto bindings = nlohmann::ordered_json::array();
      for (const auto& row : s.rows) {
        nlohmann::ordered_json b = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < s.vars.size(); ++i) {
          if (!row[i]) continue;
          const Term& t = *row[i];
          nlohmann::ordered_json v;
          v["type"] = t.is_iri() ? "uri" : "literal";
          v["value"] = t.value;
          if (!t.language.empty()) v["xml:lang"] = t.language;
          if (!t.datatype.empty()) v["datatype"] = t.datatype;
          b[s.vars[i]] = std::move(v);
        }
        bindings.push_back(std::move(b));
      }
      doc["results"]["bindings"] = std::move(bindings);
      return doc.dump(2) + "\n";
    }
    case ResultFormat::xml: {
      std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
      out += "<sparql xmlns=\"http://www.w3.org/2005/sparql-results#\">\n  <head>\n";
      for (const auto& v : s.vars) out += "    <variable name=\"" + xml_escape(v) + "\"/>\n";
      out += "  </head>\n  <results>\n";
      for (const auto& row : s.rows) {
        out += "    <result>\n";
        for (std::size_t i = 0; i < s.vars.size(); ++i) {
          if (!row[i]) continue;
          const Term& t = *row[i];
          out += "      <binding name=\"" + xml_escape(s.vars[i]) + "\">";
          if (t.is_iri()) {
            out += "<uri>" + xml_escape(t.value) + "</uri>";
          } else {
            out += "<literal";
            if (!t.language.empty()) out += " xml:lang=\"" + xml_escape(t.language) + "\"";
            if (!t.datatype.empty()) out += " datatype=\"" + xml_escape(t.datatype) + "\"";
            out += ">" + xml_escape(t.value) + "</literal>";
          }
          out += "</binding>\n";
        }
        out += "    </result>\n";
      }
      out += "  </results>\n</sparql>\n";
      return out;
    }
    case ResultFormat::csv: {
      std::string out = csv::join(s.vars) + "\r\n";
      for (const auto& row : s.rows) {
        csv::Row cells;
        for (const auto& cell : row) cells.push_back(cell ? cell->value : std::string());
        out += csv::join(cells) + "\r\n";
      }
      return out;
    }
    case ResultFormat::html: {
      std::string out = "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>SPARQL results</title></head><body>\n";
      out += "<table class=\"sparql\" border=\"1\">\n<tr>";
      for (const auto& v : s.vars) out += "<th>" + xml_escape(v) + "</th>";
      out += "</tr>\n";
      for (const auto& row : s.rows) {
        out += "<tr>";
        for (const auto& cell : row) out += "<td>" + (cell ? xml_escape(cell->value) : std::string()) + "</td>";
        out += "</tr>\n";
      }
      out += "</table>\n</body></html>\n";
      return out;
    }
  }
  return {};
}

}  // namespace ekg::sparql
