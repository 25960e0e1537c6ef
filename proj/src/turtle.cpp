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

#include "ekg/turtle.hpp"

#include <cctype>
#include <cstdio>
#include <map>

namespace ekg::rdf {

TurtleError::TurtleError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("turtle:" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

bool pn_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

bool safe_local(std::string_view local) {
  if (local.empty()) return true;
  char first = local.front();
  if (!std::isalnum(static_cast<unsigned char>(first)) && first != '_') return false;
  if (local.back() == '.') return false;
  for (char c : local)
    if (!pn_char(c)) return false;
  return true;
}

std::string iri_ref(std::string_view iri) {
  std::string out = "<";
  for (char c : iri) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
        c == '`' || c == '\\') {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(u));
      out += buf;
    } else {
      out += c;
    }
  }
  return out + ">";
}

class Writer {
 public:
  explicit Writer(const std::vector<std::pair<std::string, std::string>>& prefixes) : prefixes_(prefixes) {}

  std::string iri(const std::string& value) const {
    const std::pair<std::string, std::string>* best = nullptr;
    for (const auto& p : prefixes_)
      if (value.compare(0, p.second.size(), p.second) == 0 && (!best || p.second.size() > best->second.size()))
        best = &p;
    if (best) {
      auto local = std::string_view(value).substr(best->second.size());
      if (safe_local(local)) return best->first + ":" + std::string(local);
    }
    return iri_ref(value);
  }

  std::string term(const Term& t) const {
    if (t.is_iri()) return iri(t.value);
    std::string out = "\"" + escape_string_literal(t.value) + "\"";
    if (!t.language.empty()) out += "@" + t.language;
    else if (!t.datatype.empty()) out += "^^" + iri(t.datatype);
    return out;
  }

 private:
  const std::vector<std::pair<std::string, std::string>>& prefixes_;
};

class Parser {
 public:
  Parser(std::string_view text, Graph& g) : s_(text), g_(g) {}

  void run() {
    for (;;) {
      skip_ws();
      if (eof()) return;
      if (peek() == '@') {
        directive_at();
      } else if (keyword("PREFIX")) {
        prefix_decl(false);
      } else if (keyword("BASE")) {
        base_decl(false);
      } else {
        triples();
        skip_ws();
        expect('.');
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw TurtleError(msg, line, col);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // Case-insensitive keyword followed by whitespace.
  bool keyword(std::string_view kw) {
    if (pos_ + kw.size() > s_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(s_[pos_ + i])) != kw[i]) return false;
    char after = peek(kw.size());
    if (!std::isspace(static_cast<unsigned char>(after)) && after != '<') return false;
    pos_ += kw.size();
    return true;
  }

  void directive_at() {
    if (s_.compare(pos_, 7, "@prefix") == 0) {
      pos_ += 7;
      prefix_decl(true);
    } else if (s_.compare(pos_, 5, "@base") == 0) {
      pos_ += 5;
      base_decl(true);
    } else {
      fail("unknown directive");
    }
  }

  void prefix_decl(bool dotted) {
    skip_ws();
    std::size_t start = pos_;
    while (!eof() && peek() != ':' && pn_char(peek())) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (peek() != ':') fail("expected prefix name followed by ':'");
    ++pos_;
    skip_ws();
    prefixes_[name] = iriref();
    if (dotted) expect('.');
  }

  void base_decl(bool dotted) {
    skip_ws();
    base_ = iriref();
    if (dotted) expect('.');
  }

  static void append_utf8(std::string& out, unsigned long cp) {
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

  unsigned long hex_escape(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated \\u escape");
    unsigned long cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = s_[pos_ + i];
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else fail("bad hex digit in escape");
      cp = cp * 16 + static_cast<unsigned long>(v);
    }
    pos_ += digits;
    return cp;
  }

  std::string iriref() {
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated IRI");
      char c = s_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        char k = s_[pos_++];
        if (k == 'u') append_utf8(out, hex_escape(4));
        else if (k == 'U') append_utf8(out, hex_escape(8));
        else fail("bad escape in IRI");
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20) fail("whitespace in IRI");
      out += c;
    }
    if (!base_.empty() && !is_absolute_iri(out)) out = base_ + out;
    return out;
  }

  std::string prefixed_name() {
    std::size_t start = pos_;
    while (!eof() && peek() != ':' && pn_char(peek())) ++pos_;
    if (peek() != ':') {
      pos_ = start;
      fail("expected IRI or prefixed name");
    }
    std::string prefix(s_.substr(start, pos_ - start));
    ++pos_;
    std::size_t local_start = pos_;
    while (!eof() && pn_char(peek())) ++pos_;
    // A trailing '.' terminates the statement rather than the name.
    while (pos_ > local_start && s_[pos_ - 1] == '.') --pos_;
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) {
      pos_ = start;
      fail("undeclared prefix '" + prefix + "'");
    }
    return it->second + std::string(s_.substr(local_start, pos_ - local_start));
  }

  std::string iri() {
    skip_ws();
    if (peek() == '<') return iriref();
    if (peek() == '_' && peek(1) == ':') fail("blank nodes are not supported");
    if (peek() == '[' || peek() == '(') fail("blank nodes and collections are not supported");
    return prefixed_name();
  }

  std::string string_body() {
    char q = peek();
    bool longq = peek(1) == q && peek(2) == q;
    pos_ += longq ? 3 : 1;
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated string");
      char c = s_[pos_];
      if (longq) {
        if (c == q && peek(1) == q && peek(2) == q) {
          pos_ += 3;
          // A closing run longer than three belongs to the content.
          while (peek() == q) {
            out += q;
            ++pos_;
          }
          break;
        }
      } else if (c == q) {
        ++pos_;
        break;
      } else if (c == '\n' || c == '\r') {
        fail("newline in short string");
      }
      ++pos_;
      if (c != '\\') {
        out += c;
        continue;
      }
      char k = s_[pos_++];
      switch (k) {
        case 't': out += '\t'; break;
        case 'b': out += '\b'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 'f': out += '\f'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        case 'u': append_utf8(out, hex_escape(4)); break;
        case 'U': append_utf8(out, hex_escape(8)); break;
        default: fail("bad string escape");
      }
    }
    return out;
  }

  Term object() {
    skip_ws();
    char c = peek();
    if (c == '"' || c == '\'') {
      std::string lex = string_body();
      if (peek() == '@') {
        ++pos_;
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
        if (pos_ == start) fail("empty language tag");
        return Term::literal(std::move(lex), {}, std::string(s_.substr(start, pos_ - start)));
      }
      if (peek() == '^' && peek(1) == '^') {
        pos_ += 2;
        return Term::literal(std::move(lex), iri());
      }
      return Term::literal(std::move(lex));
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return numeric();
    }
    if (s_.compare(pos_, 4, "true") == 0 && !pn_char(peek(4)) && peek(4) != ':') {
      pos_ += 4;
      return Term::literal("true", std::string(vocab::xsd) + "boolean");
    }
    if (s_.compare(pos_, 5, "false") == 0 && !pn_char(peek(5)) && peek(5) != ':') {
      pos_ += 5;
      return Term::literal("false", std::string(vocab::xsd) + "boolean");
    }
    return Term::iri(iri());
  }

  Term numeric() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    std::string type = "integer";
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      type = "decimal";
    }
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("bad exponent");
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      type = "double";
    }
    return Term::literal(std::string(s_.substr(start, pos_ - start)), std::string(vocab::xsd) + type);
  }

  void triples() {
    Term subject = Term::iri(iri());
    for (;;) {
      skip_ws();
      Term verb;
      if (peek() == 'a' && (std::isspace(static_cast<unsigned char>(peek(1))) || peek(1) == '<' || peek(1) == '"')) {
        ++pos_;
        verb = Term::iri(vocab::rdf_type());
      } else {
        verb = Term::iri(iri());
      }
      for (;;) {
        g_.insert({subject, verb, object()});
        skip_ws();
        if (peek() != ',') break;
        ++pos_;
      }
      skip_ws();
      if (peek() != ';') break;
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      if (peek() == '.' || eof()) break;
    }
  }

  std::string_view s_;
  Graph& g_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> prefixes_;
  std::string base_;
};

}  // namespace

std::string serialize_turtle(const Graph& g, const std::vector<std::pair<std::string, std::string>>& prefixes) {
  Writer w(prefixes);
  std::string out;
  for (const auto& [name, ns] : prefixes) out += "@prefix " + name + ": " + iri_ref(ns) + " .\n";
  const Term* current = nullptr;
  for (const auto& t : g.triples()) {
    if (!current || *current != t.subject) {
      if (current) out += " .\n";
      out += "\n" + w.term(t.subject) + " " + w.term(t.predicate) + " " + w.term(t.object);
      current = &t.subject;
    } else {
      out += " ;\n    " + w.term(t.predicate) + " " + w.term(t.object);
    }
  }
  if (current) out += " .\n";
  return out;
}

Graph parse_turtle(std::string_view text, std::string graph_name) {
  Graph g(std::move(graph_name));
  Parser(text, g).run();
  return g;
}

}  // namespace ekg::rdf
