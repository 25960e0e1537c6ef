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

#include "ekg/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ekg/csv.hpp"

namespace fs = std::filesystem;

namespace ekg {
namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
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

const std::unordered_map<std::string_view, unsigned long>& named_entities() {
  static const std::unordered_map<std::string_view, unsigned long> table = {
      {"nbsp", 0xA0},   {"amp", '&'},      {"lt", '<'},       {"gt", '>'},
      {"quot", '"'},    {"apos", '\''},    {"ndash", 0x2013}, {"mdash", 0x2014},
      {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
      {"hellip", 0x2026}, {"deg", 0xB0},   {"eacute", 0xE9},  {"egrave", 0xE8},
      {"ccedil", 0xE7}, {"ouml", 0xF6},    {"uuml", 0xFC},    {"auml", 0xE4},
      {"middot", 0xB7}, {"bull", 0x2022},  {"times", 0xD7},   {"copy", 0xA9}};
  return table;
}

// Tags whose removal must not glue neighbouring words together are replaced
// by a space; inline formatting tags vanish.
bool is_inline_tag(std::string_view name) {
  static const std::set<std::string_view> inline_tags = {
      "a", "abbr", "b", "em", "i", "small", "span", "strong", "sub", "sup", "u"};
  return inline_tags.count(name) > 0;
}

std::size_t decode_entity(std::string_view s, std::size_t amp, std::string& out) {
  auto semi = s.find(';', amp);
  if (semi == std::string_view::npos || semi - amp > 10 || semi == amp + 1) {
    out += '&';
    return amp + 1;
  }
  auto name = s.substr(amp + 1, semi - amp - 1);
  if (name[0] == '#') {
    unsigned long cp = 0;
    bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
    auto digits = name.substr(hex ? 2 : 1);
    bool ok = !digits.empty();
    for (char c : digits) {
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else { ok = false; break; }
      cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(v);
      if (cp > 0x10FFFF) { ok = false; break; }
    }
    if (!ok || cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out += '&';
      return amp + 1;
    }
    append_utf8(out, cp);
    return semi + 1;
  }
  auto it = named_entities().find(name);
  if (it == named_entities().end()) {
    out += '&';
    return amp + 1;
  }
  append_utf8(out, it->second);
  return semi + 1;
}

std::string clean_once(std::string_view raw) {
  std::string stripped;
  stripped.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '<' && i + 1 < raw.size() &&
        (std::isalpha(static_cast<unsigned char>(raw[i + 1])) || raw[i + 1] == '/' ||
         raw[i + 1] == '!' || raw[i + 1] == '?')) {
      if (raw.substr(i, 4) == "<!--") {
        auto end = raw.find("-->", i + 4);
        i = end == std::string_view::npos ? raw.size() : end + 3;
        stripped += ' ';
        continue;
      }
      auto close = raw.find('>', i);
      if (close == std::string_view::npos) {
        stripped += c;
        ++i;
        continue;
      }
      auto inner = raw.substr(i + 1, close - i - 1);
      bool closing = !inner.empty() && inner[0] == '/';
      if (closing) inner.remove_prefix(1);
      std::size_t n = 0;
      while (n < inner.size() && (std::isalnum(static_cast<unsigned char>(inner[n])))) ++n;
      auto name = lower(inner.substr(0, n));
      i = close + 1;
      if (!closing && (name == "script" || name == "style")) {
        auto end = lower(raw.substr(i)).find("</" + name);
        if (end == std::string::npos) {
          i = raw.size();
        } else {
          auto gt = raw.find('>', i + end);
          i = gt == std::string_view::npos ? raw.size() : gt + 1;
        }
        stripped += ' ';
        continue;
      }
      if (!is_inline_tag(name)) stripped += ' ';
      continue;
    }
    if (c == '&') {
      i = decode_entity(raw, i, stripped);
      continue;
    }
    stripped += c;
    ++i;
  }

  std::string out;
  out.reserve(stripped.size());
  bool pending_space = false;
  for (std::size_t k = 0; k < stripped.size(); ++k) {
    char c = stripped[k];
    bool space = is_ascii_space(c);
    if (!space && static_cast<unsigned char>(c) == 0xC2 && k + 1 < stripped.size() &&
        static_cast<unsigned char>(stripped[k + 1]) == 0xA0) {
      space = true;
      ++k;
    }
    if (space) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

bool ends_sentence(std::string_view word) {
  std::size_t k = word.size();
  while (k > 0 && (word[k - 1] == '"' || word[k - 1] == '\'' || word[k - 1] == ')')) --k;
  if (k == 0) return false;
  char c = word[k - 1];
  return c == '.' || c == '!' || c == '?';
}

bool starts_upper(std::string_view word) {
  std::size_t k = 0;
  while (k < word.size() && (word[k] == '"' || word[k] == '\'' || word[k] == '(')) ++k;
  return k < word.size() && std::isupper(static_cast<unsigned char>(word[k]));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string html_title(std::string_view raw) {
  auto low = lower(raw);
  auto open = low.find("<title");
  if (open == std::string::npos) return {};
  auto gt = low.find('>', open);
  auto close = low.find("</title", gt);
  if (gt == std::string::npos || close == std::string::npos) return {};
  return clean_text(raw.substr(gt + 1, close - gt - 1));
}

DonReport make_report(const std::string& fileid, std::string_view raw, bool html,
                      std::optional<std::string> source) {
  DonReport r;
  r.fileid = fileid;
  r.imputed_date = parse_slug(fileid);
  r.source_url = std::move(source);
  if (html) {
    r.title = html_title(raw);
    auto low = lower(raw);
    // Drop <head> so the title is not repeated in the body.
    auto head_end = low.find("</head>");
    r.body = clean_text(head_end == std::string::npos ? raw : raw.substr(head_end + 7));
  } else {
    auto nl = raw.find('\n');
    r.title = clean_text(raw.substr(0, nl));
    r.body = clean_text(raw);
  }
  return r;
}

bool has_html_ext(const fs::path& p) {
  auto ext = lower(p.extension().string());
  return ext == ".html" || ext == ".htm";
}

}  // namespace

void ChunkingConfig::validate() const {
  if (max_context_tokens <= 0) throw std::invalid_argument("max_context_tokens must be > 0");
  if (words_per_100_tokens <= 0) throw std::invalid_argument("words_per_100_tokens must be > 0");
  if (prompt_overhead_tokens < 0 || budget() <= 0)
    throw std::invalid_argument("prompt overhead leaves no token budget");
}

std::optional<Date> parse_slug(std::string_view slug) {
  auto d1 = slug.find('-');
  if (d1 == std::string_view::npos || d1 == 0 || d1 > 2) return std::nullopt;
  auto d2 = slug.find('-', d1 + 1);
  if (d2 == std::string_view::npos) return std::nullopt;
  auto day_s = slug.substr(0, d1);
  auto month_s = slug.substr(d1 + 1, d2 - d1 - 1);
  auto year_s = slug.substr(d2 + 1, 4);
  if (year_s.size() != 4) return std::nullopt;
  if (slug.size() > d2 + 5 && slug[d2 + 5] != '-') return std::nullopt;
  for (char c : day_s)
    if (c < '0' || c > '9') return std::nullopt;
  for (char c : year_s)
    if (c < '0' || c > '9') return std::nullopt;
  auto month_l = lower(month_s);
  auto it = std::find(kMonths.begin(), kMonths.end(), month_l);
  if (it == kMonths.end()) return std::nullopt;
  unsigned day = 0;
  for (char c : day_s) day = day * 10 + static_cast<unsigned>(c - '0');
  int year = 0;
  for (char c : year_s) year = year * 10 + (c - '0');
  Date d{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(it - kMonths.begin() + 1)},
         std::chrono::day{day}};
  if (!d.ok()) return std::nullopt;
  return d;
}

std::string format_slug_date(const Date& d) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02u", static_cast<unsigned>(d.day()));
  return std::string(buf) + "-" + std::string(kMonths[static_cast<unsigned>(d.month()) - 1]) + "-" +
         std::to_string(static_cast<int>(d.year()));
}

std::string clean_text(std::string_view raw) {
  std::string cur = clean_once(raw);
  // A decoded `&lt;b&gt;` can form a new tag; iterate to a fixed point.
  for (int round = 0; round < 16; ++round) {
    std::string next = clean_once(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

std::size_t count_words(std::string_view text) { return split_words(text).size(); }

long estimate_tokens(std::string_view text, const ChunkingConfig& cfg) {
  auto words = static_cast<long>(count_words(text));
  return (words * 100 + cfg.words_per_100_tokens - 1) / cfg.words_per_100_tokens;
}

std::vector<std::string> chunk_text(std::string_view text, const ChunkingConfig& cfg) {
  cfg.validate();
  if (estimate_tokens(text, cfg) <= cfg.budget()) return {std::string(text)};

  long max_words = cfg.budget() * cfg.words_per_100_tokens / 100;
  while (max_words > 0 && (max_words * 100 + cfg.words_per_100_tokens - 1) / cfg.words_per_100_tokens >
                              cfg.budget())
    --max_words;
  if (max_words <= 0) throw std::invalid_argument("token budget below one word");
  auto limit = static_cast<std::size_t>(max_words);

  auto words = split_words(text);
  // Sentence spans as [begin, end) word indices.
  std::vector<std::pair<std::size_t, std::size_t>> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    bool last = i + 1 == words.size();
    if (last || (ends_sentence(words[i]) && starts_upper(words[i + 1]))) {
      sentences.emplace_back(start, i + 1);
      start = i + 1;
    }
  }

  std::vector<std::string> chunks;
  std::size_t chunk_begin = 0, chunk_end = 0;
  auto flush = [&] {
    if (chunk_end == chunk_begin) return;
    std::string s;
    for (std::size_t k = chunk_begin; k < chunk_end; ++k) {
      if (k > chunk_begin) s += ' ';
      s += words[k];
    }
    chunks.push_back(std::move(s));
    chunk_begin = chunk_end;
  };
  for (auto [b, e] : sentences) {
    if (e - b > limit) {
      flush();
      // Pathological sentence: hard split at word boundaries.
      for (std::size_t k = b; k < e; k += limit) {
        chunk_begin = k;
        chunk_end = std::min(e, k + limit);
        flush();
      }
      continue;
    }
    if (chunk_end + (e - b) - chunk_begin > limit) flush();
    chunk_end = e;
  }
  flush();
  return chunks;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    unsigned long cp;
    if (c < 0x80) { ++i; continue; }
    if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
    else return false;
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    i += len;
  }
  return true;
}

Corpus load_corpus(const std::string& path) {
  std::error_code ec;
  fs::path root(path);
  if (!fs::exists(root, ec)) throw CorpusError("cannot read corpus path: " + path);

  Corpus corpus;
  std::set<std::string> seen;
  auto add = [&](const std::string& fileid, const fs::path& file, std::optional<std::string> source) {
    if (!seen.insert(fileid).second) throw CorpusError("duplicate fileid: " + fileid);
    std::string raw;
    try {
      raw = read_file(file);
    } catch (const CorpusError& e) {
      corpus.skipped.push_back({file.string(), e.what()});
      return;
    }
    if (!is_valid_utf8(raw)) {
      corpus.skipped.push_back({file.string(), "malformed UTF-8"});
      return;
    }
    corpus.reports.push_back(make_report(fileid, raw, has_html_ext(file), std::move(source)));
  };

  if (fs::is_directory(root, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root, ec)) {
      if (!entry.is_regular_file()) continue;
      auto ext = lower(entry.path().extension().string());
      if (ext == ".txt" || ext == ".html" || ext == ".htm") files.push_back(entry.path());
    }
    if (ec) throw CorpusError("cannot read corpus path: " + path);
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add(f.stem().string(), f, std::nullopt);
    return corpus;
  }

  std::string text = read_file(root);
  auto rows = csv::parse(text);
  if (rows.empty()) return corpus;
  const auto& header = rows.front();
  auto col = [&](std::string_view name) -> long {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (lower(header[i]) == name) return static_cast<long>(i);
    return -1;
  };
  long id_col = col("fileid"), path_col = col("path"), url_col = col("source_url");
  if (id_col < 0 || path_col < 0) throw CorpusError("manifest needs fileid,path columns: " + path);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (static_cast<long>(row.size()) <= std::max(id_col, path_col))
      throw CorpusError("manifest row " + std::to_string(r + 1) + " is short: " + path);
    fs::path file = row[static_cast<std::size_t>(path_col)];
    if (file.is_relative()) file = root.parent_path() / file;
    std::optional<std::string> source;
    if (url_col >= 0 && static_cast<std::size_t>(url_col) < row.size() &&
        !row[static_cast<std::size_t>(url_col)].empty())
      source = row[static_cast<std::size_t>(url_col)];
    add(row[static_cast<std::size_t>(id_col)], file, source);
  }
  return corpus;
}

}  // namespace ekg
