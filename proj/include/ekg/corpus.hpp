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
#include <vector>

#include "ekg/date.hpp"

namespace ekg {

/// One outbreak report. `fileid` is the URL slug of the report.
struct DonReport {
  std::string fileid;
  std::string title;
  std::string body;
  std::optional<Date> imputed_date;
  std::optional<std::string> source_url;

  friend bool operator==(const DonReport&, const DonReport&) = default;
};

/// Token budget for one backend request. Word/token ratio is
/// `words_per_100_tokens` words for every 100 tokens.
struct ChunkingConfig {
  long max_context_tokens = 8000;
  long words_per_100_tokens = 75;
  long prompt_overhead_tokens = 512;

  long budget() const { return max_context_tokens - prompt_overhead_tokens; }
  void validate() const;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Date prefix of a slug of the form `dd-monthname-yyyy[-...]`.
std::optional<Date> parse_slug(std::string_view slug);

/// Inverse of parse_slug's date grammar, e.g. `05-january-1997`.
std::string format_slug_date(const Date& d);

/// Strips markup, decodes entity references, collapses whitespace.
/// Idempotent.
std::string clean_text(std::string_view raw);

std::size_t count_words(std::string_view text);

/// ceil(words * 100 / words_per_100_tokens).
long estimate_tokens(std::string_view text, const ChunkingConfig& cfg = {});

/// Splits `text` so every piece fits `cfg.budget()`. Pieces are cut at
/// sentence ends where possible and at word boundaries otherwise.
std::vector<std::string> chunk_text(std::string_view text, const ChunkingConfig& cfg = {});

inline std::vector<std::string> chunk_for_context(const DonReport& report,
                                                  const ChunkingConfig& cfg = {}) {
  return chunk_text(report.body, cfg);
}

struct LoadIssue {
  std::string path;
  std::string message;
};

struct Corpus {
  std::vector<DonReport> reports;
  std::vector<LoadIssue> skipped;
};

/// Loads a directory of `.txt`/`.html`/`.htm` files (fileid = file stem) or a
/// `fileid,path` manifest CSV. Throws CorpusError for an unreadable path or a
/// duplicate fileid; files with malformed UTF-8 are skipped and reported.
Corpus load_corpus(const std::string& path);

bool is_valid_utf8(std::string_view s);

}  // namespace ekg
