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

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ekg/corpus.hpp"
#include "ekg/date.hpp"

namespace ekg {

enum class PromptKind { summarize, extract };

std::string_view to_string(PromptKind kind);

/// Summarization prompt with `chunk` after the trailing "Text: ".
std::string build_summarize_prompt(std::string_view chunk);

/// Five-item extraction prompt with `text` after the trailing "Text: ".
std::string build_extraction_prompt(std::string_view text);

struct CompletionRequest {
  std::string fileid;
  PromptKind kind = PromptKind::extract;
  std::string prompt;
  int max_tokens = 512;
};

/// Transport-level failure; extract_report retries on it.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A text-completion model. Implementations must tolerate concurrent calls.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual const std::string& id() const = 0;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Deterministic backend answering from a script keyed by (fileid, prompt kind).
///
/// Summaries for a fileid are handed out in order; the last one repeats once
/// the list runs out. `fail_first` makes the first N calls for a fileid throw
/// BackendError, for exercising the retry path.
class MockBackend : public CompletionBackend {
 public:
  struct Script {
    std::string extract;
    std::vector<std::string> summarize;
    int fail_first = 0;
  };

  explicit MockBackend(std::string id) : id_(std::move(id)) {}

  /// Reads `{"model_id": ..., "default": ..., "responses": {fileid: {extract, summarize, fail_first}}}`.
  static std::unique_ptr<MockBackend> from_json(std::string_view json_text);

  void script(const std::string& fileid, Script s);
  void set_default(std::string raw) { default_extract_ = std::move(raw); }

  const std::string& id() const override { return id_; }
  std::string complete(const CompletionRequest& request) override;

  std::size_t call_count() const;
  std::vector<CompletionRequest> calls() const;

 private:
  std::string id_;
  std::string default_extract_ = R"({"disease": "None", "country": "None", "date": "None", "cases": "None", "deaths": "None"})";
  std::map<std::string, Script> scripts_;
  std::map<std::string, std::size_t> summary_cursor_;
  std::map<std::string, int> failures_seen_;
  std::vector<CompletionRequest> calls_;
  mutable std::mutex mu_;
};

/// Per-backend extraction of the five outbreak fields.
struct ExtractionRecord {
  std::string fileid;
  std::string model_id;
  std::optional<std::string> disease;
  std::optional<std::string> country;
  std::optional<Date> date;
  std::optional<std::int64_t> cases;
  std::optional<std::int64_t> deaths;
  bool parse_failed = false;
  std::string error;

  friend bool operator==(const ExtractionRecord&, const ExtractionRecord&) = default;
};

/// Parses the first balanced JSON object inside a model completion. Never
/// throws: without an object the record comes back empty with parse_failed set.
ExtractionRecord parse_model_json(std::string_view raw, const std::string& fileid,
                                  const std::string& model_id);

/// Parses a count such as `15`, `"1,204"` or `15.0`; absent for anything else.
std::optional<std::int64_t> parse_count(std::string_view text);

/// JSON-lines sink of raw completions, one object per backend call.
class AuditLog {
 public:
  explicit AuditLog(std::ostream& out) : out_(out) {}
  void record(const std::string& fileid, const std::string& model_id, PromptKind kind,
              const std::string& raw);

 private:
  std::ostream& out_;
  std::mutex mu_;
};

struct ExtractOptions {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  int max_summary_rounds = 3;
  int max_tokens = 512;
  AuditLog* audit = nullptr;
};

/// Runs the summarize-then-extract protocol for one report against one backend.
ExtractionRecord extract_report(const DonReport& report, CompletionBackend& backend,
                                const ChunkingConfig& cfg = {}, const ExtractOptions& opts = {});

/// Processes up to `jobs` reports at once; output order follows `reports`.
std::vector<ExtractionRecord> extract_corpus(const std::vector<DonReport>& reports,
                                             CompletionBackend& backend,
                                             const ChunkingConfig& cfg = {},
                                             const ExtractOptions& opts = {}, int jobs = 1);

/// Completion backend speaking `POST {model, prompt, max_tokens}` -> `{text}`.
class HttpBackend : public CompletionBackend {
 public:
  HttpBackend(std::string id, std::string url, std::string token = {},
              std::chrono::seconds timeout = std::chrono::seconds(120));

  /// URL from EKG_BACKEND_URL, bearer token from EKG_BACKEND_TOKEN.
  static HttpBackend from_env(std::string id);

  const std::string& id() const override { return id_; }
  std::string complete(const CompletionRequest& request) override;

 private:
  std::string id_;
  std::string origin_;
  std::string path_;
  std::string token_;
  std::chrono::seconds timeout_;
};

}  // namespace ekg
