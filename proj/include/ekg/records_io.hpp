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

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ekg/corpus.hpp"
#include "ekg/extraction.hpp"
#include "ekg/voting.hpp"

// JSON-lines hand-off between pipeline stages: one record per line.
namespace ekg {

/// Malformed stage input; the message names the line and, when known, the
/// record's fileid.
class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_reports(std::ostream& out, const std::vector<DonReport>& reports);
std::vector<DonReport> read_reports(std::istream& in);

void write_extractions(std::ostream& out, const std::vector<ExtractionRecord>& records);
std::vector<ExtractionRecord> read_extractions(std::istream& in);

void write_ensemble(std::ostream& out, const std::vector<EnsembleRecord>& records);
std::vector<EnsembleRecord> read_ensemble(std::istream& in);

std::string to_jsonl(const EnsembleRecord& r);

struct BackendSpec {
  std::string id;
  std::string url;   // HTTP completion endpoint
  std::string mock;  // mock script path; used instead of url when set
  int priority = 0;  // lower wins ties
};

/// Flat key-value config with sections:
///
///   corpus_path = corpus/
///   output_dir = out/
///   base_iri = http://.../
///   similarity_threshold = 0.8
///   [chunking]
///   max_context_tokens = 8000
///   [backend:mistral-7b-openorca]
///   url = http://localhost:8000/v1/complete
///   priority = 2
struct PipelineConfig {
  std::string corpus_path;
  std::vector<BackendSpec> backends;  // sorted by priority, then id
  ChunkingConfig chunking;
  double similarity_threshold = 0.8;
  std::string output_dir = ".";  // not rebased
  std::string base_iri;

  /// Backend ids in tie-break order.
  std::vector<std::string> priority() const;
};

/// Throws std::runtime_error naming the bad key. Relative corpus and mock
/// paths are resolved against the config file's directory.
PipelineConfig load_pipeline_config(const std::string& path);
PipelineConfig parse_pipeline_config(std::istream& in);

}  // namespace ekg
