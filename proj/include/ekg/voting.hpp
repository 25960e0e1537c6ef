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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ekg/date.hpp"
#include "ekg/extraction.hpp"
#include "ekg/synonyms.hpp"

namespace ekg {

/// How a field's value was decided.
enum class VoteRule {
  unanimous,     // every backend agreed (possibly on "absent")
  plurality,     // one value had strictly more votes than any other
  priority_tie,  // top count shared; earliest backend in priority order won
};

std::string_view to_string(VoteRule rule);
VoteRule vote_rule_from_string(std::string_view s);

struct FieldVote {
  std::map<std::string, int> tally;  // value (canonical for text, "None" when absent) -> votes
  VoteRule rule = VoteRule::unanimous;

  friend bool operator==(const FieldVote&, const FieldVote&) = default;
};

/// Fused per-report record. Field order of `provenance` keys: disease,
/// country, date, cases, deaths.
struct EnsembleRecord {
  std::string fileid;
  std::optional<std::string> disease;
  std::optional<std::string> country;
  std::optional<Date> date;
  std::optional<Date> imputed_date;
  std::optional<std::int64_t> cases;
  std::optional<std::int64_t> deaths;
  std::map<std::string, FieldVote> provenance;

  /// Field-wise equality ignoring provenance.
  bool same_fields(const EnsembleRecord& other) const;
  friend bool operator==(const EnsembleRecord&, const EnsembleRecord&) = default;
};

/// Winner index among `votes` (in priority order) under plurality voting with
/// absent as its own value. Absent loses any tie against a present value;
/// ties between present values go to the earliest voter. Returns nullopt when
/// absent wins. `keys[i]` nullopt means voter i abstained.
struct VoteResult {
  std::optional<std::size_t> winner;
  VoteRule rule = VoteRule::unanimous;
};
VoteResult vote_on_keys(std::span<const std::optional<std::string>> keys);

std::optional<std::int64_t> majority_vote_numeric(std::span<const std::optional<std::int64_t>> values);

std::optional<Date> majority_vote_date(std::span<const std::optional<Date>> values);

/// Votes counted per synonym cluster; returns the winning cluster's canonical form.
std::optional<std::string> majority_vote_text(std::span<const std::optional<std::string>> values,
                                              const SynonymDictionary& dict);

const std::vector<std::string>& default_backend_priority();

/// Fuses one report's per-backend records. Records are ordered by `priority`
/// (model ids; unknown ids go last, in input order) before voting, so the
/// result does not depend on input order. Throws std::invalid_argument when
/// fileids differ or `records` is empty.
EnsembleRecord ensemble_record(std::vector<ExtractionRecord> records, const SynonymDictionaries& dicts,
                               std::optional<Date> imputed_date = std::nullopt,
                               const std::vector<std::string>& priority = default_backend_priority());

struct DictionaryOptions {
  double semantic_threshold = 0.8;
  const SynonymLexicon* lexicon = &builtin_lexicon();
  const EmbeddingProvider* disease_provider = nullptr;
  const EmbeddingProvider* country_provider = nullptr;
};

/// Corpus-wide disease and country dictionaries over every extracted value.
SynonymDictionaries build_dictionaries(const std::vector<ExtractionRecord>& records,
                                       const DictionaryOptions& opts);

}  // namespace ekg
