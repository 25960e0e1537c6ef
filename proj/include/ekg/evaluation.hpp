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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ekg/date.hpp"
#include "ekg/synonyms.hpp"
#include "ekg/voting.hpp"

namespace ekg {

/// Scored tasks. Deaths are not scored.
enum class Task { disease, country, date, cases };
inline constexpr std::array<Task, 4> kTasks = {Task::disease, Task::country, Task::date, Task::cases};
std::string_view to_string(Task t);

struct GoldRecord {
  std::string fileid;
  std::optional<std::string> disease;
  std::optional<std::string> country;
  std::optional<Date> date;
  std::optional<std::int64_t> cases;
};

/// A present-but-wrong prediction is fp_and_fn: it counts against both
/// precision and recall.
enum class Outcome { tp, fp, fn, tn, fp_and_fn };
std::string_view to_string(Outcome o);

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  void add(Outcome o);
  bool operator==(const ConfusionCounts&) const = default;
};

// Zero denominators give 0.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
/// TP / (TP + (FP + FN) / 2)
double f1(const ConfusionCounts& c);
/// 2PR / (P + R), 0 when P + R = 0.
double f1_harmonic(const ConfusionCounts& c);

Outcome classify_text(const std::optional<std::string>& pred, const std::optional<std::string>& gold,
                      const SynonymDictionary& dict);
Outcome classify_date(const std::optional<Date>& pred, const std::optional<Date>& gold);
Outcome classify_count(const std::optional<std::int64_t>& pred, const std::optional<std::int64_t>& gold);

struct TaskMetrics {
  ConfusionCounts counts;
  double precision = 0, recall = 0, f1 = 0;
};

struct MetricsReport {
  std::array<TaskMetrics, 4> tasks{};  // indexed by Task

  const TaskMetrics& operator[](Task t) const { return tasks[static_cast<std::size_t>(t)]; }
  std::string to_json() const;
  /// Aligned plain-text table, one row per task.
  std::string to_table() const;
};

/// Scores predictions against gold rows joined on fileid. Gold rows without a
/// prediction are scored as all-absent predictions; predictions without gold
/// are ignored with a warning. Duplicate fileids on either side throw
/// std::invalid_argument.
MetricsReport evaluate_corpus(const std::vector<EnsembleRecord>& preds, const std::vector<GoldRecord>& golds,
                              const SynonymDictionaries& dicts);

/// Gold CSV: the ensemble CSV columns without deaths (fileid, virus_extracted,
/// country_extracted, date_extracted, cases_extracted); extra columns ignored.
std::vector<GoldRecord> parse_gold_csv(std::string_view text);

}  // namespace ekg
