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
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ekg/date.hpp"
#include "ekg/synonyms.hpp"
#include "ekg/voting.hpp"

namespace ekg {

enum class CountKey { disease, country, pair };

struct LabelCount {
  std::string label;
  std::size_t count = 0;
  bool operator==(const LabelCount&) const = default;
};

/// Label used for a (country, disease) pair, e.g. "Saudi Arabia - MERSCoV".
std::string pair_label(const std::string& country, const std::string& disease);

/// Counts per canonical label, descending, ties by label; at most `n`
/// entries (0 = all). Records lacking the key field are not counted. With
/// `dicts` null, labels are used as stored.
std::vector<LabelCount> top_counts(const std::vector<EnsembleRecord>& records, CountKey key, std::size_t n,
                                   const SynonymDictionaries* dicts = nullptr);

struct DatasetSummary {
  std::size_t entries = 0;
  std::size_t unique_diseases = 0;
  std::size_t unique_countries = 0;
  bool operator==(const DatasetSummary&) const = default;
};

/// Rows with neither disease nor country are dropped before counting.
DatasetSummary dataset_summary(const std::vector<EnsembleRecord>& records,
                               const SynonymDictionaries* dicts = nullptr);

struct SeriesPoint {
  Date date;
  std::int64_t cases = 0;
  std::string fileid;
  bool operator==(const SeriesPoint&) const = default;
};

/// Points for records matching both labels (synonym-aware when `dicts` is
/// given) that have cases and a date; the extracted date is preferred, the
/// imputed date is the fallback. Sorted by date, then fileid.
std::vector<SeriesPoint> time_series(const std::vector<EnsembleRecord>& records, const std::string& disease,
                                     const std::string& country, const SynonymDictionaries* dicts = nullptr);

std::vector<std::pair<int, std::int64_t>> yearly_aggregate(const std::vector<SeriesPoint>& series);

struct RegressionResult {
  double slope = 0, intercept = 0;
  double slope_se = 0;
  double ci95_low = 0, ci95_high = 0;
  double t_stat = 0;
  double p_value = 1;
  double r = 0;
  std::size_t n = 0;
};

/// Least squares y = intercept + slope * x with a t-based 95% CI and
/// two-sided p-value for the slope. Throws std::invalid_argument when
/// n < 3, sizes differ, or x is constant.
RegressionResult ols_regression(std::span<const double> x, std::span<const double> y);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
double students_t_cdf(double t, double df);
/// Inverse of students_t_cdf for p in (0, 1).
double students_t_quantile(double p, double df);

}  // namespace ekg
