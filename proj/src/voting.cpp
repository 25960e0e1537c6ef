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

#include "ekg/voting.hpp"

#include <algorithm>
#include <stdexcept>

namespace ekg {
namespace {

constexpr const char* kAbsent = "None";

}  // namespace

std::string_view to_string(VoteRule rule) {
  switch (rule) {
    case VoteRule::unanimous: return "unanimous";
    case VoteRule::plurality: return "plurality";
    default: return "priority_tie";
  }
}

VoteRule vote_rule_from_string(std::string_view s) {
  if (s == "unanimous") return VoteRule::unanimous;
  if (s == "plurality") return VoteRule::plurality;
  if (s == "priority_tie") return VoteRule::priority_tie;
  throw std::invalid_argument("unknown vote rule: " + std::string(s));
}

bool EnsembleRecord::same_fields(const EnsembleRecord& o) const {
  return fileid == o.fileid && disease == o.disease && country == o.country && date == o.date &&
         imputed_date == o.imputed_date && cases == o.cases && deaths == o.deaths;
}

VoteResult vote_on_keys(std::span<const std::optional<std::string>> keys) {
  struct Group {
    std::size_t first;
    int count;
  };
  std::map<std::string, Group> groups;
  int absent = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!keys[i]) {
      ++absent;
      continue;
    }
    auto [it, fresh] = groups.emplace(*keys[i], Group{i, 0});
    ++it->second.count;
  }

  VoteResult result;
  const int n = static_cast<int>(keys.size());
  if (groups.empty()) return result;  // all absent (or no voters): unanimous absent

  int best = 0;
  std::size_t winner = 0;
  for (const auto& [key, g] : groups)
    if (g.count > best || (g.count == best && g.first < winner)) {
      best = g.count;
      winner = g.first;
    }
  int tied = 0;
  for (const auto& [key, g] : groups)
    if (g.count == best) ++tied;

  if (absent > best) {
    result.rule = VoteRule::plurality;
    return result;
  }
  result.winner = winner;
  if (best == n) result.rule = VoteRule::unanimous;
  else if (tied == 1 && best > absent) result.rule = VoteRule::plurality;
  else result.rule = VoteRule::priority_tie;
  return result;
}

std::optional<std::int64_t> majority_vote_numeric(std::span<const std::optional<std::int64_t>> values) {
  std::vector<std::optional<std::string>> keys;
  for (const auto& v : values) keys.push_back(v ? std::optional(std::to_string(*v)) : std::nullopt);
  auto r = vote_on_keys(keys);
  return r.winner ? values[*r.winner] : std::nullopt;
}

std::optional<Date> majority_vote_date(std::span<const std::optional<Date>> values) {
  std::vector<std::optional<std::string>> keys;
  for (const auto& v : values) keys.push_back(v ? std::optional(format_iso(*v)) : std::nullopt);
  auto r = vote_on_keys(keys);
  return r.winner ? values[*r.winner] : std::nullopt;
}

namespace {

std::optional<std::string> cluster_key(const std::optional<std::string>& v, const SynonymDictionary& dict) {
  if (!v) return std::nullopt;
  if (auto c = dict.cluster_of(*v)) return "c:" + std::to_string(*c);
  return "raw:" + *v;
}

template <class T, class KeyFn, class LabelFn>
std::optional<T> vote_field(const std::vector<std::optional<T>>& values, KeyFn key, LabelFn label,
                            FieldVote& vote) {
  std::vector<std::optional<std::string>> keys;
  for (const auto& v : values) {
    keys.push_back(key(v));
    ++vote.tally[v ? label(*v) : std::string(kAbsent)];
  }
  auto r = vote_on_keys(keys);
  vote.rule = r.rule;
  if (!r.winner) return std::nullopt;
  return values[*r.winner];
}

}  // namespace

std::optional<std::string> majority_vote_text(std::span<const std::optional<std::string>> values,
                                              const SynonymDictionary& dict) {
  std::vector<std::optional<std::string>> keys;
  for (const auto& v : values) keys.push_back(cluster_key(v, dict));
  auto r = vote_on_keys(keys);
  if (!r.winner) return std::nullopt;
  return dict.canonical_of(*values[*r.winner]);
}

const std::vector<std::string>& default_backend_priority() {
  static const std::vector<std::string> order = {"meta-llama-3-70b-instruct", "mistral-7b-openorca",
                                                 "zephyr-7b-beta"};
  return order;
}

EnsembleRecord ensemble_record(std::vector<ExtractionRecord> records, const SynonymDictionaries& dicts,
                               std::optional<Date> imputed_date, const std::vector<std::string>& priority) {
  if (records.empty()) throw std::invalid_argument("ensemble_record: no input records");
  for (const auto& r : records)
    if (r.fileid != records.front().fileid)
      throw std::invalid_argument("ensemble_record: fileid mismatch (" + records.front().fileid + " vs " +
                                  r.fileid + ")");
  auto rank = [&](const ExtractionRecord& r) {
    auto it = std::find(priority.begin(), priority.end(), r.model_id);
    return static_cast<std::size_t>(it - priority.begin());
  };
  std::stable_sort(records.begin(), records.end(),
                   [&](const auto& a, const auto& b) { return rank(a) < rank(b); });

  EnsembleRecord out;
  out.fileid = records.front().fileid;
  out.imputed_date = imputed_date;

  auto text_field = [&](auto member, const SynonymDictionary& dict, const char* name) {
    std::vector<std::optional<std::string>> values;
    for (const auto& r : records) values.push_back(r.*member);
    auto& vote = out.provenance[name];
    auto winner = vote_field(
        values, [&](const auto& v) { return cluster_key(v, dict); },
        [&](const std::string& s) { return dict.canonical_of(s); }, vote);
    return winner ? std::optional(dict.canonical_of(*winner)) : std::nullopt;
  };
  out.disease = text_field(&ExtractionRecord::disease, dicts.disease, "disease");
  out.country = text_field(&ExtractionRecord::country, dicts.country, "country");

  std::vector<std::optional<Date>> dates;
  for (const auto& r : records) dates.push_back(r.date);
  out.date = vote_field(
      dates, [](const auto& v) { return v ? std::optional(format_iso(*v)) : std::nullopt; },
      [](const Date& d) { return format_iso(d); }, out.provenance["date"]);

  auto count_field = [&](auto member, const char* name) {
    std::vector<std::optional<std::int64_t>> values;
    for (const auto& r : records) values.push_back(r.*member);
    return vote_field(
        values, [](const auto& v) { return v ? std::optional(std::to_string(*v)) : std::nullopt; },
        [](std::int64_t x) { return std::to_string(x); }, out.provenance[name]);
  };
  out.cases = count_field(&ExtractionRecord::cases, "cases");
  out.deaths = count_field(&ExtractionRecord::deaths, "deaths");
  return out;
}

SynonymDictionaries build_dictionaries(const std::vector<ExtractionRecord>& records,
                                       const DictionaryOptions& opts) {
  std::vector<std::string> diseases, countries;
  for (const auto& r : records) {
    if (r.disease) diseases.push_back(*r.disease);
    if (r.country) countries.push_back(*r.country);
  }
  SynonymDictionaries d;
  d.disease = build_synonym_dictionary(diseases, opts.lexicon, opts.disease_provider,
                                       {opts.semantic_threshold, FieldKind::disease});
  d.country = build_synonym_dictionary(countries, opts.lexicon, opts.country_provider,
                                       {opts.semantic_threshold, FieldKind::country});
  return d;
}

}  // namespace ekg
