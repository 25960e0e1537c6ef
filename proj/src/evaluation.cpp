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

#include "ekg/evaluation.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "ekg/csv.hpp"
#include "ekg/extraction.hpp"
#include "ekg/log.hpp"
#include "json.hpp"

namespace ekg {

namespace {

template <class T, class Match>
Outcome classify(const std::optional<T>& pred, const std::optional<T>& gold, Match match) {
  if (!gold) return pred ? Outcome::fp : Outcome::tn;
  if (!pred) return Outcome::fn;
  return match(*pred, *gold) ? Outcome::tp : Outcome::fp_and_fn;
}

double ratio(std::uint64_t num, double den) { return den > 0 ? static_cast<double>(num) / den : 0.0; }

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string_view to_string(Task t) {
  switch (t) {
    case Task::disease: return "disease";
    case Task::country: return "country";
    case Task::date: return "date";
    case Task::cases: return "cases";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::tp: return "TP";
    case Outcome::fp: return "FP";
    case Outcome::fn: return "FN";
    case Outcome::tn: return "TN";
    case Outcome::fp_and_fn: return "FP+FN";
  }
  return "?";
}

void ConfusionCounts::add(Outcome o) {
  switch (o) {
    case Outcome::tp: ++tp; break;
    case Outcome::fp: ++fp; break;
    case Outcome::fn: ++fn; break;
    case Outcome::tn: ++tn; break;
    case Outcome::fp_and_fn: ++fp; ++fn; break;
  }
}

double precision(const ConfusionCounts& c) { return ratio(c.tp, static_cast<double>(c.tp + c.fp)); }
double recall(const ConfusionCounts& c) { return ratio(c.tp, static_cast<double>(c.tp + c.fn)); }
double f1(const ConfusionCounts& c) {
  return ratio(c.tp, static_cast<double>(c.tp) + static_cast<double>(c.fp + c.fn) / 2.0);
}
double f1_harmonic(const ConfusionCounts& c) {
  double p = precision(c), r = recall(c);
  return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

Outcome classify_text(const std::optional<std::string>& pred, const std::optional<std::string>& gold,
                      const SynonymDictionary& dict) {
  return classify(pred, gold, [&](const std::string& a, const std::string& b) { return dict.same_cluster(a, b); });
}

Outcome classify_date(const std::optional<Date>& pred, const std::optional<Date>& gold) {
  return classify(pred, gold, [](const Date& a, const Date& b) { return a == b; });
}

Outcome classify_count(const std::optional<std::int64_t>& pred, const std::optional<std::int64_t>& gold) {
  return classify(pred, gold, [](std::int64_t a, std::int64_t b) { return a == b; });
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json doc;
  for (Task t : kTasks) {
    const TaskMetrics& m = (*this)[t];
    doc[std::string(to_string(t))] = {{"tp", m.counts.tp},   {"fp", m.counts.fp},         {"fn", m.counts.fn},
                                      {"tn", m.counts.tn},   {"precision", m.precision}, {"recall", m.recall},
                                      {"f1", m.f1}};
  }
  return doc.dump(2) + "\n";
}

std::string MetricsReport::to_table() const {
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %7s %7s %7s %7s %9s %9s %9s\n", "task", "TP", "FP", "FN", "TN", "precision",
                "recall", "F1");
  std::string out = line;
  for (Task t : kTasks) {
    const TaskMetrics& m = (*this)[t];
    std::snprintf(line, sizeof line, "%-8s %7llu %7llu %7llu %7llu %9s %9s %9s\n", std::string(to_string(t)).c_str(),
                  static_cast<unsigned long long>(m.counts.tp), static_cast<unsigned long long>(m.counts.fp),
                  static_cast<unsigned long long>(m.counts.fn), static_cast<unsigned long long>(m.counts.tn),
                  format_metric(m.precision).c_str(), format_metric(m.recall).c_str(), format_metric(m.f1).c_str());
    out += line;
  }
  return out;
}

MetricsReport evaluate_corpus(const std::vector<EnsembleRecord>& preds, const std::vector<GoldRecord>& golds,
                              const SynonymDictionaries& dicts) {
  std::map<std::string, const EnsembleRecord*> by_id;
  for (const auto& p : preds)
    if (!by_id.emplace(p.fileid, &p).second) throw std::invalid_argument("duplicate prediction fileid: " + p.fileid);
  std::set<std::string> gold_ids;
  for (const auto& g : golds)
    if (!gold_ids.insert(g.fileid).second) throw std::invalid_argument("duplicate gold fileid: " + g.fileid);

  MetricsReport report;
  auto& disease = report.tasks[static_cast<std::size_t>(Task::disease)].counts;
  auto& country = report.tasks[static_cast<std::size_t>(Task::country)].counts;
  auto& date = report.tasks[static_cast<std::size_t>(Task::date)].counts;
  auto& cases = report.tasks[static_cast<std::size_t>(Task::cases)].counts;
  const EnsembleRecord none;
  for (const auto& g : golds) {
    auto it = by_id.find(g.fileid);
    const EnsembleRecord& p = it == by_id.end() ? none : *it->second;
    disease.add(classify_text(p.disease, g.disease, dicts.disease));
    country.add(classify_text(p.country, g.country, dicts.country));
    date.add(classify_date(p.date, g.date));
    cases.add(classify_count(p.cases, g.cases));
  }
  std::size_t orphans = 0;
  for (const auto& [id, p] : by_id) orphans += gold_ids.count(id) ? 0 : 1;
  if (orphans) log_warning(std::to_string(orphans) + " prediction(s) have no gold row and were ignored");

  for (auto& m : report.tasks) {
    m.precision = precision(m.counts);
    m.recall = recall(m.counts);
    m.f1 = f1(m.counts);
  }
  return report;
}

std::vector<GoldRecord> parse_gold_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw std::runtime_error("gold CSV: missing header");
  const auto& header = rows[0];
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error("gold CSV: missing column " + std::string(name));
  };
  std::size_t c_id = column("fileid"), c_dis = column("virus_extracted"), c_cty = column("country_extracted"),
              c_date = column("date_extracted"), c_cases = column("cases_extracted");

  std::vector<GoldRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](std::size_t i) -> std::optional<std::string> {
      if (i >= row.size() || row[i].empty() || row[i] == "None") return std::nullopt;
      return row[i];
    };
    GoldRecord g;
    auto id = cell(c_id);
    if (!id) throw std::runtime_error("gold CSV row " + std::to_string(r + 1) + ": empty fileid");
    g.fileid = *id;
    g.disease = cell(c_dis);
    g.country = cell(c_cty);
    if (auto d = cell(c_date)) {
      g.date = parse_slash_or_iso_date(*d);
      if (!g.date) throw std::runtime_error("gold CSV row " + std::to_string(r + 1) + ": bad date '" + *d + "'");
    }
    if (auto c = cell(c_cases)) {
      g.cases = parse_count(*c);
      if (!g.cases) throw std::runtime_error("gold CSV row " + std::to_string(r + 1) + ": bad count '" + *c + "'");
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace ekg
