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

#include "ekg/extraction.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <thread>

#include "json.hpp"

namespace ekg {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// End offset (exclusive) of the balanced object starting at `open`, or npos.
std::size_t balanced_object_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

enum class Field { disease, country, date, cases, deaths, unknown };

Field field_for_key(const std::string& key) {
  std::string k;
  for (char c : lower(trim(key))) k += (c == '_' || c == '-') ? ' ' : c;
  if (k == "disease" || k == "disease name" || k == "diseasename") return Field::disease;
  if (k == "country" || k == "country name") return Field::country;
  if (k == "date") return Field::date;
  if (k == "cases" || k == "number of cases") return Field::cases;
  if (k == "deaths" || k == "number of deaths") return Field::deaths;
  return Field::unknown;
}

bool is_none(const std::string& v) {
  auto l = lower(v);
  return l.empty() || l == "none" || l == "null";
}

std::optional<std::string> text_value(const json& v) {
  if (!v.is_string()) return std::nullopt;
  auto s = trim(v.get<std::string>());
  if (is_none(s)) return std::nullopt;
  return s;
}

std::optional<std::int64_t> count_value(const json& v) {
  if (v.is_number_unsigned()) return static_cast<std::int64_t>(v.get<std::uint64_t>());
  if (v.is_number_integer()) {
    auto n = v.get<std::int64_t>();
    return n >= 0 ? std::optional(n) : std::nullopt;
  }
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d >= 0 && std::floor(d) == d && d < 9e18) return static_cast<std::int64_t>(d);
    return std::nullopt;
  }
  if (v.is_string()) return parse_count(v.get<std::string>());
  return std::nullopt;
}

}  // namespace

std::string_view to_string(PromptKind kind) {
  return kind == PromptKind::summarize ? "summarize" : "extract";
}

std::string build_summarize_prompt(std::string_view chunk) {
  std::string p =
      "Summarize the epidemiological text below, focusing on any aspects that are relevant to the "
      "disease outbreak, place and time of the infectious disease outbreak occurred, and the number "
      "of cases and deaths derived.\n"
      "Do not invent. Write no explanations or notes .\n"
      "Text: ";
  p += chunk;
  return p;
}

std::string build_extraction_prompt(std::string_view text) {
  std::string p =
      "From the text below extract the following items:\n"
      "1 - The name of the disease that caused the outbreak.\n"
      "2 - The name of the country where this disease outbreak occurred, if present.\n"
      "3 - The date when this disease outbreak occurred, if present. Show the date in the format "
      "YYYY-mm-dd.\n"
      "4 - The number of deaths caused exclusively by the disease outbreak mentioned in the text, "
      "if present.\n"
      "Format your response as a JSON object with the following keys: disease name, country, date, "
      "cases. If the information is not present, do not invent and use \"None\" as the value.\n"
      "Text: ";
  p += text;
  return p;
}

std::optional<std::int64_t> parse_count(std::string_view text) {
  auto s = trim(text);
  if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
  if (s.empty()) return std::nullopt;
  // Digits, optionally grouped by commas in threes.
  std::string digits;
  std::size_t group = 0;
  bool seen_comma = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits += c;
      ++group;
    } else if (c == ',') {
      if (i == 0 || (seen_comma && group != 3) || (!seen_comma && group > 3)) return std::nullopt;
      seen_comma = true;
      group = 0;
    } else {
      return std::nullopt;
    }
  }
  if (seen_comma && group != 3) return std::nullopt;
  if (digits.size() > 18) return std::nullopt;
  return std::stoll(digits);
}

ExtractionRecord parse_model_json(std::string_view raw, const std::string& fileid,
                                  const std::string& model_id) {
  ExtractionRecord rec;
  rec.fileid = fileid;
  rec.model_id = model_id;

  std::optional<json> object;
  for (auto open = raw.find('{'); open != std::string_view::npos; open = raw.find('{', open + 1)) {
    auto end = balanced_object_end(raw, open);
    if (end == std::string_view::npos) continue;
    auto parsed = json::parse(raw.substr(open, end - open), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) {
      object = std::move(parsed);
      break;
    }
  }
  if (!object) {
    rec.parse_failed = true;
    rec.error = "no JSON object in completion";
    return rec;
  }

  for (const auto& [key, value] : object->items()) {
    switch (field_for_key(key)) {
      case Field::disease:
        if (!rec.disease) rec.disease = text_value(value);
        break;
      case Field::country:
        if (!rec.country) rec.country = text_value(value);
        break;
      case Field::date:
        if (!rec.date && value.is_string()) rec.date = parse_iso_date(trim(value.get<std::string>()));
        break;
      case Field::cases:
        if (!rec.cases) rec.cases = count_value(value);
        break;
      case Field::deaths:
        if (!rec.deaths) rec.deaths = count_value(value);
        break;
      case Field::unknown:
        break;
    }
  }
  return rec;
}

std::unique_ptr<MockBackend> MockBackend::from_json(std::string_view json_text) {
  auto doc = json::parse(json_text);
  auto mock = std::make_unique<MockBackend>(doc.at("model_id").get<std::string>());
  if (doc.contains("default")) mock->set_default(doc["default"].get<std::string>());
  if (doc.contains("responses")) {
    for (const auto& [fileid, entry] : doc["responses"].items()) {
      Script s;
      if (entry.is_string()) {
        s.extract = entry.get<std::string>();
      } else {
        s.extract = entry.value("extract", std::string{});
        if (entry.contains("summarize")) {
          const auto& sum = entry["summarize"];
          if (sum.is_string()) s.summarize.push_back(sum.get<std::string>());
          else s.summarize = sum.get<std::vector<std::string>>();
        }
        s.fail_first = entry.value("fail_first", 0);
      }
      mock->script(fileid, std::move(s));
    }
  }
  return mock;
}

void MockBackend::script(const std::string& fileid, Script s) {
  std::lock_guard lock(mu_);
  scripts_[fileid] = std::move(s);
}

std::string MockBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mu_);
  calls_.push_back(request);
  auto it = scripts_.find(request.fileid);
  if (it == scripts_.end()) {
    if (request.kind == PromptKind::summarize) return {};
    return default_extract_;
  }
  auto& s = it->second;
  if (failures_seen_[request.fileid] < s.fail_first) {
    ++failures_seen_[request.fileid];
    throw BackendError("scripted transport failure for " + request.fileid);
  }
  if (request.kind == PromptKind::extract) return s.extract;
  if (s.summarize.empty()) return {};
  auto& cursor = summary_cursor_[request.fileid];
  auto idx = std::min(cursor, s.summarize.size() - 1);
  ++cursor;
  return s.summarize[idx];
}

std::size_t MockBackend::call_count() const {
  std::lock_guard lock(mu_);
  return calls_.size();
}

std::vector<CompletionRequest> MockBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

void AuditLog::record(const std::string& fileid, const std::string& model_id, PromptKind kind,
                      const std::string& raw) {
  json line = {{"fileid", fileid},
               {"model_id", model_id},
               {"prompt_kind", std::string(to_string(kind))},
               {"raw", raw}};
  auto text = line.dump(-1, ' ', false, json::error_handler_t::replace);
  std::lock_guard lock(mu_);
  out_ << text << '\n';
}

namespace {

std::string call_with_retry(CompletionBackend& backend, const CompletionRequest& request,
                            const ExtractOptions& opts) {
  auto delay = opts.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      auto raw = backend.complete(request);
      if (opts.audit) opts.audit->record(request.fileid, backend.id(), request.kind, raw);
      return raw;
    } catch (const BackendError&) {
      if (attempt >= opts.attempts) throw;
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
}

}  // namespace

ExtractionRecord extract_report(const DonReport& report, CompletionBackend& backend,
                                const ChunkingConfig& cfg, const ExtractOptions& opts) {
  ExtractionRecord empty;
  empty.fileid = report.fileid;
  empty.model_id = backend.id();
  if (count_words(report.body) == 0) return empty;

  auto request = [&](PromptKind kind, std::string prompt) {
    CompletionRequest r;
    r.fileid = report.fileid;
    r.kind = kind;
    r.prompt = std::move(prompt);
    r.max_tokens = opts.max_tokens;
    return r;
  };

  try {
    std::string text = report.body;
    for (int round = 0; round < opts.max_summary_rounds && estimate_tokens(text, cfg) > cfg.budget();
         ++round) {
      std::string condensed;
      for (const auto& chunk : chunk_text(text, cfg)) {
        auto summary = call_with_retry(backend, request(PromptKind::summarize, build_summarize_prompt(chunk)), opts);
        if (!condensed.empty()) condensed += '\n';
        condensed += trim(summary);
      }
      text = std::move(condensed);
    }
    if (count_words(text) == 0) {
      empty.error = "summaries were empty";
      return empty;
    }
    if (estimate_tokens(text, cfg) > cfg.budget()) text = chunk_text(text, cfg).front();
    auto raw = call_with_retry(backend, request(PromptKind::extract, build_extraction_prompt(text)), opts);
    return parse_model_json(raw, report.fileid, backend.id());
  } catch (const std::exception& e) {
    empty.error = std::string("backend failure: ") + e.what();
    return empty;
  }
}

std::vector<ExtractionRecord> extract_corpus(const std::vector<DonReport>& reports,
                                             CompletionBackend& backend, const ChunkingConfig& cfg,
                                             const ExtractOptions& opts, int jobs) {
  std::vector<ExtractionRecord> out(reports.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < reports.size(); i = next++) out[i] = extract_report(reports[i], backend, cfg, opts);
  };
  auto n = static_cast<std::size_t>(std::max(1, jobs));
  n = std::min(n, std::max<std::size_t>(1, reports.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace ekg
