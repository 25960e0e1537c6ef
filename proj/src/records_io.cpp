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

#include "ekg/records_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "json.hpp"

namespace ekg {

namespace {

using nlohmann::json;

json opt(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<Date>& v) { return v ? json(format_iso(*v)) : json(nullptr); }
json opt(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line parsed as an object; false at end of input.
  bool next(json& doc) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      id_.clear();
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        doc = json::parse(line);
      } catch (const json::exception& e) {
        fail("invalid JSON: " + std::string(e.what()));
      }
      if (!doc.is_object()) fail("expected a JSON object");
      id_.clear();
      if (auto it = doc.find("fileid"); it != doc.end() && it->is_string()) id_ = it->get<std::string>();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string where = "line " + std::to_string(line_no_);
    if (!id_.empty()) where += " (fileid " + id_ + ")";
    throw RecordError(where + ": " + message);
  }

  std::string text(const json& doc, const char* key) const {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_string()) fail(std::string("missing string field '") + key + "'");
    return it->get<std::string>();
  }

  std::optional<std::string> opt_text(const json& doc, const char* key) const {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(std::string("field '") + key + "' must be a string or null");
    return it->get<std::string>();
  }

  std::optional<Date> opt_date(const json& doc, const char* key) const {
    auto s = opt_text(doc, key);
    if (!s) return std::nullopt;
    auto d = parse_iso_date(*s);
    if (!d) fail(std::string("field '") + key + "' is not a YYYY-MM-DD date");
    return d;
  }

  std::optional<std::int64_t> opt_int(const json& doc, const char* key) const {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) fail(std::string("field '") + key + "' must be an integer or null");
    return it->get<std::int64_t>();
  }

  std::string fileid(const json& doc) const {
    std::string id = text(doc, "fileid");
    if (id.empty()) fail("empty fileid");
    return id;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
  std::string id_;
};

}  // namespace

void write_reports(std::ostream& out, const std::vector<DonReport>& reports) {
  for (const auto& r : reports) {
    json doc = {{"fileid", r.fileid},
                {"title", r.title},
                {"body", r.body},
                {"imputed_date", opt(r.imputed_date)},
                {"source_url", opt(r.source_url)}};
    out << doc.dump() << '\n';
  }
}

std::vector<DonReport> read_reports(std::istream& in) {
  std::vector<DonReport> out;
  LineReader reader(in);
  json doc;
  while (reader.next(doc)) {
    DonReport r;
    r.fileid = reader.fileid(doc);
    r.title = reader.opt_text(doc, "title").value_or("");
    r.body = reader.text(doc, "body");
    r.imputed_date = reader.opt_date(doc, "imputed_date");
    r.source_url = reader.opt_text(doc, "source_url");
    out.push_back(std::move(r));
  }
  return out;
}

void write_extractions(std::ostream& out, const std::vector<ExtractionRecord>& records) {
  for (const auto& r : records) {
    json doc = {{"fileid", r.fileid},         {"model_id", r.model_id}, {"disease", opt(r.disease)},
                {"country", opt(r.country)},  {"date", opt(r.date)},    {"cases", opt(r.cases)},
                {"deaths", opt(r.deaths)},    {"parse_failed", r.parse_failed}};
    if (!r.error.empty()) doc["error"] = r.error;
    out << doc.dump() << '\n';
  }
}

std::vector<ExtractionRecord> read_extractions(std::istream& in) {
  std::vector<ExtractionRecord> out;
  LineReader reader(in);
  json doc;
  while (reader.next(doc)) {
    ExtractionRecord r;
    r.fileid = reader.fileid(doc);
    r.model_id = reader.text(doc, "model_id");
    r.disease = reader.opt_text(doc, "disease");
    r.country = reader.opt_text(doc, "country");
    r.date = reader.opt_date(doc, "date");
    r.cases = reader.opt_int(doc, "cases");
    r.deaths = reader.opt_int(doc, "deaths");
    if (auto it = doc.find("parse_failed"); it != doc.end()) {
      if (!it->is_boolean()) reader.fail("field 'parse_failed' must be a boolean");
      r.parse_failed = it->get<bool>();
    }
    r.error = reader.opt_text(doc, "error").value_or("");
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_jsonl(const EnsembleRecord& r) {
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const char* field : {"disease", "country", "date", "cases", "deaths"}) {
    auto it = r.provenance.find(field);
    if (it == r.provenance.end()) continue;
    prov[field] = {{"rule", std::string(to_string(it->second.rule))}, {"tally", it->second.tally}};
  }
  nlohmann::ordered_json doc;
  doc["fileid"] = r.fileid;
  doc["disease"] = opt(r.disease);
  doc["country"] = opt(r.country);
  doc["date"] = opt(r.date);
  doc["imputed_date"] = opt(r.imputed_date);
  doc["cases"] = opt(r.cases);
  doc["deaths"] = opt(r.deaths);
  doc["provenance"] = std::move(prov);
  return doc.dump();
}

void write_ensemble(std::ostream& out, const std::vector<EnsembleRecord>& records) {
  for (const auto& r : records) out << to_jsonl(r) << '\n';
}

std::vector<EnsembleRecord> read_ensemble(std::istream& in) {
  std::vector<EnsembleRecord> out;
  LineReader reader(in);
  json doc;
  while (reader.next(doc)) {
    EnsembleRecord r;
    r.fileid = reader.fileid(doc);
    r.disease = reader.opt_text(doc, "disease");
    r.country = reader.opt_text(doc, "country");
    r.date = reader.opt_date(doc, "date");
    r.imputed_date = reader.opt_date(doc, "imputed_date");
    r.cases = reader.opt_int(doc, "cases");
    r.deaths = reader.opt_int(doc, "deaths");
    if (auto it = doc.find("provenance"); it != doc.end() && !it->is_null()) {
      if (!it->is_object()) reader.fail("field 'provenance' must be an object");
      for (const auto& [field, vote] : it->items()) {
        FieldVote fv;
        try {
          fv.rule = vote_rule_from_string(vote.at("rule").get<std::string>());
          fv.tally = vote.at("tally").get<std::map<std::string, int>>();
        } catch (const std::exception& e) {
          reader.fail("bad provenance for '" + field + "': " + e.what());
        }
        r.provenance[field] = std::move(fv);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> PipelineConfig::priority() const {
  std::vector<std::string> ids;
  for (const auto& b : backends) ids.push_back(b.id);
  return ids;
}

PipelineConfig parse_pipeline_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error("config: " + std::string(e.what()));
  }

  PipelineConfig cfg;
  static const std::set<std::string> chunk_keys = {"max_context_tokens", "words_per_100_tokens",
                                                   "prompt_overhead_tokens"};
  auto number = [](const pt::ptree& node, const std::string& key, auto fallback) {
    // get(path, default) swallows conversion errors, so convert the child directly
    auto child = node.get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return fallback;
    try {
      return child->template get_value<decltype(fallback)>();
    } catch (const pt::ptree_bad_data&) {
      throw std::runtime_error("config: bad value for '" + key + "'");
    }
  };

  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      const std::string v = node.data();
      if (name == "corpus_path") cfg.corpus_path = v;
      else if (name == "output_dir") cfg.output_dir = v;
      else if (name == "base_iri") cfg.base_iri = v;
      else if (name == "similarity_threshold") cfg.similarity_threshold = number(tree, name, 0.0);
      else throw std::runtime_error("config: unknown key '" + name + "'");
    } else if (name == "chunking") {
      for (const auto& [key, leaf] : node)
        if (!chunk_keys.count(key)) throw std::runtime_error("config: unknown key 'chunking." + key + "'");
      cfg.chunking.max_context_tokens = number(node, "max_context_tokens", cfg.chunking.max_context_tokens);
      cfg.chunking.words_per_100_tokens = number(node, "words_per_100_tokens", cfg.chunking.words_per_100_tokens);
      cfg.chunking.prompt_overhead_tokens =
          number(node, "prompt_overhead_tokens", cfg.chunking.prompt_overhead_tokens);
    } else if (name.rfind("backend:", 0) == 0) {
      BackendSpec b;
      b.id = name.substr(8);
      if (b.id.empty()) throw std::runtime_error("config: backend section without an id");
      for (const auto& [key, leaf] : node) {
        if (key == "url") b.url = leaf.data();
        else if (key == "mock") b.mock = leaf.data();
        else if (key == "priority") b.priority = number(node, key, 0);
        else throw std::runtime_error("config: unknown key '" + name + "." + key + "'");
      }
      if (b.url.empty() && b.mock.empty()) throw std::runtime_error("config: backend " + b.id + " needs url or mock");
      cfg.backends.push_back(std::move(b));
    } else {
      throw std::runtime_error("config: unknown section '" + name + "'");
    }
  }
  if (cfg.similarity_threshold < 0 || cfg.similarity_threshold > 1)
    throw std::runtime_error("config: similarity_threshold must be in [0, 1]");
  try {
    cfg.chunking.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("config: chunking: " + std::string(e.what()));
  }
  std::stable_sort(cfg.backends.begin(), cfg.backends.end(), [](const BackendSpec& a, const BackendSpec& b) {
    return a.priority != b.priority ? a.priority < b.priority : a.id < b.id;
  });
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  PipelineConfig cfg = parse_pipeline_config(in);
  // relative paths are relative to the config file
  auto dir = std::filesystem::path(path).parent_path();
  auto rebase = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (dir / p).lexically_normal().string();
  };
  rebase(cfg.corpus_path);
  for (auto& b : cfg.backends) rebase(b.mock);
  return cfg;
}

}  // namespace ekg
