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

#include "ekg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "ekg/analytics.hpp"
#include "ekg/corpus.hpp"
#include "ekg/csv.hpp"
#include "ekg/evaluation.hpp"
#include "ekg/extraction.hpp"
#include "ekg/kg.hpp"
#include "ekg/log.hpp"
#include "ekg/rdfxml.hpp"
#include "ekg/records_io.hpp"
#include "ekg/service.hpp"
#include "ekg/sparql.hpp"
#include "ekg/turtle.hpp"
#include "ekg/voting.hpp"
#include "json.hpp"

namespace ekg::cli {

namespace {

namespace fs = std::filesystem;

class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write " + path);
  out << content;
  if (!out) throw UserError("write failed: " + path);
}

template <class Reader>
auto read_records(const std::string& path, Reader reader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open " + path);
  return reader(in);
}

// Ensemble records from .jsonl or from the published .csv layout.
std::vector<EnsembleRecord> load_ensemble(const std::string& path) {
  if (fs::path(path).extension() == ".csv") return parse_csv(read_file(path));
  return read_records(path, read_ensemble);
}

void save_dictionaries(const std::string& path, const SynonymDictionaries& d) {
  nlohmann::ordered_json doc;
  doc["disease"] = nlohmann::ordered_json::parse(d.disease.to_json());
  doc["country"] = nlohmann::ordered_json::parse(d.country.to_json());
  write_file(path, doc.dump(2) + "\n");
}

SynonymDictionaries load_dictionaries(const std::string& path) {
  auto doc = nlohmann::json::parse(read_file(path));
  SynonymDictionaries d;
  d.disease = SynonymDictionary::from_json(doc.at("disease").dump());
  d.country = SynonymDictionary::from_json(doc.at("country").dump());
  return d;
}

// Clusters every disease and country value seen, lexicon and syntactic
// checks always, embeddings unless disabled.
SynonymDictionaries cluster_values(const std::vector<std::string>& diseases, const std::vector<std::string>& countries,
                                   double threshold, bool embeddings) {
  static const TrigramEmbedding trigram;
  const EmbeddingProvider* provider = embeddings ? &trigram : nullptr;
  SynonymDictionaries d;
  d.disease = build_synonym_dictionary(diseases, &builtin_lexicon(), provider, {threshold, FieldKind::disease});
  d.country = build_synonym_dictionary(countries, &builtin_lexicon(), provider, {threshold, FieldKind::country});
  return d;
}

std::vector<std::pair<std::string, std::string>> prefixes_for(const std::string& base) {
  auto prefixes = rdf::standard_prefixes();
  for (auto& [p, iri] : prefixes)
    if (p == "eKG") iri = base;
  return prefixes;
}

sparql::ResultFormat result_format(const std::string& name) {
  if (name == "json") return sparql::ResultFormat::json;
  if (name == "xml") return sparql::ResultFormat::xml;
  if (name == "csv") return sparql::ResultFormat::csv;
  if (name == "html") return sparql::ResultFormat::html;
  throw UserError("unknown format '" + name + "' (json, xml, csv, html)");
}

std::unique_ptr<CompletionBackend> make_backend(const BackendSpec& b) {
  if (!b.mock.empty()) {
    auto mock = MockBackend::from_json(read_file(b.mock));
    if (!b.id.empty() && mock->id() != b.id)
      throw UserError("mock script " + b.mock + " is for model '" + mock->id() + "', not '" + b.id + "'");
    return mock;
  }
  const char* token = std::getenv("EKG_BACKEND_TOKEN");
  return std::make_unique<HttpBackend>(b.id, b.url, token ? token : "");
}

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// ---- subcommands ----

struct IngestArgs {
  std::string corpus, out;
};

int cmd_ingest(const IngestArgs& a, Streams io) {
  Corpus c = load_corpus(a.corpus);
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw UserError("cannot write " + a.out);
  write_reports(out, c.reports);
  for (const auto& s : c.skipped) io.err << "skipped " << s.path << ": " << s.message << "\n";
  io.err << c.reports.size() << " report(s) written to " << a.out << "\n";
  return kOk;
}

struct ExtractArgs {
  std::string in, out, config, backend, url, mock, audit;
  int jobs = 1;
  int attempts = 3;
  long max_context = 0;
};

int cmd_extract(const ExtractArgs& a, Streams io) {
  PipelineConfig cfg;
  if (!a.config.empty()) cfg = load_pipeline_config(a.config);
  if (a.max_context > 0) cfg.chunking.max_context_tokens = a.max_context;
  cfg.chunking.validate();
  if (!a.mock.empty() || !a.url.empty() || !a.backend.empty()) {
    BackendSpec b;
    b.id = a.backend;
    b.mock = a.mock;
    b.url = a.url;
    if (b.mock.empty() && b.url.empty()) {
      const char* url = std::getenv("EKG_BACKEND_URL");
      if (!url || !*url) throw UserError("--backend needs --url, --mock or EKG_BACKEND_URL");
      b.url = url;
    }
    if (b.id.empty() && b.mock.empty()) throw UserError("--url needs --backend ID");
    cfg.backends = {b};
  }
  if (cfg.backends.empty()) throw UserError("no backend configured (use --config, --mock or --backend/--url)");
  if (a.jobs < 1) throw UserError("--jobs must be >= 1");

  auto reports = read_records(a.in, read_reports);
  std::ofstream audit_file;
  std::unique_ptr<AuditLog> audit;
  if (!a.audit.empty()) {
    audit_file.open(a.audit, std::ios::binary);
    if (!audit_file) throw UserError("cannot write " + a.audit);
    audit = std::make_unique<AuditLog>(audit_file);
  }
  ExtractOptions opts;
  opts.attempts = a.attempts;
  opts.audit = audit.get();

  std::vector<ExtractionRecord> all;
  for (const auto& spec : cfg.backends) {
    auto backend = make_backend(spec);
    auto records = extract_corpus(reports, *backend, cfg.chunking, opts, a.jobs);
    std::size_t failed = 0;
    for (const auto& r : records) failed += (r.parse_failed || !r.error.empty()) ? 1 : 0;
    io.err << backend->id() << ": " << records.size() << " record(s), " << failed << " without usable output\n";
    all.insert(all.end(), records.begin(), records.end());
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw UserError("cannot write " + a.out);
  write_extractions(out, all);
  return kOk;
}

struct VoteArgs {
  std::string in, out, config, reports, dictionaries_out;
  double threshold = -1;
  bool allow_any_count = false;
  bool no_embeddings = false;
};

int cmd_vote(const VoteArgs& a, Streams io) {
  PipelineConfig cfg;
  if (!a.config.empty()) cfg = load_pipeline_config(a.config);
  double threshold = a.threshold >= 0 ? a.threshold : cfg.similarity_threshold;
  if (threshold > 1) throw UserError("--threshold must be in [0, 1]");
  std::vector<std::string> priority = cfg.backends.empty() ? default_backend_priority() : cfg.priority();

  auto records = read_records(a.in, read_extractions);
  std::map<std::string, std::optional<Date>> imputed;
  if (!a.reports.empty())
    for (const auto& r : read_records(a.reports, read_reports)) imputed[r.fileid] = r.imputed_date;

  std::vector<std::string> order;
  std::map<std::string, std::vector<ExtractionRecord>> groups;
  for (const auto& r : records) {
    auto& g = groups[r.fileid];
    if (g.empty()) order.push_back(r.fileid);
    for (const auto& other : g)
      if (other.model_id == r.model_id) throw UserError("fileid " + r.fileid + ": two records from " + r.model_id);
    g.push_back(r);
  }
  for (const auto& id : order)
    if (!a.allow_any_count && groups[id].size() != 3)
      throw UserError("fileid " + id + ": expected 3 backend records, found " + std::to_string(groups[id].size()) +
                      " (use --allow-any-count)");

  TrigramEmbedding trigram;
  DictionaryOptions dopts;
  dopts.semantic_threshold = threshold;
  if (!a.no_embeddings) dopts.disease_provider = dopts.country_provider = &trigram;
  SynonymDictionaries dicts = build_dictionaries(records, dopts);
  if (!a.dictionaries_out.empty()) save_dictionaries(a.dictionaries_out, dicts);

  std::vector<EnsembleRecord> fused;
  for (const auto& id : order) {
    std::optional<Date> when = imputed.count(id) ? imputed[id] : parse_slug(id);
    fused.push_back(ensemble_record(groups[id], dicts, when, priority));
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw UserError("cannot write " + a.out);
  write_ensemble(out, fused);
  io.err << fused.size() << " ensemble record(s) written to " << a.out << "\n";
  return kOk;
}

struct BuildArgs {
  std::string in, out, base, superclass;
  std::size_t seq_start = 1;
};

int cmd_build_kg(const BuildArgs& a, Streams io) {
  KgConfig kc;
  if (!a.base.empty()) kc.base_iri = a.base;
  if (!a.superclass.empty()) kc.event_superclass = a.superclass;
  if (kc.base_iri.back() != '/' && kc.base_iri.back() != '#') throw UserError("--base must end with '/' or '#'");
  if (!rdf::is_absolute_iri(kc.base_iri) || !rdf::is_absolute_iri(kc.event_superclass))
    throw UserError("--base and --superclass must be absolute IRIs");
  kc.first_sequence = a.seq_start;

  auto records = load_ensemble(a.in);
  std::set<std::string> ids;
  for (const auto& r : records)
    if (!ids.insert(r.fileid).second) throw UserError("duplicate fileid " + r.fileid);
  rdf::Graph g = build_graph(records, kc);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  write_file((dir / "epidemicIE.ttl").string(), rdf::serialize_turtle(g, prefixes_for(kc.base_iri)));
  write_file((dir / "epidemicIE.rdf").string(), rdf::serialize_rdfxml(g, kc.base_iri));
  write_file((dir / "epidemicIE.csv").string(), emit_csv(records));
  io.err << g.size() << " triples from " << records.size() << " record(s) written to " << a.out << "\n";
  return kOk;
}

struct ServeArgs {
  std::string data, bind, static_dir, base;
};

int cmd_serve(const ServeArgs& a, Streams io) {
  ServiceConfig sc;
  sc.apply_env();
  if (!a.data.empty()) sc.data_path = a.data;
  if (!a.static_dir.empty()) sc.static_dir = a.static_dir;
  if (!a.base.empty()) sc.base_iri = sc.graph_name = a.base;
  if (!a.bind.empty()) {
    auto colon = a.bind.rfind(':');
    try {
      sc.port = std::stoi(colon == std::string::npos ? a.bind : a.bind.substr(colon + 1));
    } catch (const std::exception&) {
      throw UserError("bad --bind '" + a.bind + "'");
    }
    if (colon != std::string::npos && colon > 0) sc.host = a.bind.substr(0, colon);
  }
  auto store = std::make_shared<TripleStore>();
  LinkedDataService service(sc, store);
  if (!sc.data_path.empty()) io.err << "loaded " << service.load_data() << " triples from " << sc.data_path << "\n";
  io.err << "serving on " << sc.host << ":" << sc.port << "\n";
  if (!service.serve()) throw UserError("cannot bind " + sc.host + ":" + std::to_string(sc.port));
  return kOk;
}

struct EvalArgs {
  std::string pred, gold, json_out, dictionaries;
  double threshold = 0.8;
  bool no_embeddings = false;
};

int cmd_eval(const EvalArgs& a, Streams io) {
  auto preds = load_ensemble(a.pred);
  auto golds = parse_gold_csv(read_file(a.gold));
  SynonymDictionaries dicts;
  if (!a.dictionaries.empty()) {
    dicts = load_dictionaries(a.dictionaries);
  } else {
    std::vector<std::string> diseases, countries;
    for (const auto& p : preds) {
      if (p.disease) diseases.push_back(*p.disease);
      if (p.country) countries.push_back(*p.country);
    }
    for (const auto& g : golds) {
      if (g.disease) diseases.push_back(*g.disease);
      if (g.country) countries.push_back(*g.country);
    }
    dicts = cluster_values(diseases, countries, a.threshold, !a.no_embeddings);
  }
  MetricsReport report = evaluate_corpus(preds, golds, dicts);
  io.out << report.to_table();
  if (!a.json_out.empty()) write_file(a.json_out, report.to_json());
  return kOk;
}

struct StatsArgs {
  std::string in, dictionaries, series, who;
  std::vector<int> exclude_years;
  std::size_t top = 10;
  bool csv = false;
};

int cmd_stats(const StatsArgs& a, Streams io) {
  auto records = load_ensemble(a.in);
  SynonymDictionaries dicts;
  if (!a.dictionaries.empty()) {
    dicts = load_dictionaries(a.dictionaries);
  } else {
    std::vector<std::string> diseases, countries;
    for (const auto& r : records) {
      if (r.disease) diseases.push_back(*r.disease);
      if (r.country) countries.push_back(*r.country);
    }
    dicts = cluster_values(diseases, countries, 0.8, false);
  }

  if (!a.series.empty()) {
    auto bar = a.series.find('|');
    if (bar == std::string::npos) throw UserError("--series expects 'disease|country'");
    auto series = time_series(records, a.series.substr(0, bar), a.series.substr(bar + 1), &dicts);
    if (a.who.empty()) {
      io.out << "date,cases,fileid\n";
      for (const auto& p : series) io.out << format_iso(p.date) << "," << p.cases << "," << csv::escape(p.fileid) << "\n";
      return kOk;
    }
    // WHO yearly counts: CSV with columns year,cases.
    std::map<int, double> who;
    auto rows = csv::parse(read_file(a.who));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() < 2) throw UserError(a.who + ": row " + std::to_string(i + 1) + " needs year,cases");
      try {
        who[std::stoi(rows[i][0])] = std::stod(rows[i][1]);
      } catch (const std::exception&) {
        throw UserError(a.who + ": bad row " + std::to_string(i + 1));
      }
    }
    std::vector<double> x, y;
    for (const auto& [year, total] : yearly_aggregate(series)) {
      if (!who.count(year)) continue;
      if (std::find(a.exclude_years.begin(), a.exclude_years.end(), year) != a.exclude_years.end()) continue;
      x.push_back(who[year]);
      y.push_back(static_cast<double>(total));
    }
    RegressionResult r = ols_regression(x, y);
    char buf[256];
    std::snprintf(buf, sizeof buf, "n=%zu slope=%.6g intercept=%.6g ci95=[%.4f, %.4f] p=%.3g r=%.4f\n", r.n, r.slope,
                  r.intercept, r.ci95_low, r.ci95_high, r.p_value, r.r);
    io.out << buf;
    return kOk;
  }

  DatasetSummary s = dataset_summary(records, &dicts);
  auto emit = [&](const char* title, CountKey key) {
    auto top = top_counts(records, key, a.top, &dicts);
    if (a.csv) {
      io.out << "label,count\n";
      for (const auto& t : top) io.out << csv::escape(t.label) << "," << t.count << "\n";
      return;
    }
    io.out << "\n" << title << "\n";
    for (const auto& t : top) {
      char buf[512];
      std::snprintf(buf, sizeof buf, "  %-40s %6zu\n", t.label.c_str(), t.count);
      io.out << buf;
    }
  };
  if (a.csv) {
    io.out << "entries,unique_diseases,unique_countries\n"
           << s.entries << "," << s.unique_diseases << "," << s.unique_countries << "\n";
  } else {
    io.out << "entries           " << s.entries << "\nunique diseases   " << s.unique_diseases
           << "\nunique countries  " << s.unique_countries << "\n";
  }
  emit("top diseases", CountKey::disease);
  emit("top countries", CountKey::country);
  emit("top country - disease pairs", CountKey::pair);
  return kOk;
}

struct QueryArgs {
  std::string data, query, format = "csv";
};

bool run_query(const std::string& text, const StoreSnapshot& snap, sparql::ResultFormat fmt, Streams io) {
  try {
    auto q = sparql::parse_query(text);
    if (q.form == sparql::Form::describe) {
      io.out << rdf::serialize_turtle(sparql::describe(q, snap));
    } else {
      io.out << sparql::serialize_results(sparql::evaluate(q, snap), fmt);
    }
    return true;
  } catch (const sparql::QueryError& e) {
    io.err << "query error: " << e.what() << "\n";
    return false;
  }
}

int cmd_query(const QueryArgs& a, Streams io) {
  auto fmt = result_format(a.format);
  TripleStore store;
  const std::string name{rdf::vocab::ekg};
  store.load_graph(name, rdf::parse_turtle(read_file(a.data)));
  store.add_alias("eKG", name);
  auto snap = store.snapshot();
  if (!a.query.empty()) return run_query(a.query, *snap, fmt, io) ? kOk : kUserError;

  // REPL: a query ends at a blank line, a line ending in ';', or EOF.
  std::string buffer, line;
  bool ok = true;
  auto flush = [&] {
    if (buffer.find_first_not_of(" \t\r\n") != std::string::npos) ok = run_query(buffer, *snap, fmt, io) && ok;
    buffer.clear();
  };
  while (std::getline(io.in, line)) {
    std::string t = line;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    if (t.empty()) {
      flush();
    } else if (t.back() == ';') {
      t.pop_back();
      buffer += t + "\n";
      flush();
    } else {
      buffer += line + "\n";
    }
  }
  flush();
  return ok ? kOk : kUserError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Epidemiological knowledge graph pipeline", args.empty() ? "ekg" : args[0]};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  IngestArgs ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Load a report corpus into reports.jsonl");
  s_ingest->add_option("--corpus", ingest.corpus, "Directory of .txt/.html reports or a fileid,path manifest")->required();
  s_ingest->add_option("--out", ingest.out, "Output JSON-lines file")->required();

  ExtractArgs extract;
  auto* s_extract = app.add_subcommand("extract", "Run backends over reports.jsonl");
  s_extract->add_option("--in", extract.in, "reports.jsonl")->required();
  s_extract->add_option("--out", extract.out, "Output extractions.jsonl")->required();
  s_extract->add_option("--config", extract.config, "Pipeline config file");
  s_extract->add_option("--backend", extract.backend, "Backend model id");
  s_extract->add_option("--url", extract.url, "Backend completion URL");
  s_extract->add_option("--mock", extract.mock, "Mock script JSON instead of a live backend");
  s_extract->add_option("--audit", extract.audit, "Write raw completions as JSON lines");
  s_extract->add_option("--jobs", extract.jobs, "Reports processed concurrently");
  s_extract->add_option("--attempts", extract.attempts, "Attempts per backend call");
  s_extract->add_option("--max-context", extract.max_context, "Context length in tokens");

  VoteArgs vote;
  auto* s_vote = app.add_subcommand("vote", "Fuse per-backend records by majority vote");
  s_vote->add_option("--in", vote.in, "extractions.jsonl")->required();
  s_vote->add_option("--out", vote.out, "Output ensemble.jsonl")->required();
  s_vote->add_option("--config", vote.config, "Pipeline config file (backend priority, threshold)");
  s_vote->add_option("--reports", vote.reports, "reports.jsonl for imputed dates");
  s_vote->add_option("--dictionaries-out", vote.dictionaries_out, "Write the synonym dictionaries as JSON");
  s_vote->add_option("--threshold", vote.threshold, "Semantic similarity threshold");
  s_vote->add_flag("--allow-any-count", vote.allow_any_count, "Accept other than three records per report");
  s_vote->add_flag("--no-embeddings", vote.no_embeddings, "Skip the embedding similarity check");

  BuildArgs build;
  auto* s_build = app.add_subcommand("build-kg", "Write epidemicIE.ttl, .rdf and .csv");
  s_build->add_option("--in", build.in, "ensemble.jsonl or ensemble .csv")->required();
  s_build->add_option("--out", build.out, "Output directory")->required();
  s_build->add_option("--base", build.base, "Base IRI for minted resources");
  s_build->add_option("--superclass", build.superclass, "Superclass IRI of every event class");
  s_build->add_option("--seq-start", build.seq_start, "First record sequence number");

  ServeArgs serve;
  auto* s_serve = app.add_subcommand("serve", "Serve /sparql, /describe and the events API");
  s_serve->add_option("--data", serve.data, "Turtle file to load (default $EKG_DATA)");
  s_serve->add_option("--bind", serve.bind, "host:port (default $EKG_BIND or 127.0.0.1:8080)");
  s_serve->add_option("--static", serve.static_dir, "UI bundle directory");
  s_serve->add_option("--base", serve.base, "Base IRI");

  EvalArgs eval;
  auto* s_eval = app.add_subcommand("eval", "Score ensemble records against a gold CSV");
  s_eval->add_option("--pred", eval.pred, "ensemble.jsonl or .csv")->required();
  s_eval->add_option("--gold", eval.gold, "Gold CSV")->required();
  s_eval->add_option("--json", eval.json_out, "Also write the report as JSON");
  s_eval->add_option("--dictionaries", eval.dictionaries, "Synonym dictionaries JSON from vote");
  s_eval->add_option("--threshold", eval.threshold, "Semantic similarity threshold");
  s_eval->add_flag("--no-embeddings", eval.no_embeddings, "Skip the embedding similarity check");

  StatsArgs stats;
  auto* s_stats = app.add_subcommand("stats", "Dataset statistics, time series and regression");
  s_stats->add_option("--in", stats.in, "ensemble.jsonl or .csv")->required();
  s_stats->add_option("--top", stats.top, "Entries per ranking");
  s_stats->add_option("--dictionaries", stats.dictionaries, "Synonym dictionaries JSON from vote");
  s_stats->add_option("--series", stats.series, "'disease|country': print the case time series");
  s_stats->add_option("--who", stats.who, "With --series: regress yearly totals on this year,cases CSV");
  s_stats->add_option("--exclude-year", stats.exclude_years, "Years left out of the regression");
  s_stats->add_flag("--csv", stats.csv, "CSV instead of aligned text");

  QueryArgs query;
  auto* s_query = app.add_subcommand("query", "Run SPARQL against a Turtle file (REPL on stdin without a query)");
  s_query->add_option("--data", query.data, "Turtle file")->required();
  s_query->add_option("--format", query.format, "json, xml, csv or html");
  s_query->add_option("query", query.query, "SPARQL text");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("ekg");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUserError;
  }

  set_log_level(verbose ? LogLevel::info : LogLevel::warning);
  Streams io{in, out, err};
  try {
    if (*s_ingest) return cmd_ingest(ingest, io);
    if (*s_extract) return cmd_extract(extract, io);
    if (*s_vote) return cmd_vote(vote, io);
    if (*s_build) return cmd_build_kg(build, io);
    if (*s_serve) return cmd_serve(serve, io);
    if (*s_eval) return cmd_eval(eval, io);
    if (*s_stats) return cmd_stats(stats, io);
    if (*s_query) return cmd_query(query, io);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace ekg::cli
