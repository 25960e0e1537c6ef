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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "criteria.hpp"
#include "ekg/cli.hpp"
#include "ekg/kg.hpp"
#include "ekg/records_io.hpp"
#include "ekg/turtle.hpp"
#include "json.hpp"

using namespace ekg;
namespace t = ekg::testing;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date{std::chrono::year(y), std::chrono::month(m), std::chrono::day(d)}; }

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string golden(const std::string& name) { return t::fixture_path("golden/" + name); }

}  // namespace

// ---------------------------------------------------------------- records_io

TEST(Records, ReportsRoundTrip) {
  std::vector<DonReport> in = {
      {"05-june-2018-nipah-virus-india-en", "Nipah virus - India", "Line one.\nLine \"two\".\t\xC3\xA9", ymd(2018, 6, 5),
       "https://www.who.int/csr/don/05-june-2018-nipah-virus-india/en/"},
      {"bare", "", "body", std::nullopt, std::nullopt},
  };
  std::stringstream ss;
  write_reports(ss, in);
  const std::string text = ss.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(read_reports(ss), in);
}

TEST(Records, ExtractionsRoundTrip) {
  ExtractionRecord a;
  a.fileid = "x";
  a.model_id = "zephyr-7b-beta";
  a.disease = "Cholera";
  a.date = ymd(2017, 9, 15);
  a.cases = 0;
  a.deaths = 12;
  ExtractionRecord b;
  b.fileid = "x";
  b.model_id = "mistral-7b-openorca";
  b.parse_failed = true;
  b.error = "no JSON object in completion";
  std::stringstream ss;
  write_extractions(ss, {a, b});
  EXPECT_EQ(read_extractions(ss), (std::vector<ExtractionRecord>{a, b}));
}

TEST(Records, EnsembleRoundTripRandom) {
  std::mt19937_64 rng(17);
  std::vector<EnsembleRecord> in;
  for (int i = 0; i < 200; ++i) in.push_back(t::random_record(rng, i));
  std::stringstream ss;
  write_ensemble(ss, in);
  auto out = read_ensemble(ss);
  ASSERT_EQ(out.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_TRUE(out[i].same_fields(in[i])) << to_jsonl(in[i]);
}

TEST(Records, ErrorsNameLineAndFileid) {
  auto message = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      read_ensemble(in);
    } catch (const RecordError& e) {
      return e.what();
    }
    return "";
  };
  const std::string ok = R"({"fileid":"a","disease":null,"country":null,"date":null,"imputed_date":null,"cases":null,"deaths":null})";
  EXPECT_EQ(message(ok + "\n\n" + "{not json\n").rfind("line 3: invalid JSON", 0), 0u);
  EXPECT_EQ(message(ok + "\n[1,2]\n").rfind("line 2: expected a JSON object", 0), 0u);
  auto bad_cases = message(R"({"fileid":"r7","cases":"many"})");
  EXPECT_NE(bad_cases.find("line 1 (fileid r7)"), std::string::npos) << bad_cases;
  EXPECT_NE(bad_cases.find("cases"), std::string::npos);
  EXPECT_NE(message(R"({"fileid":"r8","date":"2018/05/19"})").find("YYYY-MM-DD"), std::string::npos);
  EXPECT_NE(message(R"({"fileid":""})").find("empty fileid"), std::string::npos);
  EXPECT_NE(message(R"({"disease":"x"})").find("fileid"), std::string::npos);
  std::istringstream crlf(ok + "\r\n" + ok + "\r\n");
  EXPECT_EQ(read_ensemble(crlf).size(), 2u);
}

// ---------------------------------------------------------------- config

TEST(Config, ParsesSectionsAndSortsBackends) {
  std::istringstream in(
      "# comment\ncorpus_path = docs/\noutput_dir = out\nbase_iri = http://example.org/kg/\n"
      "similarity_threshold = 0.75\n[chunking]\nmax_context_tokens = 4096\n"
      "[backend:b-model]\nurl = http://localhost:1/complete\npriority = 2\n"
      "[backend:a-model]\nmock = a.json\npriority = 2\n"
      "[backend:z-model]\nmock = z.json\npriority = 1\n");
  auto cfg = parse_pipeline_config(in);
  EXPECT_EQ(cfg.corpus_path, "docs/");
  EXPECT_EQ(cfg.output_dir, "out");
  EXPECT_EQ(cfg.base_iri, "http://example.org/kg/");
  EXPECT_DOUBLE_EQ(cfg.similarity_threshold, 0.75);
  EXPECT_EQ(cfg.chunking.max_context_tokens, 4096);
  EXPECT_EQ(cfg.priority(), (std::vector<std::string>{"z-model", "a-model", "b-model"}));
  EXPECT_EQ(cfg.backends[2].url, "http://localhost:1/complete");
}

TEST(Config, RejectsUnknownAndBadKeys) {
  auto fails = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_pipeline_config(in);
    } catch (const std::runtime_error& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails("corpus = x\n", "corpus"));
  EXPECT_TRUE(fails("[chunking]\nmax_tokens = 5\n", "chunking.max_tokens"));
  EXPECT_TRUE(fails("[backend:m]\nmock = m.json\nmodel = x\n", "m.model"));
  EXPECT_TRUE(fails("[backend:m]\npriority = 1\n", "needs url or mock"));
  EXPECT_TRUE(fails("[extras]\nk = v\n", "extras"));
  EXPECT_TRUE(fails("similarity_threshold = 1.5\n", "similarity_threshold"));
  EXPECT_TRUE(fails("similarity_threshold = high\n", "similarity_threshold"));
  EXPECT_TRUE(fails("[chunking]\nmax_context_tokens = 100\n", ""));
}

TEST(Config, RelativePathsFollowTheConfigFile) {
  auto cfg = load_pipeline_config(golden("pipeline.ini"));
  ASSERT_EQ(cfg.backends.size(), 3u);
  for (const auto& b : cfg.backends) {
    EXPECT_TRUE(std::filesystem::path(b.mock).is_absolute() ||
                b.mock.rfind(std::string(EKG_FIXTURES), 0) == 0) << b.mock;
    EXPECT_TRUE(std::filesystem::exists(b.mock)) << b.mock;
  }
  EXPECT_EQ(cfg.priority().front(), "meta-llama-3-70b-instruct");

  t::ScratchDir dir("cfg");
  write(dir / "p.ini", "corpus_path = /abs/corpus\noutput_dir = rel\n[backend:m]\nmock = sub/m.json\n");
  auto c = load_pipeline_config(dir / "p.ini");
  EXPECT_EQ(c.corpus_path, "/abs/corpus");
  EXPECT_EQ(c.output_dir, "rel");
  EXPECT_EQ(c.backends[0].mock, dir / "sub/m.json");
  EXPECT_THROW(load_pipeline_config(dir / "missing.ini"), std::runtime_error);
}

// ---------------------------------------------------------------- cli

TEST(Cli, GoldenPipelineCriterion) {
  auto r = t::check_golden_run();
  EXPECT_EQ(r.verdict, t::Verdict::pass) << r.detail;
}

TEST(Cli, ExitCodes) {
  std::string out, err;
  EXPECT_EQ(t::run_cli({}, &out, &err), cli::kUserError);
  EXPECT_EQ(t::run_cli({"frobnicate"}, &out, &err), cli::kUserError);
  EXPECT_EQ(t::run_cli({"ingest", "--out", "x.jsonl"}, &out, &err), cli::kUserError);
  EXPECT_EQ(t::run_cli({"ingest", "--corpus", "/nonexistent/dir", "--out", "/tmp/never.jsonl"}, &out, &err),
            cli::kUserError);
  EXPECT_FALSE(err.empty());
  EXPECT_EQ(t::run_cli({"--help"}, &out, &err), cli::kOk);
  EXPECT_NE(out.find("build-kg"), std::string::npos);

  t::ScratchDir dir("exit");
  write(dir / "bad.jsonl", "{\"fileid\":\"a\",\"cases\":\"x\"}\n");
  err.clear();
  EXPECT_EQ(t::run_cli({"build-kg", "--in", dir / "bad.jsonl", "--out", dir / "kg"}, &out, &err), cli::kUserError);
  EXPECT_NE(err.find("line 1"), std::string::npos) << err;
}

TEST(Cli, BuildKgFromCsvMatchesJsonl) {
  t::ScratchDir dir("csvkg");
  ASSERT_EQ(t::run_cli({"build-kg", "--in", golden("expected/epidemicIE.csv"), "--out", dir / "a", "--seq-start",
                        "2738"}),
            cli::kOk);
  EXPECT_EQ(t::read_text(dir / "a/epidemicIE.ttl"), t::read_fixture("golden/expected/epidemicIE.ttl"));
  EXPECT_EQ(t::read_text(dir / "a/epidemicIE.csv"), t::read_fixture("golden/expected/epidemicIE.csv"));

  ASSERT_EQ(t::run_cli({"build-kg", "--in", golden("expected/ensemble.jsonl"), "--out", dir / "b", "--base",
                        "http://example.org/kg/"}),
            cli::kOk);
  auto g = rdf::parse_turtle(t::read_text(dir / "b/epidemicIE.ttl"));
  EXPECT_TRUE(g.contains({rdf::Term::iri("http://example.org/kg/don-record1"), rdf::Term::iri(rdf::vocab::rdfs_label()),
                          rdf::Term::literal("15-january-2016-zika-virus-trinidad-and-tobago-en")}));
  EXPECT_EQ(t::read_rdfxml(t::read_text(dir / "b/epidemicIE.rdf")), g);
}

TEST(Cli, QueryCommandAndRepl) {
  const std::string ttl = golden("expected/epidemicIE.ttl");
  std::string out, err;
  ASSERT_EQ(t::run_cli({"query", "--data", ttl, "SELECT COUNT(*) WHERE { ?s ?p ?o }"}, &out, &err), cli::kOk) << err;
  EXPECT_NE(out.find("31"), std::string::npos) << out;

  out.clear();
  std::string q;
  for (const auto& uq : t::usage_queries())
    if (uq.name == "nipah") q = uq.text;
  ASSERT_EQ(t::run_cli({"query", "--data", ttl, "--format", "json", q}, &out, &err), cli::kOk);
  auto doc = nlohmann::json::parse(out);
  EXPECT_EQ(doc["results"]["bindings"][0]["event"]["value"], std::string(rdf::vocab::ekg) + "don-record2740");

  out.clear();
  err.clear();
  const std::string script =
      "SELECT ?s\nWHERE { ?s <" + std::string(rdf::vocab::rdfs_label()) + "> \"31-may-2018-nipah-virus-india-en\" };\n"
      "SELECT broken\n\n"
      "SELECT COUNT(*) WHERE { ?s ?p ?o }\n";
  EXPECT_EQ(t::run_cli({"query", "--data", ttl}, &out, &err, script), cli::kUserError);
  EXPECT_NE(out.find("don-record2740"), std::string::npos) << out;
  EXPECT_NE(out.find("31"), std::string::npos);
  EXPECT_NE(err.find("query error"), std::string::npos);

  EXPECT_EQ(t::run_cli({"query", "--data", ttl, "--format", "yaml", "SELECT * WHERE { ?s ?p ?o }"}, &out, &err),
            cli::kUserError);
}

TEST(Cli, EvalWritesTableAndJson) {
  t::ScratchDir dir("eval");
  std::string out, err;
  ASSERT_EQ(t::run_cli({"eval", "--pred", t::fixture_path("eval/predictions.jsonl"), "--gold",
                        t::fixture_path("eval/gold.csv"), "--dictionaries", t::fixture_path("eval/dictionaries.json"),
                        "--json", dir / "m.json"},
                       &out, &err),
            cli::kOk)
      << err;
  EXPECT_NE(out.find("disease"), std::string::npos);
  auto doc = nlohmann::json::parse(t::read_text(dir / "m.json"));
  auto table = csv::parse(t::read_fixture("eval/expected_confusion.csv"));
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& task = doc.at(table[i][0]);
    EXPECT_EQ(task["tp"], std::stoi(table[i][1]));
    EXPECT_EQ(task["fp"], std::stoi(table[i][2]));
    EXPECT_EQ(task["fn"], std::stoi(table[i][3]));
    EXPECT_EQ(task["tn"], std::stoi(table[i][4]));
  }
}

TEST(Cli, StatsSummarySeriesAndRegression) {
  t::ScratchDir dir("stats");
  std::vector<EnsembleRecord> recs;
  const std::pair<int, int> yearly[] = {{2013, 30}, {2014, 300}, {2015, 200}, {2016, 90}, {2017, 120}};
  int i = 0;
  for (auto [year, total] : yearly) {
    for (int part : {total / 3, total - total / 3}) {
      EnsembleRecord r;
      r.fileid = "mers-" + std::to_string(i++);
      r.disease = i % 2 ? "MERS-CoV" : "MERS-CoV ";
      r.country = "Saudi Arabia";
      r.date = ymd(year, 1 + i % 12, 3);
      r.cases = part;
      recs.push_back(r);
    }
  }
  EnsembleRecord other;
  other.fileid = "cholera";
  other.disease = "Cholera";
  other.country = "Yemen";
  recs.push_back(other);
  std::ofstream(dir / "e.jsonl") << [&] {
    std::stringstream ss;
    write_ensemble(ss, recs);
    return ss.str();
  }();

  std::string out, err;
  ASSERT_EQ(t::run_cli({"stats", "--in", dir / "e.jsonl", "--csv"}, &out, &err), cli::kOk) << err;
  EXPECT_EQ(out.rfind("entries,unique_diseases,unique_countries\n11,2,2\n", 0), 0u) << out;
  EXPECT_NE(out.find("Saudi Arabia - MERS-CoV,10"), std::string::npos) << out;

  out.clear();
  ASSERT_EQ(t::run_cli({"stats", "--in", dir / "e.jsonl", "--series", "MERS-CoV|Saudi Arabia"}, &out, &err), cli::kOk);
  EXPECT_EQ(out.rfind("date,cases,fileid\n", 0), 0u);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 11);

  // yearly totals are exactly 2 * who + 10
  std::string who = "year,cases\n";
  for (auto [year, total] : yearly) who += std::to_string(year) + "," + std::to_string((total - 10) / 2.0) + "\n";
  write(dir / "who.csv", who);
  out.clear();
  ASSERT_EQ(t::run_cli({"stats", "--in", dir / "e.jsonl", "--series", "MERS-CoV|Saudi Arabia", "--who", dir / "who.csv"},
                       &out, &err),
            cli::kOk)
      << err;
  EXPECT_NE(out.find("n=5 slope=2 intercept=10"), std::string::npos) << out;
  out.clear();
  ASSERT_EQ(t::run_cli({"stats", "--in", dir / "e.jsonl", "--series", "MERS-CoV|Saudi Arabia", "--who", dir / "who.csv",
                        "--exclude-year", "2013"},
                       &out, &err),
            cli::kOk);
  EXPECT_NE(out.find("n=4 "), std::string::npos) << out;

  EXPECT_EQ(t::run_cli({"stats", "--in", dir / "e.jsonl", "--series", "no-bar"}, &out, &err), cli::kUserError);
}
