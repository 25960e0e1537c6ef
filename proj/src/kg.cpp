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

#include "ekg/kg.hpp"

#include <map>
#include <stdexcept>

#include "ekg/csv.hpp"

namespace ekg {
namespace {

using rdf::Term;
using rdf::Triple;

Term prop(const KgConfig& cfg, std::string_view local) { return Term::iri(cfg.base_iri + std::string(local)); }

std::string cell(const std::optional<std::string>& v) { return v ? *v : std::string{}; }
std::string cell(const std::optional<Date>& v) { return v ? format_slash(*v) : std::string{}; }
std::string cell(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string{}; }

}  // namespace

std::set<Triple> schema_axioms(const KgConfig& cfg) {
  const auto sub = Term::iri(rdf::vocab::rdfs_subclass_of());
  const std::string obo(rdf::vocab::obo), dcterms(rdf::vocab::dcterms);
  return {
      {prop(cfg, kVirusExtracted), sub, Term::iri(obo + "IDO_0000436")},
      {prop(cfg, kCountryExtracted), sub, Term::iri(obo + "GEO_000000372")},
      {prop(cfg, kDateExtracted), sub, Term::iri(dcterms + "date")},
      {prop(cfg, kDateImputed), sub, Term::iri(dcterms + "date")},
      {prop(cfg, kCasesExtracted), sub, Term::iri(obo + "IDO_0000511")},
      {prop(cfg, kDeathsExtracted), sub, Term::iri(obo + "IDO_0000489")},
  };
}

std::string record_iri(std::size_t seq, const KgConfig& cfg) {
  return cfg.base_iri + "don-record" + std::to_string(seq);
}

std::set<Triple> record_to_axioms(const EnsembleRecord& r, std::size_t seq, const KgConfig& cfg) {
  if (r.fileid.empty()) throw std::invalid_argument("record_to_axioms: empty fileid");
  const auto s = Term::iri(record_iri(seq, cfg));
  std::set<Triple> out = {
      {s, Term::iri(rdf::vocab::rdf_type()), Term::iri(rdf::vocab::owl_class())},
      {s, Term::iri(rdf::vocab::rdfs_subclass_of()), Term::iri(cfg.event_superclass)},
      {s, Term::iri(rdf::vocab::rdfs_label()), Term::literal(r.fileid)},
  };
  if (r.disease) out.insert({s, prop(cfg, kVirusExtracted), Term::literal(*r.disease)});
  if (r.country) out.insert({s, prop(cfg, kCountryExtracted), Term::literal(*r.country)});
  if (r.date) out.insert({s, prop(cfg, kDateExtracted), Term::literal(format_iso(*r.date), rdf::vocab::xsd_date())});
  if (r.imputed_date)
    out.insert({s, prop(cfg, kDateImputed), Term::literal(format_iso(*r.imputed_date), rdf::vocab::xsd_date())});
  if (r.cases) out.insert({s, prop(cfg, kCasesExtracted), Term::literal(std::to_string(*r.cases))});
  if (r.deaths) out.insert({s, prop(cfg, kDeathsExtracted), Term::literal(std::to_string(*r.deaths))});
  return out;
}

rdf::Graph build_graph(const std::vector<EnsembleRecord>& records, const KgConfig& cfg) {
  rdf::Graph g(cfg.base_iri);
  g.insert_all(schema_axioms(cfg));
  std::size_t seq = cfg.first_sequence;
  for (const auto& r : records) g.insert_all(record_to_axioms(r, seq++, cfg));
  return g;
}

std::string emit_csv(const std::vector<EnsembleRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += csv::join({r.fileid, cell(r.disease), cell(r.country), cell(r.date), cell(r.imputed_date),
                      cell(r.cases), cell(r.deaths)});
    out += '\n';
  }
  return out;
}

std::vector<EnsembleRecord> parse_csv(std::string_view text) {
  auto rows = csv::parse(text);
  std::vector<EnsembleRecord> out;
  if (rows.empty()) return out;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
  if (!col.count("fileid")) throw std::runtime_error("csv: missing fileid column");

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    auto get = [&](std::string_view name) -> std::string {
      auto it = col.find(std::string(name));
      if (it == col.end() || it->second >= row.size()) return {};
      return row[it->second];
    };
    auto fail = [&](std::string_view what, const std::string& v) {
      return std::runtime_error("csv row " + std::to_string(r + 1) + " (" + get("fileid") + "): bad " +
                                std::string(what) + " '" + v + "'");
    };
    EnsembleRecord rec;
    rec.fileid = get("fileid");
    if (auto v = get(kVirusExtracted); !v.empty()) rec.disease = v;
    if (auto v = get(kCountryExtracted); !v.empty()) rec.country = v;
    if (auto v = get(kDateExtracted); !v.empty()) {
      rec.date = parse_slash_or_iso_date(v);
      if (!rec.date) throw fail(kDateExtracted, v);
    }
    if (auto v = get(kDateImputed); !v.empty()) {
      rec.imputed_date = parse_slash_or_iso_date(v);
      if (!rec.imputed_date) throw fail(kDateImputed, v);
    }
    if (auto v = get(kCasesExtracted); !v.empty()) {
      rec.cases = parse_count(v);
      if (!rec.cases) throw fail(kCasesExtracted, v);
    }
    if (auto v = get(kDeathsExtracted); !v.empty()) {
      rec.deaths = parse_count(v);
      if (!rec.deaths) throw fail(kDeathsExtracted, v);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace ekg
