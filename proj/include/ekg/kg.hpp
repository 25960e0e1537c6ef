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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ekg/rdf.hpp"
#include "ekg/voting.hpp"

namespace ekg {

struct KgConfig {
  std::string base_iri{rdf::vocab::ekg};
  // Superclass of every outbreak-event class (planned_process).
  std::string event_superclass = std::string(rdf::vocab::obo) + "OBI_0000011";
  std::size_t first_sequence = 1;
};

/// Property names under the base namespace, in CSV column order.
inline constexpr std::string_view kVirusExtracted = "virus_extracted";
inline constexpr std::string_view kCountryExtracted = "country_extracted";
inline constexpr std::string_view kDateExtracted = "date_extracted";
inline constexpr std::string_view kDateImputed = "date_cases_Imputed";
inline constexpr std::string_view kCasesExtracted = "cases_extracted";
inline constexpr std::string_view kDeathsExtracted = "deaths_extracted";

/// The six subclass links from extraction properties to IDO/GEO/Dublin Core classes.
std::set<rdf::Triple> schema_axioms(const KgConfig& cfg = {});

/// `<base>don-record<seq>` typed owl:Class with label = fileid and one
/// triple per populated field.
std::set<rdf::Triple> record_to_axioms(const EnsembleRecord& r, std::size_t seq, const KgConfig& cfg = {});

std::string record_iri(std::size_t seq, const KgConfig& cfg = {});

/// Schema axioms plus records numbered from cfg.first_sequence in input order.
rdf::Graph build_graph(const std::vector<EnsembleRecord>& records, const KgConfig& cfg = {});

inline constexpr std::string_view kCsvHeader =
    "fileid,virus_extracted,country_extracted,date_extracted,date_cases_Imputed,cases_extracted,deaths_extracted";

/// Header plus one LF-terminated row per record; dates as YYYY/MM/DD.
std::string emit_csv(const std::vector<EnsembleRecord>& records);

/// Reads emit_csv output (LF or CRLF). Columns are located by header name so
/// extra columns are tolerated. Throws std::runtime_error naming the row on
/// malformed values.
std::vector<EnsembleRecord> parse_csv(std::string_view text);

}  // namespace ekg
