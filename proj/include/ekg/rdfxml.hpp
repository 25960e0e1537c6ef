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

#include <string>
#include <string_view>

#include "ekg/rdf.hpp"

namespace ekg::rdf {

/// RDF/XML with the base IRI as default namespace and xml:base. Subjects typed
/// owl:Class become `<owl:Class rdf:about=...>` elements; others are
/// rdf:Description. Throws std::invalid_argument for a predicate that cannot
/// be written as a qualified name or a literal with characters XML 1.0 forbids.
std::string serialize_rdfxml(const Graph& g, std::string_view base_iri = vocab::ekg);

}  // namespace ekg::rdf
