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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ekg/rdf.hpp"

namespace ekg::rdf {

class TurtleError : public std::runtime_error {
 public:
  TurtleError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Turtle with the standard prefix block, subjects grouped with `;`.
std::string serialize_turtle(const Graph& g,
                             const std::vector<std::pair<std::string, std::string>>& prefixes = standard_prefixes());

/// Parses Turtle without blank nodes or collections. Throws TurtleError with
/// a 1-based line and column.
Graph parse_turtle(std::string_view text, std::string graph_name = {});

}  // namespace ekg::rdf
