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
#include <vector>

namespace ekg::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader. Accepts LF or CRLF line ends; a trailing newline does not
/// produce an empty row.
std::vector<Row> parse(std::string_view text);

/// Quotes the field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

std::string join(const Row& row);

}  // namespace ekg::csv
