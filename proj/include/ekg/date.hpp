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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace ekg {

using Date = std::chrono::year_month_day;

/// Strict `YYYY-MM-DD`; anything else (including impossible days) is absent.
std::optional<Date> parse_iso_date(std::string_view text);

/// Accepts `YYYY/MM/DD` or `YYYY-MM-DD`.
std::optional<Date> parse_slash_or_iso_date(std::string_view text);

std::string format_iso(const Date& d);    // 2018-05-19
std::string format_slash(const Date& d);  // 2018/05/19

inline int year_of(const Date& d) { return static_cast<int>(d.year()); }

}  // namespace ekg
