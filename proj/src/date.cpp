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

#include "ekg/date.hpp"

#include <cstdio>

namespace ekg {
namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::optional<Date> parse_with_sep(std::string_view text, char sep) {
  if (text.size() != 10 || text[4] != sep || text[7] != sep) return std::nullopt;
  auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
  Date date{std::chrono::year{to_int(y)}, std::chrono::month{static_cast<unsigned>(to_int(m))},
            std::chrono::day{static_cast<unsigned>(to_int(d))}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_with_sep(const Date& d, char sep) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%c%02u%c%02u", static_cast<int>(d.year()), sep,
                static_cast<unsigned>(d.month()), sep, static_cast<unsigned>(d.day()));
  return buf;
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) { return parse_with_sep(text, '-'); }

std::optional<Date> parse_slash_or_iso_date(std::string_view text) {
  if (auto d = parse_with_sep(text, '/')) return d;
  return parse_with_sep(text, '-');
}

std::string format_iso(const Date& d) { return format_with_sep(d, '-'); }
std::string format_slash(const Date& d) { return format_with_sep(d, '/'); }

}  // namespace ekg
