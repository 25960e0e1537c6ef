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

#include "ekg/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace ekg {
namespace {

std::atomic<LogLevel> g_level{LogLevel::warning};
std::mutex g_mu;
std::function<void(LogLevel, const std::string&)> g_sink;

const char* label(LogLevel level) {
  switch (level) {
    case LogLevel::debug: return "debug";
    case LogLevel::info: return "info";
    case LogLevel::warning: return "warning";
    default: return "error";
  }
}

}  // namespace

void set_log_level(LogLevel level) { g_level = level; }

void set_log_sink(std::function<void(LogLevel, const std::string&)> sink) {
  std::lock_guard lock(g_mu);
  g_sink = std::move(sink);
}

void log(LogLevel level, const std::string& message) {
  if (level < g_level.load()) return;
  std::lock_guard lock(g_mu);
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  std::cerr << "[ekg " << label(level) << "] " << message << '\n';
}

}  // namespace ekg
