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

#include <cstdlib>

#include "ekg/extraction.hpp"
#include "httplib.h"
#include "json.hpp"

namespace ekg {

HttpBackend::HttpBackend(std::string id, std::string url, std::string token, std::chrono::seconds timeout)
    : id_(std::move(id)), token_(std::move(token)), timeout_(timeout) {
  if (id_.empty()) throw std::invalid_argument("backend id must be non-empty");
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("backend url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

HttpBackend HttpBackend::from_env(std::string id) {
  const char* url = std::getenv("EKG_BACKEND_URL");
  if (!url || !*url) throw std::invalid_argument("EKG_BACKEND_URL is not set");
  const char* token = std::getenv("EKG_BACKEND_TOKEN");
  return HttpBackend(std::move(id), url, token ? token : "");
}

std::string HttpBackend::complete(const CompletionRequest& request) {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
  nlohmann::json body = {{"model", id_}, {"prompt", request.prompt}, {"max_tokens", request.max_tokens}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw BackendError("backend " + id_ + ": " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw BackendError("backend " + id_ + ": HTTP " + std::to_string(res->status));
  auto doc = nlohmann::json::parse(res->body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("text") || !doc["text"].is_string())
    throw BackendError("backend " + id_ + ": response lacks a text field");
  return doc["text"].get<std::string>();
}

}  // namespace ekg
