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

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "ekg/rdf.hpp"
#include "ekg/store.hpp"
#include "ekg/synonyms.hpp"

namespace ekg {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string base_iri{rdf::vocab::ekg};  // must end with '/'
  std::string graph_name{rdf::vocab::ekg};
  std::string graph_alias = "eKG";
  std::string static_dir;  // UI bundle; empty serves a placeholder page
  std::string data_path;   // Turtle file loaded at boot and on /admin/reload

  void validate() const;
  /// Applies EKG_BIND ("host:port" or "port") and EKG_DATA when set.
  void apply_env();
};

struct Request {
  std::string method = "GET";
  std::string path = "/";
  std::multimap<std::string, std::string> params;  // query string and form fields
  std::map<std::string, std::string> headers;      // lower-case names
  std::string body;

  std::optional<std::string> param(const std::string& name) const;
  std::string header(const std::string& name) const;
};

struct Response {
  int status = 200;
  std::string content_type = "text/plain; charset=utf-8";
  std::string body;
  std::map<std::string, std::string> headers;
};

/// One outbreak event as exposed by /api/events.
struct EventRow {
  std::size_t seq = 0;
  std::string iri;
  std::string label;
  std::optional<std::string> disease, country, date, imputed_date, cases, deaths;
};

/// Handlers are plain functions of Request so they can be tested without a
/// socket; serve() wires them to an HTTP server. The store is only read,
/// except by /admin/reload which swaps in a freshly loaded graph.
class LinkedDataService {
 public:
  LinkedDataService(ServiceConfig cfg, std::shared_ptr<TripleStore> store);
  ~LinkedDataService();

  const ServiceConfig& config() const { return cfg_; }

  Response handle(const Request& req) const;

  Response handle_sparql(const Request& req) const;
  Response describe_resource(const std::string& iri, const std::string& accept) const;
  Response events_api(const Request& req) const;
  Response facets_api() const;
  Response static_file(const std::string& path) const;
  Response reload() const;

  /// Loads cfg.data_path into the store under cfg.graph_name.
  std::size_t load_data() const;

  /// Blocks until stop(). Returns false when the socket cannot be bound.
  bool serve();
  void stop();
  /// Port actually bound (useful with port 0); 0 before serve().
  int bound_port() const { return bound_port_.load(); }

  std::vector<EventRow> events(const StoreSnapshot& snap) const;

 private:
  struct Catalog;
  std::shared_ptr<const Catalog> catalog() const;

  ServiceConfig cfg_;
  std::shared_ptr<TripleStore> store_;
  mutable std::mutex cache_mu_;
  mutable std::shared_ptr<const Catalog> cache_;
  struct Server;
  std::unique_ptr<Server> server_;
  std::atomic<int> bound_port_{0};
};

/// Parses a Turtle file (.ttl/.nt) from disk.
rdf::Graph load_graph_file(const std::string& path);

std::string percent_encode(std::string_view s);

}  // namespace ekg
