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

#include "ekg/service.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ekg/date.hpp"
#include "ekg/kg.hpp"
#include "ekg/log.hpp"
#include "ekg/rdfxml.hpp"
#include "ekg/sparql.hpp"
#include "ekg/turtle.hpp"
#include "httplib.h"
#include "json.hpp"

namespace ekg {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Media types in header order, parameters (q=...) dropped.
std::vector<std::string> accept_list(const std::string& header) {
  std::vector<std::string> out;
  std::stringstream ss(header);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = lower(trim(item.substr(0, item.find(';'))));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

// First listed type present in `supported`; "*/*" or no header picks `fallback`.
std::optional<std::string> negotiate(const std::string& header, const std::vector<std::string>& supported,
                                     const std::string& fallback) {
  auto wanted = accept_list(header);
  if (wanted.empty()) return fallback;
  for (const auto& w : wanted)
    if (std::find(supported.begin(), supported.end(), w) != supported.end()) return w;
  for (const auto& w : wanted)
    if (w == "*/*") return fallback;
  return std::nullopt;
}

Response text(int status, std::string body) {
  Response r;
  r.status = status;
  r.body = std::move(body);
  if (!r.body.empty() && r.body.back() != '\n') r.body += '\n';
  return r;
}

Response json_response(int status, const ordered_json& doc) {
  Response r;
  r.status = status;
  r.content_type = "application/json";
  r.body = doc.dump(2) + "\n";
  return r;
}

Response json_error(int status, const std::string& message) { return json_response(status, {{"error", message}}); }

const std::vector<std::string>& rdf_types() {
  static const std::vector<std::string> types = {"text/turtle", "application/rdf+xml", "application/n-triples"};
  return types;
}

Response graph_response(const rdf::Graph& g, const std::string& type, const std::string& base) {
  Response r;
  if (type == "application/rdf+xml") {
    r.content_type = "application/rdf+xml";
    r.body = rdf::serialize_rdfxml(g, base);
  } else if (type == "application/n-triples") {
    r.content_type = "application/n-triples";
    r.body = rdf::serialize_ntriples(g);
  } else {
    r.content_type = "text/turtle; charset=utf-8";
    r.body = rdf::serialize_turtle(g);
  }
  return r;
}

std::optional<long> parse_long(const std::string& s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string path_of(const std::string& iri) {
  auto scheme = iri.find("://");
  if (scheme == std::string::npos) return {};
  auto slash = iri.find('/', scheme + 3);
  return slash == std::string::npos ? std::string("/") : iri.substr(slash);
}

std::string content_type_for(const std::filesystem::path& p) {
  static const std::map<std::string, std::string> types = {
      {".html", "text/html; charset=utf-8"}, {".htm", "text/html; charset=utf-8"},
      {".js", "text/javascript"},            {".mjs", "text/javascript"},
      {".css", "text/css"},                  {".json", "application/json"},
      {".svg", "image/svg+xml"},             {".png", "image/png"},
      {".ico", "image/x-icon"},              {".txt", "text/plain; charset=utf-8"}};
  auto it = types.find(lower(p.extension().string()));
  return it == types.end() ? "application/octet-stream" : it->second;
}

ordered_json opt_json(const std::optional<std::string>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json count_json(const std::optional<std::string>& v) {
  if (!v) return nullptr;
  if (auto n = parse_long(*v)) return *n;
  return *v;
}

}  // namespace

void ServiceConfig::validate() const {
  if (base_iri.empty() || base_iri.back() != '/') throw std::invalid_argument("base IRI must end with '/'");
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
}

void ServiceConfig::apply_env() {
  if (const char* bind = std::getenv("EKG_BIND"); bind && *bind) {
    std::string b = bind;
    auto colon = b.rfind(':');
    std::string port_text = colon == std::string::npos ? b : b.substr(colon + 1);
    auto p = parse_long(port_text);
    if (!p) throw std::invalid_argument("EKG_BIND: bad port '" + port_text + "'");
    port = static_cast<int>(*p);
    if (colon != std::string::npos && colon > 0) host = b.substr(0, colon);
  }
  if (const char* data = std::getenv("EKG_DATA"); data && *data) data_path = data;
}

std::optional<std::string> Request::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

std::string Request::header(const std::string& name) const {
  auto it = headers.find(lower(name));
  return it == headers.end() ? std::string() : it->second;
}

std::string percent_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

rdf::Graph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return rdf::parse_turtle(ss.str());
}

struct LinkedDataService::Catalog {
  std::shared_ptr<const StoreSnapshot> snap;
  std::vector<EventRow> events;
  SynonymDictionaries dicts;
};

struct LinkedDataService::Server {
  httplib::Server http;
};

LinkedDataService::LinkedDataService(ServiceConfig cfg, std::shared_ptr<TripleStore> store)
    : cfg_(std::move(cfg)), store_(std::move(store)), server_(std::make_unique<Server>()) {
  cfg_.validate();
  if (!store_) throw std::invalid_argument("LinkedDataService: null store");
  if (!cfg_.graph_alias.empty()) store_->add_alias(cfg_.graph_alias, cfg_.graph_name);
}

LinkedDataService::~LinkedDataService() = default;

std::vector<EventRow> LinkedDataService::events(const StoreSnapshot& snap) const {
  std::map<std::size_t, EventRow> rows;
  if (!snap.merged) return {};
  const std::string prefix = cfg_.base_iri + "don-record";
  const std::string label = rdf::vocab::rdfs_label();
  auto prop = [&](std::string_view name) { return cfg_.base_iri + std::string(name); };
  const std::string virus = prop(kVirusExtracted), country = prop(kCountryExtracted), date = prop(kDateExtracted),
                    imputed = prop(kDateImputed), cases = prop(kCasesExtracted), deaths = prop(kDeathsExtracted);

  for (const auto& t : snap.merged->graph().triples()) {
    const std::string& s = t.subject.value;
    if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) continue;
    auto seq = parse_long(s.substr(prefix.size()));
    if (!seq || *seq < 0) continue;
    EventRow& row = rows[static_cast<std::size_t>(*seq)];
    row.seq = static_cast<std::size_t>(*seq);
    row.iri = s;
    const std::string& p = t.predicate.value;
    const std::string& v = t.object.value;
    if (p == label) row.label = v;
    else if (p == virus) row.disease = v;
    else if (p == country) row.country = v;
    else if (p == date) row.date = v;
    else if (p == imputed) row.imputed_date = v;
    else if (p == cases) row.cases = v;
    else if (p == deaths) row.deaths = v;
  }
  std::vector<EventRow> out;
  out.reserve(rows.size());
  for (auto& [seq, row] : rows) out.push_back(std::move(row));
  return out;
}

std::shared_ptr<const LinkedDataService::Catalog> LinkedDataService::catalog() const {
  auto snap = store_->snapshot();
  std::lock_guard lock(cache_mu_);
  if (cache_ && cache_->snap == snap) return cache_;
  auto c = std::make_shared<Catalog>();
  c->snap = snap;
  c->events = events(*snap);
  // Stored values are already canonical; the lexicon only widens matching
  // for user input such as "Viet Nam" vs "Vietnam".
  std::vector<std::string> diseases, countries;
  for (const auto& e : c->events) {
    if (e.disease) diseases.push_back(*e.disease);
    if (e.country) countries.push_back(*e.country);
  }
  c->dicts.disease = build_synonym_dictionary(diseases, &builtin_lexicon(), nullptr, {0.8, FieldKind::disease});
  c->dicts.country = build_synonym_dictionary(countries, &builtin_lexicon(), nullptr, {0.8, FieldKind::country});
  cache_ = c;
  return c;
}

Response LinkedDataService::handle(const Request& req) const {
  try {
    const std::string& path = req.path;
    if (path == "/sparql" || path == "/sparql/") {
      if (req.method != "GET" && req.method != "POST") return text(405, "method not allowed");
      return handle_sparql(req);
    }
    if (path.rfind("/describe", 0) == 0) {
      if (req.method != "GET") return text(405, "method not allowed");
      auto url = req.param("url");
      if (!url) return text(400, "missing url parameter");
      return describe_resource(*url, req.header("accept"));
    }
    if (path == "/api/events") return req.method == "GET" ? events_api(req) : text(405, "method not allowed");
    if (path == "/api/facets") return req.method == "GET" ? facets_api() : text(405, "method not allowed");
    if (path == "/admin/reload") return req.method == "POST" ? reload() : text(405, "method not allowed");

    std::string base_path = path_of(cfg_.base_iri);
    if (base_path.size() > 1 && path.size() > base_path.size() && path.rfind(base_path, 0) == 0) {
      Response r;
      r.status = 303;
      std::string iri = cfg_.base_iri + path.substr(base_path.size());
      r.headers["Location"] = "/describe?url=" + percent_encode(iri);
      r.body = "See Other\n";
      return r;
    }
    if (req.method != "GET") return text(405, "method not allowed");
    return static_file(path);
  } catch (const std::exception& e) {
    log_warning(std::string("request failed: ") + e.what());
    return text(500, std::string("internal error: ") + e.what());
  }
}

Response LinkedDataService::handle_sparql(const Request& req) const {
  std::optional<std::string> query = req.param("query");
  if (!query && req.method == "POST" &&
      lower(req.header("content-type")).rfind("application/sparql-query", 0) == 0)
    query = req.body;
  if (!query) return text(400, "missing query parameter");

  sparql::Query q;
  try {
    q = sparql::parse_query(*query);
  } catch (const sparql::QueryError& e) {
    return text(400, e.what());
  }
  auto snap = store_->snapshot();
  const std::string accept = req.header("accept");

  if (q.form == sparql::Form::describe) {
    auto type = negotiate(accept, rdf_types(), "text/turtle");
    if (!type) return text(406, "not acceptable: " + accept);
    return graph_response(sparql::describe(q, *snap), *type, cfg_.base_iri);
  }

  static const std::map<std::string, sparql::ResultFormat> formats = {
      {"application/json", sparql::ResultFormat::json},
      {"application/sparql-results+json", sparql::ResultFormat::json},
      {"application/xml", sparql::ResultFormat::xml},
      {"application/sparql-results+xml", sparql::ResultFormat::xml},
      {"text/csv", sparql::ResultFormat::csv},
      {"text/html", sparql::ResultFormat::html}};
  std::vector<std::string> supported;
  for (const auto& [k, v] : formats) supported.push_back(k);
  auto type = negotiate(accept, supported, "application/json");
  if (!type) return text(406, "not acceptable: " + accept);
  auto fmt = formats.at(*type);
  Response r;
  r.content_type = sparql::media_type(fmt);
  r.body = sparql::serialize_results(sparql::evaluate(q, *snap), fmt);
  return r;
}

Response LinkedDataService::describe_resource(const std::string& iri, const std::string& accept) const {
  if (!rdf::is_absolute_iri(iri)) return text(400, "invalid IRI: " + iri);
  auto type = negotiate(accept, rdf_types(), "text/turtle");
  if (!type) return text(406, "not acceptable: " + accept);
  auto snap = store_->snapshot();
  const IndexedGraph* g = snap->merged.get();
  auto id = g ? g->lookup(rdf::Term::iri(iri)) : std::nullopt;
  if (!id) return text(404, "not found: " + iri);
  rdf::Graph out;
  g->match(id, std::nullopt, std::nullopt, [&](TermId s, TermId p, TermId o) {
    out.insert({g->term(s), g->term(p), g->term(o)});
  });
  return graph_response(out, *type, cfg_.base_iri);
}

Response LinkedDataService::events_api(const Request& req) const {
  auto nonempty = [&](const char* name) -> std::optional<std::string> {
    auto v = req.param(name);
    if (v && v->empty()) return std::nullopt;
    return v;
  };
  auto disease = nonempty("disease");
  auto country = nonempty("country");
  std::optional<long> year;
  long page = 1, page_size = 50;
  if (auto y = nonempty("year")) {
    year = parse_long(*y);
    if (!year) return json_error(400, "year must be an integer");
  }
  if (auto p = nonempty("page")) {
    auto v = parse_long(*p);
    if (!v || *v < 1) return json_error(400, "page must be an integer >= 1");
    page = *v;
  }
  if (auto p = nonempty("page_size")) {
    auto v = parse_long(*p);
    if (!v || *v < 1 || *v > 1000) return json_error(400, "page_size must be an integer in [1, 1000]");
    page_size = *v;
  }

  auto cat = catalog();
  // The input is usually not a stored value, so also relate it to every
  // member of the stored value's cluster.
  auto matches = [](const SynonymDictionary& dict, const std::string& stored, const std::string& input) {
    if (dict.same_cluster(stored, input)) return true;
    auto c = dict.cluster_of(stored);
    if (!c) return false;
    for (const auto& m : dict.clusters()[*c])
      if (syntactic_equivalent(m, input) || lexicon_synonym(m, input, builtin_lexicon())) return true;
    return false;
  };
  std::vector<const EventRow*> hits;
  for (const auto& e : cat->events) {
    if (disease && !(e.disease && matches(cat->dicts.disease, *e.disease, *disease))) continue;
    if (country && !(e.country && matches(cat->dicts.country, *e.country, *country))) continue;
    if (year) {
      auto d = e.date ? parse_iso_date(*e.date) : std::nullopt;
      if (!d || year_of(*d) != *year) continue;
    }
    hits.push_back(&e);
  }

  ordered_json items = ordered_json::array();
  std::size_t begin = static_cast<std::size_t>(page - 1) * static_cast<std::size_t>(page_size);
  for (std::size_t i = begin; i < hits.size() && i < begin + static_cast<std::size_t>(page_size); ++i) {
    const EventRow& e = *hits[i];
    ordered_json item;
    item["id"] = e.iri;
    item["label"] = e.label;
    item["disease"] = opt_json(e.disease);
    item["country"] = opt_json(e.country);
    item["date"] = opt_json(e.date);
    item["imputed_date"] = opt_json(e.imputed_date);
    item["cases"] = count_json(e.cases);
    item["deaths"] = count_json(e.deaths);
    items.push_back(std::move(item));
  }
  ordered_json doc;
  doc["total"] = hits.size();
  doc["page"] = page;
  doc["page_size"] = page_size;
  doc["items"] = std::move(items);
  return json_response(200, doc);
}

Response LinkedDataService::facets_api() const {
  auto cat = catalog();
  std::map<std::string, std::size_t> diseases, countries;
  std::map<long, std::size_t> years;
  for (const auto& e : cat->events) {
    if (e.disease) ++diseases[cat->dicts.disease.canonical_of(*e.disease)];
    if (e.country) ++countries[cat->dicts.country.canonical_of(*e.country)];
    if (auto d = e.date ? parse_iso_date(*e.date) : std::nullopt) ++years[year_of(*d)];
  }
  auto ranked = [](const std::map<std::string, std::size_t>& m) {
    std::vector<std::pair<std::string, std::size_t>> v(m.begin(), m.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    ordered_json out = ordered_json::array();
    for (const auto& [value, n] : v) out.push_back({{"value", value}, {"count", n}});
    return out;
  };
  ordered_json doc;
  doc["diseases"] = ranked(diseases);
  doc["countries"] = ranked(countries);
  ordered_json ys = ordered_json::array();
  for (const auto& [y, n] : years) ys.push_back({{"value", y}, {"count", n}});
  doc["years"] = std::move(ys);
  return json_response(200, doc);
}

Response LinkedDataService::static_file(const std::string& path) const {
  if (cfg_.static_dir.empty()) {
    if (path != "/" && path != "/index.html") return text(404, "not found");
    Response r;
    r.content_type = "text/html; charset=utf-8";
    r.body =
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>eKG</title></head><body>\n"
        "<h1>eKG</h1>\n<p>No UI bundle configured. Endpoints: <a href=\"/api/facets\">/api/facets</a>, "
        "/api/events, /sparql, /describe?url=</p>\n</body></html>\n";
    return r;
  }
  std::filesystem::path rel = path == "/" ? std::filesystem::path("index.html") : std::filesystem::path(path.substr(1));
  for (const auto& part : rel)
    if (part == "..") return text(404, "not found");
  auto full = std::filesystem::path(cfg_.static_dir) / rel;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(full, ec)) return text(404, "not found");
  std::ifstream in(full, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  Response r;
  r.content_type = content_type_for(full);
  r.body = ss.str();
  return r;
}

std::size_t LinkedDataService::load_data() const {
  if (cfg_.data_path.empty()) throw std::runtime_error("no data path configured");
  rdf::Graph g = load_graph_file(cfg_.data_path);
  std::size_t n = g.size();
  store_->load_graph(cfg_.graph_name, std::move(g));
  return n;
}

Response LinkedDataService::reload() const {
  if (cfg_.data_path.empty()) return json_error(409, "no data path configured");
  try {
    std::size_t n = load_data();
    return json_response(200, {{"graph", cfg_.graph_name}, {"triples", n}});
  } catch (const std::exception& e) {
    return json_error(500, e.what());
  }
}

bool LinkedDataService::serve() {
  auto& http = server_->http;
  auto handler = [this](const httplib::Request& in, httplib::Response& out) {
    Request req;
    req.method = in.method;
    req.path = in.path;
    for (const auto& [k, v] : in.params) req.params.emplace(k, v);
    for (const auto& [k, v] : in.headers) req.headers[lower(k)] = v;
    req.body = in.body;
    Response r = handle(req);
    out.status = r.status;
    for (const auto& [k, v] : r.headers) out.set_header(k, v);
    out.set_content(r.body, r.content_type);
  };
  http.Get(".*", handler);
  http.Post(".*", handler);
  int port = cfg_.port;
  if (port == 0) {
    port = http.bind_to_any_port(cfg_.host);
    if (port <= 0) return false;
  } else if (!http.bind_to_port(cfg_.host, port)) {
    return false;
  }
  bound_port_ = port;
  log_info("listening on " + cfg_.host + ":" + std::to_string(port));
  bool ok = http.listen_after_bind();
  bound_port_ = 0;
  return ok;
}

void LinkedDataService::stop() { server_->http.stop(); }

}  // namespace ekg
