#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>

#include "occo/ctdl.hpp"
#include "occo/json_codec.hpp"
#include "occo/registry_store.hpp"

namespace occo {

struct ServiceRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

inline int http_status_for(std::string_view code) {
  if (code == errc::kUnknownEntity || code == errc::kUnknownAssertion ||
      code == errc::kUnknownTemplate || code == errc::kUnknownTerm || code == errc::kNotFound)
    return 404;
  if (code == errc::kDuplicateId || code == errc::kAlreadyClosed ||
      code == errc::kDuplicateCtid)
    return 409;
  if (code == errc::kIoError || code == errc::kInternalConsistency) return 500;
  return 400;
}

// Endpoint dispatch over a RegistryStore. Reads use the published
// snapshot; mutations go through the store's single writer.
class RegistryService {
 public:
  explicit RegistryService(RegistryStore& store) : store_(store) {}

  ServiceResponse handle(const ServiceRequest& req) {
    try {
      return route(req);
    } catch (const Error& e) {
      return {http_status_for(e.code()), "application/json", codec::error(e).dump()};
    } catch (const std::exception& e) {
      Error wrapped(errc::kInternalConsistency, e.what());
      return {500, "application/json", codec::error(wrapped).dump()};
    }
  }

 private:
  static std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < path.size()) {
      auto next = path.find('/', pos);
      if (next == std::string_view::npos) next = path.size();
      if (next > pos) out.emplace_back(path.substr(pos, next - pos));
      pos = next + 1;
    }
    return out;
  }

  static std::string param(const ServiceRequest& req, const std::string& name) {
    auto it = req.query.find(name);
    if (it == req.query.end() || it->second.empty())
      throw Error(errc::kInvalidArgument, "missing query parameter '" + name + "'",
                  {{"parameter", name}});
    return it->second;
  }

  static Date date_param(const ServiceRequest& req) { return Date::parse(param(req, "at")); }

  static ValidityOptions validity_options(const ServiceRequest& req) {
    ValidityOptions o;
    o.strict_revocation = bool_param(req, "strict_revocation", false);
    return o;
  }

  static std::size_t k_param(const ServiceRequest& req) {
    auto it = req.query.find("k");
    if (it == req.query.end()) return 10;
    try {
      std::size_t used = 0;
      const long v = std::stol(it->second, &used);
      if (used != it->second.size() || v < 0) throw std::invalid_argument("k");
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw Error(errc::kInvalidArgument, "k must be a nonnegative integer",
                  {{"parameter", "k"}});
    }
  }

  static bool bool_param(const ServiceRequest& req, const std::string& name, bool fallback) {
    auto it = req.query.find(name);
    if (it == req.query.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw Error(errc::kInvalidArgument, name + " must be true or false", {{"parameter", name}});
  }

  static std::string body_string(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_string())
      throw Error(errc::kInvalidArgument, std::string("body field '") + field + "' is required",
                  {{"field", field}});
    return j[field].get<std::string>();
  }

  static ServiceResponse ok(const nlohmann::json& j, int status = 200) {
    return {status, "application/json", j.dump()};
  }

  static ServiceResponse not_found(const ServiceRequest& req) {
    Error e(errc::kNotFound, "no route for " + req.method + " " + req.path);
    return {404, "application/json", codec::error(e).dump()};
  }

  ServiceResponse route(const ServiceRequest& req) {
    const auto seg = split_path(req.path);
    const bool get = req.method == "GET";
    const bool post = req.method == "POST";
    const auto n = seg.size();

    if (post && n == 1 && seg[0] == "entities") {
      auto e = codec::entity_from_request(codec::parse_body(req.body));
      const EntityId id = e.id;
      auto g = store_.mutate([&](const GraphSnapshot& s) { return add_entity(s, e); });
      return ok(entity_record(g->entity(id)), 201);
    }
    if (post && n == 1 && seg[0] == "assertions") {
      auto a = codec::assertion_from_request(codec::parse_body(req.body));
      const EntityId id = a.id;
      auto g = store_.mutate([&](const GraphSnapshot& s) { return add_assertion(s, a); });
      return ok(assertion_record(g->assertion(id)), 201);
    }
    if (post && n == 3 && seg[0] == "assertions" && seg[2] == "revoke") {
      const auto body = codec::parse_body(req.body);
      const EntityId id(seg[1]);
      const Date at = Date::parse(body_string(body, "at"));
      auto g = store_.mutate([&](const GraphSnapshot& s) { return revoke(s, id, at); });
      return ok(assertion_record(g->assertion(id)));
    }
    if (post && n == 2 && seg[0] == "import" && seg[1] == "ctdl") {
      const auto records = parse_ctdl(req.body);
      CtdlImportOptions opts;
      if (auto it = req.query.find("valid_from"); it != req.query.end())
        opts.valid_from = Date::parse(it->second);
      ImportReport report;
      store_.mutate([&](const GraphSnapshot& s) {
        auto [g, r] = map_to_graph(records, s, opts);
        report = std::move(r);
        return g;
      });
      return ok(codec::import_report(report));
    }

    const auto snap = store_.snapshot();
    const GraphSnapshot& g = *snap;

    if (get && n == 2 && seg[0] == "entities") {
      return ok(entity_record(g.entity(EntityId(seg[1]))));
    }
    if (get && n == 3 && seg[0] == "credentials" && seg[2] == "validity") {
      return ok(codec::verdict(classify_credential(g, EntityId(seg[1]), date_param(req), validity_options(req))));
    }
    if (get && n == 3 && seg[0] == "credentials" && seg[2] == "explain") {
      return {200, "text/plain", explain(g, EntityId(seg[1]), date_param(req), validity_options(req))};
    }
    if (get && n == 3 && seg[0] == "holders" && seg[2] == "profile") {
      ProfilePolicy policy;
      policy.valid_only = bool_param(req, "valid_only", true);
      return ok(codec::profile(infer_profile(g, EntityId(seg[1]), date_param(req), policy)));
    }
    if (get && n == 3 && seg[0] == "holders" && seg[2] == "matches") {
      const Date at = date_param(req);
      const EntityId holder(seg[1]);
      const auto profile = infer_profile(g, holder, at);
      return ok({{"holder", holder.str()},
                 {"matches", codec::matches(rank_jobs(g, profile, load_jobs(g, at), k_param(req)))}});
    }
    if (get && n == 3 && seg[0] == "jobs" && seg[2] == "candidates") {
      const Date at = date_param(req);
      const EntityId job(seg[1]);
      const auto ranked = rank_candidates(g, load_job(g, job, at), all_holders(g), at, k_param(req));
      return ok({{"job", job.str()}, {"candidates", codec::matches(ranked)}});
    }
    if (get && n == 3 && seg[0] == "providers" && seg[2] == "recruits") {
      const Date at = date_param(req);
      const EntityId provider(seg[1]);
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r :
           recommend_recruits(g, provider, all_holders(g), load_jobs(g, at), at, k_param(req)))
        rows.push_back(codec::recruit(r));
      return ok({{"provider", provider.str()}, {"recruits", std::move(rows)}});
    }
    if (post && n == 1 && seg[0] == "pathway") {
      const auto body = codec::parse_body(req.body);
      const EntityId holder(body_string(body, "holder"));
      const EntityId job(body_string(body, "job"));
      const Date at = Date::parse(body_string(body, "at"));
      nlohmann::json j = codec::pathway(pathway_for(g, holder, job, at));
      j["holder"] = holder.str();
      j["job"] = job.str();
      return ok(j);
    }
    if (post && n == 1 && seg[0] == "what-if") {
      const auto body = codec::parse_body(req.body);
      const EntityId holder(body_string(body, "holder"));
      const EntityId tmpl(body_string(body, "template"));
      const Date at = Date::parse(body_string(body, "at"));
      const auto rows = what_if(g, infer_profile(g, holder, at), tmpl, load_jobs(g, at), at);
      return ok({{"holder", holder.str()},
                 {"template", tmpl.str()},
                 {"results", codec::what_if_rows(rows)}});
    }
    if (get && n == 2 && seg[0] == "schema" && seg[1] == "classes") {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& [_, c] : g.schema().classes()) a.push_back(SchemaRegistry::class_record(c));
      return ok({{"classes", std::move(a)}});
    }
    if (get && n == 2 && seg[0] == "schema" && seg[1] == "relations") {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& r : g.schema().records())
        if (r["kind"] == "relation") a.push_back(r);
      return ok({{"relations", std::move(a)}});
    }
    if (get && n == 1 && seg[0] == "export") {
      return {200, "application/x-ndjson", export_graph(g)};
    }
    return not_found(req);
  }

  RegistryStore& store_;
};

inline std::pair<std::string, int> parse_bind_address(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == bind.size())
    throw Error(errc::kInvalidArgument, "bind address must be host:port", {{"bind", bind}});
  try {
    std::size_t used = 0;
    const int port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1 || port < 0 || port > 65535) throw std::out_of_range("port");
    return {bind.substr(0, colon), port};
  } catch (const std::exception&) {
    throw Error(errc::kInvalidArgument, "invalid port in '" + bind + "'", {{"bind", bind}});
  }
}

// HTTP front end. Every request is forwarded to RegistryService::handle.
class HttpServer {
 public:
  explicit HttpServer(RegistryStore& store) : service_(store) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      ServiceRequest sr{req.method, req.path, {}, req.body};
      for (const auto& [k, v] : req.params) sr.query.emplace(k, v);
      auto out = service_.handle(sr);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    server_.Get(".*", forward);
    server_.Post(".*", forward);
  }

  // Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0)
      throw Error(errc::kBindFailure, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
  }

  void listen_after_bind() { server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool running() const { return server_.is_running(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  RegistryService service_;
  httplib::Server server_;
};

// Runs an HttpServer on a background thread; used by tests and embedders.
class BackgroundServer {
 public:
  BackgroundServer(RegistryStore& store, const std::string& host = "127.0.0.1")
      : http_(store) {
    port_ = http_.bind(host, 0);
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
  }
  ~BackgroundServer() {
    http_.stop();
    if (thread_.joinable()) thread_.join();
  }
  BackgroundServer(const BackgroundServer&) = delete;
  BackgroundServer& operator=(const BackgroundServer&) = delete;

  int port() const { return port_; }

 private:
  HttpServer http_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace occo
