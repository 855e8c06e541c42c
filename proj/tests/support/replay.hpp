#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "occo/service.hpp"
#include "support/golden.hpp"

namespace occo::test {

// Request lines: {"method","path","query"?,"body"? (object),"body_text"? (raw)}.
inline std::vector<ServiceRequest> load_requests(const std::string& path) {
  std::vector<ServiceRequest> out;
  std::istringstream lines(slurp(path));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    ServiceRequest r{j.at("method").get<std::string>(), j.at("path").get<std::string>(), {}, ""};
    if (j.contains("query"))
      for (const auto& [k, v] : j["query"].items()) r.query[k] = v.get<std::string>();
    if (j.contains("body")) r.body = j["body"].dump();
    if (j.contains("body_text")) r.body = j["body_text"].get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

// Replays `requests` against a fresh service over `graph`; one JSON line per
// response.
inline std::string replay(const GraphSnapshot& graph, const std::vector<ServiceRequest>& requests) {
  RegistryStore store(graph);
  RegistryService svc(store);
  std::string out;
  for (const auto& r : requests) {
    const auto res = svc.handle(r);
    out += nlohmann::json{{"status", res.status}, {"content_type", res.content_type}, {"body", res.body}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace occo::test
