#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "occo/ctdl.hpp"
#include "occo/graph_io.hpp"
#include "occo/matcher.hpp"
#include "occo/validity.hpp"

// Single-line JSON renderings shared by the CLI and the HTTP service.

namespace occo::codec {

using nlohmann::json;

inline json ids(const std::vector<EntityId>& v) {
  json a = json::array();
  for (const auto& id : v) a.push_back(id.str());
  return a;
}

inline json ids(const std::set<EntityId>& v) {
  json a = json::array();
  for (const auto& id : v) a.push_back(id.str());
  return a;
}

inline json verdict(const ValidityVerdict& v) {
  json reasons = json::array();
  for (auto c : v.reasons) reasons.push_back(std::string(to_string(c)));
  json rules = json::array();
  for (const auto& r : v.rules) {
    json jr = {{"rule", std::string(r.rule)},
               {"name", std::string(r.name)},
               {"status", std::string(to_string(r.status))},
               {"consulted", ids(r.consulted)}};
    if (r.code) jr["code"] = std::string(to_string(*r.code));
    rules.push_back(std::move(jr));
  }
  json j = {{"credential", v.credential.str()}, {"at", v.at.str()},
            {"status", std::string(to_string(v.status))}, {"reasons", std::move(reasons)},
            {"trace", ids(v.trace)}, {"rules", std::move(rules)}};
  if (v.issuer) j["issuer"] = v.issuer->str();
  if (v.issued_on) j["issued_on"] = v.issued_on->str();
  if (v.holder) j["holder"] = v.holder->str();
  return j;
}

inline json profile(const CompetencyProfile& p) {
  json held = json::object();
  for (const auto& [k, sources] : p.held) held[k.str()] = ids(sources);
  return {{"holder", p.holder.str()}, {"held", std::move(held)}};
}

inline json match(const MatchReport& m) {
  return {{"job", m.job.str()},           {"holder", m.holder.str()},
          {"score", m.score},             {"matched", ids(m.matched)},
          {"missing", ids(m.missing)}};
}

inline json matches(const std::vector<MatchReport>& v) {
  json a = json::array();
  for (const auto& m : v) a.push_back(match(m));
  return a;
}

inline json pathway(const Pathway& p) {
  return {{"credentials", ids(p.credentials)},
          {"total_cost", p.total_cost},
          {"newly_covered", ids(p.newly_covered)}};
}

inline json what_if_row(const WhatIfResult& r) {
  return {{"job", r.job.str()}, {"old_score", r.old_score}, {"new_score", r.new_score}};
}

inline json what_if_rows(const std::vector<WhatIfResult>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(what_if_row(r));
  return a;
}

inline json recruit(const RecruitSuggestion& r) {
  return {{"holder", r.holder.str()},
          {"template", r.template_id.str()},
          {"benefiting_jobs", r.benefiting_jobs}};
}

inline json import_report(const ImportReport& r) {
  json warnings = json::array();
  for (const auto& [ctid, msg] : r.warnings)
    warnings.push_back({{"ctid", ctid}, {"message", msg}});
  json mapping = json::array();
  for (const auto& [type, cls] : r.mapping_used)
    mapping.push_back({{"ctdl_type", type}, {"class", cls.str()}});
  return {{"entities_created", r.entities_created},
          {"assertions_created", r.assertions_created},
          {"classes_created", r.classes_created},
          {"warnings", std::move(warnings)},
          {"mapping_used", std::move(mapping)}};
}

inline json error(const Error& e) {
  json j = {{"code", e.code()}, {"message", e.what()}};
  if (!e.detail().empty()) {
    json d = json::object();
    for (const auto& [k, v] : e.detail()) d[k] = v;
    j["detail"] = std::move(d);
  }
  return j;
}

// Request bodies reuse the graph file record shapes; `kind` is optional.
inline Entity entity_from_request(const json& j) {
  if (!j.is_object()) throw Error(errc::kParseError, "request body must be an object");
  json body = j;
  if (body.contains("kind") && body["kind"] != "entity")
    throw Error(errc::kParseError, "expected an entity record");
  body.erase("kind");
  return detail::read_entity_record(detail::RecordReader(body));
}

inline Assertion assertion_from_request(const json& j) {
  if (!j.is_object()) throw Error(errc::kParseError, "request body must be an object");
  json body = j;
  if (body.contains("kind") && body["kind"] != "assertion")
    throw Error(errc::kParseError, "expected an assertion record");
  body.erase("kind");
  return detail::read_assertion_record(detail::RecordReader(body));
}

inline json parse_body(const std::string& text) {
  try {
    auto j = json::parse(text);
    if (!j.is_object()) throw Error(errc::kParseError, "request body must be an object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(errc::kParseError, std::string("malformed request body: ") + e.what());
  }
}

}  // namespace occo::codec
