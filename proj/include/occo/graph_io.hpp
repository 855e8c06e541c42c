#pragma once

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "occo/graph.hpp"

// Reader and writer for the newline-delimited `.occg` graph format.
//
//   {"format_version":"1","kind":"header","schema_hash":"<16 hex>"}
//   {"builtin":false,"definition":..,"id":..,"kind":"class","label":..,"parents":[..]}
//   {"attributes":{..},"class":..,"id":..,"kind":"entity","label":..}
//   {"id":..,"kind":"assertion","object":..,"provenance":..,"relation":..,
//    "subject":..,"valid_from":"YYYY-MM-DD","valid_to":"YYYY-MM-DD"}
//
// `class` records carry extension classes only; the built-in schema is
// implied by the header hash, which covers built-ins and extensions alike.
// Keys are emitted in alphabetical order; records are grouped by kind and
// sorted by id.

namespace occo {

inline constexpr std::string_view kFormatVersion = "1";

namespace detail {

inline nlohmann::json attribute_json(const AttributeValue& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Date>) return x.str();
        else return x;
      },
      v);
}

}  // namespace detail

inline nlohmann::json entity_record(const Entity& e) {
  nlohmann::json attrs = nlohmann::json::object();
  for (const auto& [k, v] : e.attributes) attrs[k] = detail::attribute_json(v);
  return {{"kind", "entity"},
          {"id", e.id.str()},
          {"class", e.ont_class.str()},
          {"label", e.label},
          {"attributes", std::move(attrs)}};
}

inline nlohmann::json assertion_record(const Assertion& a) {
  nlohmann::json j = {{"kind", "assertion"},       {"id", a.id.str()},
                      {"subject", a.subject.str()}, {"relation", a.relation.str()},
                      {"object", a.object.str()},   {"valid_from", a.valid_from.str()},
                      {"provenance", a.provenance}};
  if (a.valid_to) j["valid_to"] = a.valid_to->str();
  return j;
}

inline std::string export_graph(const GraphSnapshot& graph) {
  std::string out;
  auto line = [&](const nlohmann::json& j) {
    out += j.dump();
    out += '\n';
  };
  line({{"kind", "header"},
        {"format_version", std::string(kFormatVersion)},
        {"schema_hash", graph.schema().hash()}});
  for (const auto& [_, c] : graph.schema().classes())
    if (!c.builtin) line(SchemaRegistry::class_record(c));
  for (const auto& [_, e] : graph.entities()) line(entity_record(e));
  for (const auto& [_, a] : graph.assertions()) line(assertion_record(a));
  return out;
}

namespace detail {

// Field access helpers for one decoded record; failures are parse errors.
class RecordReader {
 public:
  explicit RecordReader(const nlohmann::json& j) : j_(j) {}

  void allow_only(std::initializer_list<std::string_view> fields) const {
    for (const auto& [k, _] : j_.items()) {
      bool ok = false;
      for (auto f : fields) ok = ok || k == f;
      if (!ok) throw Error(errc::kParseError, "unknown field '" + k + "'");
    }
  }

  std::string str(const char* field) const {
    auto it = j_.find(field);
    if (it == j_.end())
      throw Error(errc::kParseError, std::string("missing field '") + field + "'");
    if (!it->is_string())
      throw Error(errc::kParseError, std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
  }

  std::optional<std::string> opt_str(const char* field) const {
    if (!j_.contains(field)) return std::nullopt;
    return str(field);
  }

  const nlohmann::json& raw(const char* field) const {
    auto it = j_.find(field);
    if (it == j_.end())
      throw Error(errc::kParseError, std::string("missing field '") + field + "'");
    return *it;
  }

  bool has(const char* field) const { return j_.contains(field); }

  TermId term(const char* field) const {
    auto s = str(field);
    if (!TermId::valid(s))
      throw Error(errc::kParseError, "field '" + std::string(field) +
                                         "' is not a valid term id: '" + s + "'");
    return TermId(std::move(s));
  }

  EntityId id(const char* field) const {
    auto s = str(field);
    if (s.empty())
      throw Error(errc::kParseError, std::string("field '") + field + "' must be nonempty");
    return EntityId(std::move(s));
  }

  Date date(const char* field) const { return Date::parse(str(field)); }

 private:
  const nlohmann::json& j_;
};

inline nlohmann::json parse_record_line(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(errc::kParseError, std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw Error(errc::kParseError, "record must be an object");
  return j;
}

inline OntClass read_class_record(const RecordReader& r) {
  r.allow_only({"kind", "id", "label", "parents", "definition", "builtin"});
  OntClass c;
  c.id = r.term("id");
  c.label = r.str("label");
  c.definition = r.opt_str("definition").value_or("");
  if (r.has("builtin")) {
    const auto& b = r.raw("builtin");
    if (!b.is_boolean()) throw Error(errc::kParseError, "field 'builtin' must be a boolean");
    if (b.get<bool>())
      throw Error(errc::kParseError, "class records may only declare extension classes");
  }
  const auto& parents = r.raw("parents");
  if (!parents.is_array()) throw Error(errc::kParseError, "field 'parents' must be an array");
  for (const auto& p : parents) {
    if (!p.is_string() || !TermId::valid(p.get<std::string>()))
      throw Error(errc::kParseError, "parents must be term ids");
    c.parents.insert(TermId(p.get<std::string>()));
  }
  return c;
}

inline Entity read_entity_record(const RecordReader& r) {
  r.allow_only({"kind", "id", "class", "label", "attributes"});
  Entity e;
  e.id = r.id("id");
  e.ont_class = r.term("class");
  e.label = r.opt_str("label").value_or("");
  if (r.has("attributes")) {
    const auto& attrs = r.raw("attributes");
    if (!attrs.is_object())
      throw Error(errc::kParseError, "field 'attributes' must be an object");
    for (const auto& [k, v] : attrs.items()) {
      if (v.is_string()) e.attributes[k] = v.get<std::string>();
      else if (v.is_boolean()) e.attributes[k] = v.get<bool>();
      else if (v.is_number()) e.attributes[k] = v.get<double>();
      else
        throw Error(errc::kParseError,
                    "attribute '" + k + "' must be a string, number, boolean or date");
    }
  }
  return e;
}

inline Assertion read_assertion_record(const RecordReader& r) {
  r.allow_only({"kind", "id", "subject", "relation", "object", "valid_from", "valid_to",
                "provenance"});
  Assertion a;
  a.id = r.id("id");
  a.subject = r.id("subject");
  a.relation = r.term("relation");
  a.object = r.id("object");
  a.valid_from = r.date("valid_from");
  if (r.has("valid_to")) a.valid_to = r.date("valid_to");
  a.provenance = r.opt_str("provenance").value_or("");
  return a;
}

}  // namespace detail

// Parses a graph file against `schema`. All-or-nothing: any failure throws
// with the offending line number in the message and in detail["line"].
inline GraphSnapshot import_graph(std::shared_ptr<const SchemaRegistry> schema,
                                  std::string_view text) {
  struct Pending {
    std::size_t line;
    nlohmann::json record;
  };
  std::vector<Pending> classes, entities, assertions;
  std::optional<std::string> header_hash;
  std::size_t header_line = 0;

  auto at_line = [](std::size_t line, auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      e.rethrow_with("line " + std::to_string(line) + ": ",
                     {{"line", std::to_string(line)}});
    }
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    at_line(line_no, [&] {
      auto j = detail::parse_record_line(line);
      detail::RecordReader r(j);
      const auto kind = r.str("kind");
      if (!header_hash) {
        if (kind != "header")
          throw Error(errc::kParseError, "first record must be the header");
        r.allow_only({"kind", "format_version", "schema_hash"});
        if (r.str("format_version") != kFormatVersion)
          throw Error(errc::kParseError,
                      "unsupported format_version '" + r.str("format_version") + "'");
        header_hash = r.str("schema_hash");
        header_line = line_no;
      } else if (kind == "header") {
        throw Error(errc::kParseError, "duplicate header record");
      } else if (kind == "class") {
        classes.push_back({line_no, std::move(j)});
      } else if (kind == "entity") {
        entities.push_back({line_no, std::move(j)});
      } else if (kind == "assertion") {
        assertions.push_back({line_no, std::move(j)});
      } else {
        throw Error(errc::kParseError, "unknown record kind '" + kind + "'");
      }
      return 0;
    });
  }
  if (!header_hash)
    throw Error(errc::kParseError, "missing header record", {{"line", "1"}});

  // Extension classes may reference each other in any order.
  if (!classes.empty()) {
    auto all = schema->classes();
    for (const auto& p : classes) {
      at_line(p.line, [&] {
        auto c = detail::read_class_record(detail::RecordReader(p.record));
        if (all.contains(c.id))
          throw Error(errc::kDuplicateId, "class '" + c.id.str() + "' already registered");
        for (const auto& parent : c.parents) {
          const bool known = all.contains(parent) ||
                             std::any_of(classes.begin(), classes.end(), [&](const auto& q) {
                               return q.record.value("id", "") == parent.str();
                             });
          if (!known)
            throw Error(errc::kDanglingParent, "class '" + c.id.str() +
                                                   "' has unknown parent '" +
                                                   parent.str() + "'");
        }
        TermId id = c.id;
        all.emplace(std::move(id), std::move(c));
        return 0;
      });
    }
    schema = std::make_shared<const SchemaRegistry>(SchemaRegistry::build(
        std::move(all), schema->relations(), schema->issuer_constraints(), false));
  }
  if (*header_hash != schema->hash())
    at_line(header_line, [&]() -> int {
      throw Error(errc::kSchemaMismatch, "schema_hash " + *header_hash +
                                             " does not match registry hash " +
                                             schema->hash());
    });

  detail::Store store;
  const auto& abstract = default_abstract_classes();
  for (const auto& p : entities)
    at_line(p.line, [&] {
      GraphSnapshot::insert_entity(*schema, abstract, store,
                                   detail::read_entity_record(detail::RecordReader(p.record)));
      return 0;
    });
  for (const auto& p : assertions)
    at_line(p.line, [&] {
      GraphSnapshot::insert_assertion(
          *schema, store, detail::read_assertion_record(detail::RecordReader(p.record)));
      return 0;
    });

  GraphSnapshot g(schema, abstract);
  return g.with_store(std::make_shared<const detail::Store>(std::move(store)));
}

inline GraphSnapshot import_graph(std::string_view text) {
  return import_graph(GraphSnapshot::empty().schema_ptr(), text);
}

}  // namespace occo
