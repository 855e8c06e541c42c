#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "occo/graph.hpp"

// Importer for a flat subset of CTDL. One object per line:
//
//   {"@type":"ceterms:License","ceterms:ctid":"ce-100","name":"Electrician",
//    "owned_by":"ce-org-1","accredited_by":["ce-qa-1"],"teaches":["Wiring"]}
//
// Organization descriptions (ceterms:CredentialOrganization and
// ceterms:QACredentialOrganization) may appear in the same batch so that
// credential records can reference them.

namespace occo {

struct CtdlRecord {
  std::string ctdl_type;
  std::string name;
  std::string ctid;
  std::optional<std::string> owned_by;
  std::vector<std::string> accredited_by;
  std::vector<std::string> teaches;
  std::optional<std::string> issuer_type_hint;
  std::size_t line = 0;

  friend bool operator==(const CtdlRecord& a, const CtdlRecord& b) {
    return a.ctdl_type == b.ctdl_type && a.name == b.name && a.ctid == b.ctid &&
           a.owned_by == b.owned_by && a.accredited_by == b.accredited_by &&
           a.teaches == b.teaches && a.issuer_type_hint == b.issuer_type_hint;
  }
};

struct ImportReport {
  std::size_t entities_created = 0;
  std::size_t assertions_created = 0;
  std::size_t classes_created = 0;
  std::vector<std::pair<std::string, std::string>> warnings;  // (ctid, message)
  std::vector<std::pair<std::string, TermId>> mapping_used;   // ctdl type -> class
};

struct CtdlImportOptions {
  // valid_from for accreditation and evidence assertions created by the
  // import; CTDL descriptions carry no dates of their own.
  Date valid_from{1970, 1, 1};
};

namespace ctdl {

inline constexpr std::string_view kCredentialOrganization = "ceterms:CredentialOrganization";
inline constexpr std::string_view kQaOrganization = "ceterms:QACredentialOrganization";

inline bool is_organization_type(std::string_view t) {
  return t == kCredentialOrganization || t == kQaOrganization;
}

// Fixed credential type mapping; nullopt for unmapped types.
inline std::optional<TermId> credential_class_for(std::string_view type) {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"ceterms:Certificate", "certificate"},
      {"ceterms:Certification", "certification"},
      {"ceterms:License", "license"},
      {"ceterms:Degree", "academic_degree"},
      {"ceterms:AssociateDegree", "academic_degree"},
      {"ceterms:BachelorDegree", "academic_degree"},
      {"ceterms:MasterDegree", "academic_degree"},
      {"ceterms:DoctoralDegree", "academic_degree"},
      {"ceterms:ProfessionalDoctorate", "academic_degree"},
      {"ceterms:ResearchDoctorate", "academic_degree"},
  };
  auto it = table.find(type);
  if (it == table.end()) return std::nullopt;
  return TermId(it->second);
}

inline std::optional<TermId> organization_class_for(std::string_view type,
                                                    const std::optional<std::string>& hint) {
  if (type == kQaOrganization) return TermId("quality_assurance_group");
  if (!hint) return TermId("credential_granting_agency");
  if (*hint == "educational_institution") return TermId("degree_granting_institution");
  if (*hint == "professional_organization") return TermId("certifying_organization");
  if (*hint == "government_agency") return TermId("licensing_agency");
  return std::nullopt;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace ctdl

inline std::vector<CtdlRecord> parse_ctdl(std::string_view text) {
  std::vector<CtdlRecord> out;
  std::set<std::string> seen;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    auto fail = [&](const std::string& msg) -> Error {
      return Error(errc::kParseError, "line " + std::to_string(line_no) + ": " + msg,
                   {{"line", std::to_string(line_no)}});
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(std::string("malformed record: ") + e.what());
    }
    if (!j.is_object()) throw fail("record must be an object");

    static const std::set<std::string> known = {
        "ctdl_type", "@type",   "name",    "ctid",           "ceterms:ctid",
        "owned_by",  "accredited_by", "teaches", "issuer_type_hint"};
    for (const auto& [k, _] : j.items())
      if (!known.contains(k)) throw fail("unknown field '" + k + "'");

    auto aliased = [&](const char* a, const char* b) -> std::string {
      if (j.contains(a) && j.contains(b))
        throw fail(std::string("both '") + a + "' and '" + b + "' given");
      const char* key = j.contains(a) ? a : b;
      if (!j.contains(key)) throw fail(std::string("missing field '") + a + "'");
      if (!j[key].is_string()) throw fail(std::string("field '") + key + "' must be a string");
      return j[key].get<std::string>();
    };
    auto opt_string = [&](const char* key) -> std::optional<std::string> {
      if (!j.contains(key)) return std::nullopt;
      if (!j[key].is_string()) throw fail(std::string("field '") + key + "' must be a string");
      return j[key].get<std::string>();
    };
    auto string_list = [&](const char* key) {
      std::vector<std::string> v;
      if (!j.contains(key)) return v;
      if (!j[key].is_array()) throw fail(std::string("field '") + key + "' must be an array");
      for (const auto& x : j[key]) {
        if (!x.is_string()) throw fail(std::string("field '") + key + "' must hold strings");
        v.push_back(x.get<std::string>());
      }
      return v;
    };

    CtdlRecord r;
    r.ctdl_type = aliased("ctdl_type", "@type");
    r.ctid = aliased("ctid", "ceterms:ctid");
    if (r.ctid.empty()) throw fail("ctid must be nonempty");
    r.name = opt_string("name").value_or("");
    r.owned_by = opt_string("owned_by");
    r.accredited_by = string_list("accredited_by");
    r.teaches = string_list("teaches");
    r.issuer_type_hint = opt_string("issuer_type_hint");
    r.line = line_no;
    if (!seen.insert(r.ctid).second)
      throw Error(errc::kDuplicateCtid,
                  "line " + std::to_string(line_no) + ": duplicate ctid '" + r.ctid + "'",
                  {{"ctid", r.ctid}, {"line", std::to_string(line_no)}});
    out.push_back(std::move(r));
  }
  return out;
}

namespace detail {

class CtdlMapper {
 public:
  CtdlMapper(GraphSnapshot graph, const CtdlImportOptions& opts)
      : graph_(std::move(graph)), opts_(opts) {}

  void organization(const CtdlRecord& r) {
    if (skip_existing(r)) return;
    auto cls = ctdl::organization_class_for(r.ctdl_type, r.issuer_type_hint);
    if (!cls) {
      warn(r.ctid, "unknown issuer_type_hint '" + *r.issuer_type_hint +
                       "'; mapped to credential_granting_agency");
      cls = TermId("credential_granting_agency");
    }
    note_mapping(r.ctdl_type, *cls);
    Attributes attrs{{"ctdl_type", r.ctdl_type}};
    if (r.issuer_type_hint) attrs["issuer_type_hint"] = *r.issuer_type_hint;
    add_entity({EntityId(r.ctid), *cls, r.name, std::move(attrs)});
    accreditations(r, EntityId(r.ctid));
  }

  void credential(const CtdlRecord& r) {
    if (skip_existing(r)) return;
    auto cls = ctdl::credential_class_for(r.ctdl_type);
    if (!cls) {
      warn(r.ctid, "unmapped CTDL type '" + r.ctdl_type + "'; imported as generic credential");
      cls = TermId("credential");
    }
    note_mapping(r.ctdl_type, *cls);

    Attributes attrs{{"template", true}, {"ctdl_type", r.ctdl_type}};
    if (r.issuer_type_hint) attrs["issuer_type_hint"] = *r.issuer_type_hint;
    std::optional<EntityId> owner;
    if (r.owned_by) {
      owner = EntityId(*r.owned_by);
      require_org(*owner, TermId("organization"), "owned_by");
      attrs["owned_by"] = *r.owned_by;
    }
    const EntityId cred_id(r.ctid);
    add_entity({cred_id, *cls, r.name, std::move(attrs)});

    if (owner) accreditations(r, *owner);
    else if (!r.accredited_by.empty())
      warn(r.ctid, "accredited_by ignored: record has no owned_by organization");

    for (const auto& label : r.teaches) {
      const EntityId k = competence_entity(r.ctid, label);
      const EntityId aid("ev." + r.ctid + "." + k.str());
      if (!graph_.contains(aid))
        add_assertion({aid, cred_id, TermId("evidence_of"), k, opts_.valid_from,
                       std::nullopt, "ctdl:" + r.ctid});
    }
  }

  GraphSnapshot graph_;
  ImportReport report_;

 private:
  bool skip_existing(const CtdlRecord& r) {
    if (!graph_.contains(EntityId(r.ctid))) return false;
    warn(r.ctid, "ctid already present in graph; record skipped");
    return true;
  }

  void accreditations(const CtdlRecord& r, const EntityId& owner) {
    for (const auto& qa : r.accredited_by) {
      const EntityId qa_id(qa);
      require_org(qa_id, TermId("quality_assurance_group"), "accredited_by");
      const EntityId aid("accr." + owner.str() + "." + qa);
      if (graph_.contains(aid)) continue;
      add_assertion({aid, owner, TermId("accredited_by"), qa_id, opts_.valid_from,
                     std::nullopt, "ctdl:" + r.ctid});
    }
  }

  void require_org(const EntityId& id, const TermId& cls, const char* field) {
    const auto* e = graph_.find_entity(id);
    if (!e || !graph_.schema().is_subclass_of(e->ont_class, cls))
      throw Error(errc::kDanglingOrganization,
                  std::string(field) + " references '" + id.str() + "', which is not a known " +
                      cls.str(),
                  {{"organization", id.str()}});
  }

  // Resolves a competency label to a competence entity, creating an
  // extension class and/or instance as needed.
  EntityId competence_entity(const std::string& ctid, const std::string& label) {
    const TermId competence("competence");
    const SchemaRegistry& schema = graph_.schema();
    const std::string want = ctdl::lower(label);
    const std::string slug = slugify(label);
    std::optional<TermId> cls;
    for (const auto& id : schema.descendants(competence)) {  // id-ordered
      const auto& c = schema.get_class(id);
      if (ctdl::lower(c.label) == want || c.id.str() == slug) {
        cls = id;
        break;
      }
    }
    if (!cls) {
      std::string id = slug;
      if (schema.has_class(TermId(id)) || schema.has_relation(TermId(id))) id += "_competence";
      graph_ = add_extension_class(graph_, OntClass{TermId(id), label, {competence},
                                                    "Competence imported from CTDL record " +
                                                        ctid + ".",
                                                    false});
      ++report_.classes_created;
      cls = TermId(id);
      warn(ctid, "competency '" + label + "' not in schema; added extension class '" + id + "'");
    }
    EntityId k(cls->str());
    if (const auto* e = graph_.find_entity(k); e && e->ont_class != *cls)
      k = EntityId("competence:" + cls->str());
    if (const auto* e = graph_.find_entity(k)) {
      if (e->ont_class != *cls)
        throw Error(errc::kDuplicateId, "competence id '" + k.str() + "' is taken");
      return k;
    }
    add_entity({k, *cls, graph_.schema().get_class(*cls).label, {}});
    return k;
  }

  void add_entity(Entity e) {
    graph_ = occo::add_entity(graph_, std::move(e));
    ++report_.entities_created;
  }
  void add_assertion(Assertion a) {
    graph_ = occo::add_assertion(graph_, std::move(a));
    ++report_.assertions_created;
  }
  void warn(const std::string& ctid, std::string msg) {
    report_.warnings.emplace_back(ctid, std::move(msg));
  }
  void note_mapping(const std::string& type, const TermId& cls) {
    for (const auto& [t, _] : report_.mapping_used)
      if (t == type) return;
    report_.mapping_used.emplace_back(type, cls);
  }

  const CtdlImportOptions& opts_;
};

}  // namespace detail

// Applies the record batch to `graph`. Organization records are applied
// first, then credential records, each in input order. Atomic: on error the
// input snapshot is the only result.
inline std::pair<GraphSnapshot, ImportReport> map_to_graph(
    const std::vector<CtdlRecord>& records, const GraphSnapshot& graph,
    const CtdlImportOptions& opts = {}) {
  detail::CtdlMapper mapper(graph, opts);
  auto guarded = [](const CtdlRecord& r, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      e.rethrow_with("ctid " + r.ctid + ": ", {{"ctid", r.ctid}});
    }
  };
  for (const auto& r : records)
    if (ctdl::is_organization_type(r.ctdl_type))
      guarded(r, [&] { mapper.organization(r); });
  for (const auto& r : records)
    if (!ctdl::is_organization_type(r.ctdl_type))
      guarded(r, [&] { mapper.credential(r); });
  return {std::move(mapper.graph_), std::move(mapper.report_)};
}

}  // namespace occo
