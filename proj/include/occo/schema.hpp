#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "occo/error.hpp"
#include "occo/ids.hpp"
#include "occo/seed_taxonomy.hpp"

namespace occo {

struct OntClass {
  TermId id;
  std::string label;
  std::set<TermId> parents;
  std::string definition;
  bool builtin = false;

  friend bool operator==(const OntClass&, const OntClass&) = default;
};

struct RelationType {
  TermId id;
  std::string label;
  TermId domain;
  TermId range;
  std::optional<TermId> inverse;

  friend bool operator==(const RelationType&, const RelationType&) = default;
};

// An issuer of a credential of `credential_class` (or any subclass) must be
// an instance of `required_issuer_class`. When `authorization_flag` is set,
// an organization carrying that boolean attribute set to true is accepted
// as well.
struct IssuerConstraint {
  TermId credential_class;
  TermId required_issuer_class;
  std::optional<std::string> authorization_flag;

  friend bool operator==(const IssuerConstraint&,
                         const IssuerConstraint&) = default;
};

// Lowercases a display label into term form: "TIG Welding" -> "tig_welding".
inline std::string slugify(std::string_view label) {
  std::string out;
  bool pending_sep = false;
  for (unsigned char c : label) {
    if (std::isalnum(c)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_sep = true;
    }
  }
  if (out.empty() || !(out[0] >= 'a' && out[0] <= 'z')) out.insert(0, "k_");
  return out;
}

// Immutable registry of classes, relations and issuer constraints. The
// reflexive-transitive ancestor closure is computed once at construction.
class SchemaRegistry {
 public:
  SchemaRegistry() = default;

  // Validates closure, acyclicity and signatures. With `builtin_data` set,
  // every failure is reported as internal-consistency.
  static SchemaRegistry build(std::map<TermId, OntClass> classes,
                              std::map<TermId, RelationType> relations,
                              std::vector<IssuerConstraint> constraints,
                              bool builtin_data) {
    SchemaRegistry r;
    r.classes_ = std::move(classes);
    r.relations_ = std::move(relations);
    r.constraints_ = std::move(constraints);
    r.close(builtin_data);
    return r;
  }

  const std::map<TermId, OntClass>& classes() const noexcept { return classes_; }
  const std::map<TermId, RelationType>& relations() const noexcept {
    return relations_;
  }
  const std::vector<IssuerConstraint>& issuer_constraints() const noexcept {
    return constraints_;
  }

  bool has_class(const TermId& id) const { return classes_.contains(id); }
  bool has_relation(const TermId& id) const { return relations_.contains(id); }

  const OntClass& get_class(const TermId& id) const {
    auto it = classes_.find(id);
    if (it == classes_.end())
      throw Error(errc::kUnknownTerm, "unknown class '" + id.str() + "'",
                  {{"term", id.str()}});
    return it->second;
  }

  const RelationType& get_relation(const TermId& id) const {
    auto it = relations_.find(id);
    if (it == relations_.end())
      throw Error(errc::kUnknownTerm, "unknown relation '" + id.str() + "'",
                  {{"term", id.str()}});
    return it->second;
  }

  bool is_subclass_of(const TermId& a, const TermId& b) const {
    auto it = ancestors_.find(a);
    if (it == ancestors_.end()) get_class(a);  // throws
    get_class(b);
    return it->second.contains(b);
  }

  // Reflexive ancestor set of a registered class.
  const std::set<TermId>& ancestors(const TermId& a) const {
    auto it = ancestors_.find(a);
    if (it == ancestors_.end()) get_class(a);
    return it->second;
  }

  // Every registered class c with c ⊑ b, including b itself.
  std::vector<TermId> descendants(const TermId& b) const {
    get_class(b);
    std::vector<TermId> out;
    for (const auto& [id, anc] : ancestors_)
      if (anc.contains(b)) out.push_back(id);
    return out;
  }

  // Classes with no registered subclasses.
  bool is_leaf(const TermId& id) const {
    get_class(id);
    return std::none_of(classes_.begin(), classes_.end(), [&](const auto& kv) {
      return kv.second.parents.contains(id);
    });
  }

  // One record per term, sorted by id, followed by issuer constraints.
  std::vector<nlohmann::json> records() const {
    std::map<std::string, nlohmann::json> by_id;
    for (const auto& [id, c] : classes_) by_id[id.str()] = class_record(c);
    for (const auto& [id, rel] : relations_) {
      nlohmann::json j = {{"kind", "relation"},  {"id", id.str()},
                          {"label", rel.label},  {"domain", rel.domain.str()},
                          {"range", rel.range.str()}};
      if (rel.inverse) j["inverse"] = rel.inverse->str();
      by_id[id.str()] = std::move(j);
    }
    std::vector<nlohmann::json> out;
    for (auto& [_, j] : by_id) out.push_back(std::move(j));
    auto cons = constraints_;
    std::sort(cons.begin(), cons.end(), [](const auto& x, const auto& y) {
      return x.credential_class < y.credential_class;
    });
    for (const auto& ic : cons) {
      nlohmann::json j = {{"kind", "issuer_constraint"},
                          {"credential_class", ic.credential_class.str()},
                          {"required_issuer_class", ic.required_issuer_class.str()}};
      if (ic.authorization_flag) j["authorization_flag"] = *ic.authorization_flag;
      out.push_back(std::move(j));
    }
    return out;
  }

  static nlohmann::json class_record(const OntClass& c) {
    nlohmann::json parents = nlohmann::json::array();
    for (const auto& p : c.parents) parents.push_back(p.str());
    return {{"kind", "class"},         {"id", c.id.str()},
            {"label", c.label},        {"parents", std::move(parents)},
            {"definition", c.definition}, {"builtin", c.builtin}};
  }

  std::string dump() const {
    std::string out;
    for (const auto& r : records()) {
      out += r.dump();
      out += '\n';
    }
    return out;
  }

  // FNV-1a 64 over the dump, hex encoded.
  std::string hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  friend bool operator==(const SchemaRegistry& a, const SchemaRegistry& b) {
    return a.classes_ == b.classes_ && a.relations_ == b.relations_ &&
           a.constraints_ == b.constraints_;
  }

 private:
  void close(bool builtin_data) {
    auto fail = [&](std::string_view code, const std::string& msg,
                    Error::Detail d = {}) {
      if (builtin_data)
        throw Error(errc::kInternalConsistency, "built-in schema: " + msg, d);
      throw Error(code, msg, std::move(d));
    };

    for (const auto& [id, c] : classes_) {
      if (c.id != id) fail(errc::kInternalConsistency, "class key mismatch for " + id.str());
      if (relations_.contains(id))
        fail(errc::kDuplicateId, "term '" + id.str() + "' is both class and relation",
             {{"term", id.str()}});
      for (const auto& p : c.parents) {
        if (p == id)
          fail(errc::kCycleIntroduced, "class '" + id.str() + "' lists itself as parent",
               {{"term", id.str()}});
        if (!classes_.contains(p))
          fail(errc::kDanglingParent,
               "class '" + id.str() + "' has unknown parent '" + p.str() + "'",
               {{"term", id.str()}, {"parent", p.str()}});
      }
    }

    // Kahn's algorithm from the roots downwards; anything left is on a cycle.
    std::map<TermId, std::size_t> pending;
    std::map<TermId, std::vector<TermId>> children;
    for (const auto& [id, c] : classes_) {
      pending[id] = c.parents.size();
      for (const auto& p : c.parents) children[p].push_back(id);
    }
    std::vector<TermId> ready;
    for (const auto& [id, n] : pending)
      if (n == 0) ready.push_back(id);
    ancestors_.clear();
    std::size_t visited = 0;
    while (!ready.empty()) {
      TermId cur = std::move(ready.back());
      ready.pop_back();
      ++visited;
      std::set<TermId> anc{cur};
      for (const auto& p : classes_.at(cur).parents) {
        const auto& pa = ancestors_.at(p);
        anc.insert(pa.begin(), pa.end());
      }
      ancestors_.emplace(cur, std::move(anc));
      for (const auto& ch : children[cur])
        if (--pending[ch] == 0) ready.push_back(ch);
    }
    if (visited != classes_.size()) {
      std::string on_cycle;
      for (const auto& [id, n] : pending)
        if (n > 0) on_cycle = id.str();
      fail(errc::kCycleIntroduced, "subclass cycle through '" + on_cycle + "'",
           {{"term", on_cycle}});
    }

    for (const auto& [id, rel] : relations_) {
      if (rel.id != id) fail(errc::kInternalConsistency, "relation key mismatch for " + id.str());
      if (!classes_.contains(rel.domain) || !classes_.contains(rel.range))
        fail(errc::kUnknownTerm, "relation '" + id.str() + "' has unresolved signature",
             {{"term", id.str()}});
      if (rel.inverse) {
        auto inv = relations_.find(*rel.inverse);
        if (inv == relations_.end())
          fail(errc::kUnknownTerm, "relation '" + id.str() + "' has unknown inverse");
        if (inv->second.domain != rel.range || inv->second.range != rel.domain)
          fail(errc::kInternalConsistency,
               "inverse '" + rel.inverse->str() + "' of '" + id.str() +
                   "' does not swap domain and range");
      }
    }

    const TermId credential{"credential"};
    for (const auto& ic : constraints_) {
      if (!classes_.contains(ic.credential_class) ||
          !classes_.contains(ic.required_issuer_class))
        fail(errc::kUnknownTerm, "issuer constraint references unknown class");
      if (!classes_.contains(credential) ||
          !ancestors_.at(ic.credential_class).contains(credential))
        fail(errc::kInternalConsistency,
             "issuer constraint class '" + ic.credential_class.str() +
                 "' is not a credential");
    }
  }

  std::map<TermId, OntClass> classes_;
  std::map<TermId, RelationType> relations_;
  std::vector<IssuerConstraint> constraints_;
  std::map<TermId, std::set<TermId>> ancestors_;
};

namespace detail {

struct ClassSeed {
  std::string_view id;
  std::string_view label;
  std::initializer_list<std::string_view> parents;
  std::string_view definition;
};

struct RelationSeed {
  std::string_view id;
  std::string_view label;
  std::string_view domain;
  std::string_view range;
  std::string_view inverse;
};

// Upper spine, credential terms and supporting classes.
inline const std::vector<ClassSeed>& builtin_class_seeds() {
  static const std::vector<ClassSeed> seeds = {
      {"entity", "entity", {}, "Anything that exists; the root of the hierarchy."},
      {"continuant", "continuant", {"entity"},
       "An entity that persists through time while maintaining its identity."},
      {"occurrent", "occurrent", {"entity"},
       "An entity that unfolds itself in time, or a temporal boundary of one."},
      {"material_entity", "material entity", {"continuant"},
       "An independent continuant that has some portion of matter as part."},
      {"organism", "organism", {"material_entity"},
       "A living material entity; the bearer class for credentials."},
      {"human", "human", {"organism"}, "An organism of the species Homo sapiens."},
      {"organization", "organization", {"material_entity"},
       "A material entity consisting of members bound by shared rules and roles."},
      {"realizable_entity", "realizable entity", {"continuant"},
       "A dependent continuant that is exhibited through some process."},
      {"disposition", "disposition", {"realizable_entity"},
       "A realizable entity that holds in virtue of the physical make-up of its bearer."},
      {"role", "role", {"realizable_entity"},
       "A realizable entity that holds in virtue of the circumstances of its bearer."},
      {"information_content_entity", "information content entity", {"continuant"},
       "A generically dependent continuant that is about some entity."},
      {"document", "document", {"information_content_entity"},
       "A collection of information content entities intended to be understood together."},
      {"directive_information_content_entity", "directive information content entity",
       {"information_content_entity"},
       "An information content entity whose concretizations indicate how to act."},
      {"process", "process", {"occurrent"},
       "An occurrent that has temporal parts and depends on some material entity."},
      {"social_act", "social act", {"process"},
       "A spontaneous act by a conscious agent, directed to and perceived by another."},

      {"credential", "credential", {"document"},
       "A document issued by a third party recognized as bearing the relevant "
       "authority to do so, that is designed to be about an entity's competence, "
       "qualifications, or authority."},
      {"occupational_credential", "occupational credential", {"credential"},
       "A credential that is designed to be about an organism's competence or "
       "qualifications with respect to an occupation."},
      {"occupational_credential_holder", "occupational credential holder", {"organism"},
       "An organism that an occupation credential is about."},
      {"competence", "competence", {"disposition"},
       "A disposition borne by an organism in virtue of training such that, if "
       "realized, is realized in the successful performance of a skilled task for "
       "which that training was pursued."},
      {"credential_grantor_role", "credential grantor role", {"role"},
       "A role borne by an organization that has been accredited by a quality "
       "assurance group through a deontic declaration having action regulation "
       "output, which authorizes the organization to bestow credentials according "
       "to quality control standards established or enforced by the accrediting group."},
      {"credential_granting_agency", "credential granting agency", {"organization"},
       "An organization that bears a credential grantor role."},
      {"employer_role", "employer role", {"role"},
       "A role in human social processes that is realized when the bearer provides "
       "a wage or salary in exchange for some labour or services as specified by "
       "some declaration."},
      {"certificate", "certificate", {"credential"},
       "A credential awarded by a credential granting agency designed to signify "
       "participation in or completion of a training program requiring the "
       "demonstration of some specified knowledge or skill."},
      {"certification", "certification", {"credential"},
       "A credential awarded by a professional organization designed to signify the "
       "holder's competence as measured against a specified professional benchmark."},
      {"academic_degree", "academic degree", {"credential"},
       "A credential awarded by an educational institution designed to signify the "
       "satisfaction of requirements established by and under the monitoring of "
       "that institution."},
      {"license", "license", {"credential"},
       "A credential awarded by a government or government-authorized agency "
       "designed to signify legal authority to engage in specified actions without "
       "being liable to sanctions or penalties that would otherwise be associated "
       "with those actions."},
      {"credential_issuing_process", "credential issuing process", {"social_act"},
       "A social act in which a credential granting agency asserts that an organism "
       "has satisfied the requirements for being awarded a credential, having as "
       "output a credential about the organism."},
      {"quality_assurance_group", "quality assurance group", {"organization"},
       "An organization established to set standards of activity by other "
       "organizations, evaluate the extent to which organizations satisfy or fail to "
       "satisfy those standards, and bestow or revoke the permissions afforded to "
       "organizations based on such evaluations."},

      {"skill", "skill", {"competence"},
       "A competence realized in the performance of a learned task."},
      {"ability", "ability", {"competence"},
       "A competence consisting of an enduring capacity that influences performance."},
      {"educational_institution", "educational institution", {"organization"},
       "An organization whose primary purpose is providing education."},
      {"professional_organization", "professional organization", {"organization"},
       "An organization representing the practitioners of a profession."},
      {"government_agency", "government agency", {"organization"},
       "An organization that is part of a government."},
      {"employer", "employer", {"organization"},
       "An organization that bears an employer role."},
      {"degree_granting_institution", "degree granting institution",
       {"educational_institution", "credential_granting_agency"},
       "An educational institution that bears a credential grantor role."},
      {"certifying_organization", "certifying organization",
       {"professional_organization", "credential_granting_agency"},
       "A professional organization that bears a credential grantor role."},
      {"licensing_agency", "licensing agency",
       {"government_agency", "credential_granting_agency"},
       "A government agency that bears a credential grantor role."},
      {"occupation_holder", "occupation holder", {"human"},
       "A human bearing an occupation role or an occupation disposition."},
      {"occupation_role", "occupation role", {"role"},
       "A role realized in the activities of an occupation."},
      {"deontic_declaration", "deontic declaration", {"social_act"},
       "A social act that creates or revokes a deontic role."},
      {"action_regulation", "action regulation", {"directive_information_content_entity"},
       "A directive information content entity that prescribes an act as required, "
       "prohibited, or permitted."},
      {"trainee", "trainee", {"organism"},
       "An organism participating in training activities."},
      {"credential_training", "credential training", {"process"},
       "A training process in which credential trainees participate."},
      {"trainee_activity", "trainee activity", {"process"},
       "A process in which a trainee participates as part of training."},
      {"occupation_activity", "occupation activity", {"process"},
       "A process carried out as part of an occupation."},
      {"job_description", "job description", {"document"},
       "A document specifying the competences an employer requires for a position."},
  };
  return seeds;
}

inline const std::vector<RelationSeed>& builtin_relation_seeds() {
  static const std::vector<RelationSeed> seeds = {
      {"is_about", "is about", "information_content_entity", "entity", ""},
      {"bearer_of", "bearer of", "material_entity", "realizable_entity", ""},
      {"accredited_by", "accredited by", "credential_granting_agency",
       "quality_assurance_group", ""},
      {"has_output", "has output", "process", "entity", ""},
      {"has_agent", "has agent", "process", "material_entity", ""},
      {"evidence_of", "evidence of", "credential", "competence", ""},
      {"has_participant", "has participant", "process", "material_entity",
       "participates_in"},
      {"participates_in", "participates in", "material_entity", "process",
       "has_participant"},
      {"realizes", "realizes", "process", "realizable_entity", ""},
      {"prescribes", "prescribes", "directive_information_content_entity", "entity", ""},
      {"produces", "produces", "process", "information_content_entity", ""},
      {"qualification_for", "qualification for", "competence", "process", ""},
      {"works_for", "works for", "organism", "organization", ""},
      {"requires_competence", "requires competence", "job_description", "competence", ""},
  };
  return seeds;
}

inline SchemaRegistry make_builtin_schema() {
  std::map<TermId, OntClass> classes;
  auto add = [&](OntClass c) {
    if (!classes.emplace(c.id, c).second)
      throw Error(errc::kInternalConsistency,
                  "built-in schema: duplicate class '" + c.id.str() + "'");
  };
  for (const auto& s : builtin_class_seeds()) {
    OntClass c{TermId(std::string(s.id)), std::string(s.label), {},
               std::string(s.definition), true};
    for (auto p : s.parents) c.parents.insert(TermId(std::string(p)));
    add(std::move(c));
  }
  for (auto label : seed::kSkillLabels)
    add({TermId(slugify(label)), std::string(label), {TermId("skill")},
         "Skill type: " + std::string(label) + ".", true});
  for (auto label : seed::kAbilityLabels)
    add({TermId(slugify(label)), std::string(label), {TermId("ability")},
         "Ability type: " + std::string(label) + ".", true});

  std::map<TermId, RelationType> relations;
  for (const auto& s : builtin_relation_seeds()) {
    RelationType r{TermId(std::string(s.id)), std::string(s.label),
                   TermId(std::string(s.domain)), TermId(std::string(s.range)),
                   std::nullopt};
    if (!s.inverse.empty()) r.inverse = TermId(std::string(s.inverse));
    relations.emplace(r.id, std::move(r));
  }

  std::vector<IssuerConstraint> constraints = {
      {TermId("license"), TermId("government_agency"), "government_authorization"},
      {TermId("academic_degree"), TermId("educational_institution"), std::nullopt},
      {TermId("certification"), TermId("professional_organization"), std::nullopt},
      {TermId("certificate"), TermId("credential_granting_agency"), std::nullopt},
  };
  return SchemaRegistry::build(std::move(classes), std::move(relations),
                               std::move(constraints), /*builtin_data=*/true);
}

}  // namespace detail

// Shared immutable instance of the built-in schema.
inline const SchemaRegistry& builtin_schema() {
  static const SchemaRegistry instance = detail::make_builtin_schema();
  return instance;
}

inline SchemaRegistry load_builtin_schema() { return builtin_schema(); }

inline bool is_subclass_of(const SchemaRegistry& registry, const TermId& a,
                           const TermId& b) {
  return registry.is_subclass_of(a, b);
}

inline std::pair<TermId, TermId> relation_signature(const SchemaRegistry& registry,
                                                    const TermId& rel) {
  const auto& r = registry.get_relation(rel);
  return {r.domain, r.range};
}

inline SchemaRegistry register_extension_class(const SchemaRegistry& registry,
                                               OntClass cls) {
  if (cls.builtin)
    throw Error(errc::kInvalidArgument,
                "extension class '" + cls.id.str() + "' must not be flagged builtin");
  if (!TermId::valid(cls.id.str()))
    throw Error(errc::kInvalidTerm, "invalid term id '" + cls.id.str() + "'");
  if (registry.has_class(cls.id) || registry.has_relation(cls.id))
    throw Error(errc::kDuplicateId, "term '" + cls.id.str() + "' already registered",
                {{"term", cls.id.str()}});
  if (cls.parents.empty())
    throw Error(errc::kInvalidArgument,
                "extension class '" + cls.id.str() + "' needs at least one parent");
  if (cls.parents.contains(cls.id))
    throw Error(errc::kCycleIntroduced,
                "class '" + cls.id.str() + "' lists itself as parent",
                {{"term", cls.id.str()}});
  for (const auto& p : cls.parents)
    if (!registry.has_class(p))
      throw Error(errc::kDanglingParent,
                  "class '" + cls.id.str() + "' has unknown parent '" + p.str() + "'",
                  {{"term", cls.id.str()}, {"parent", p.str()}});
  auto classes = registry.classes();
  classes.emplace(cls.id, std::move(cls));
  return SchemaRegistry::build(std::move(classes), registry.relations(),
                               registry.issuer_constraints(), false);
}

}  // namespace occo
