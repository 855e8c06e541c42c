#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "occo/date.hpp"
#include "occo/error.hpp"
#include "occo/ids.hpp"
#include "occo/schema.hpp"

namespace occo {

using AttributeValue = std::variant<std::string, double, bool, Date>;
using Attributes = std::map<std::string, AttributeValue>;

struct Entity {
  EntityId id;
  TermId ont_class;
  std::string label;
  Attributes attributes;

  friend bool operator==(const Entity&, const Entity&) = default;

  const AttributeValue* attribute(const std::string& name) const {
    auto it = attributes.find(name);
    return it == attributes.end() ? nullptr : &it->second;
  }
  bool flag(const std::string& name) const {
    const auto* v = attribute(name);
    return v && std::holds_alternative<bool>(*v) && std::get<bool>(*v);
  }
  std::optional<double> number(const std::string& name) const {
    const auto* v = attribute(name);
    if (v && std::holds_alternative<double>(*v)) return std::get<double>(*v);
    return std::nullopt;
  }
  std::optional<std::string> text(const std::string& name) const {
    const auto* v = attribute(name);
    if (v && std::holds_alternative<std::string>(*v)) return std::get<std::string>(*v);
    return std::nullopt;
  }
};

struct Assertion {
  EntityId id;
  EntityId subject;
  TermId relation;
  EntityId object;
  Date valid_from;
  std::optional<Date> valid_to;
  std::string provenance;

  // Half-open validity interval [valid_from, valid_to).
  bool active_at(const Date& at) const {
    return valid_from <= at && (!valid_to || at < *valid_to);
  }
  friend bool operator==(const Assertion&, const Assertion&) = default;
};

inline const std::set<TermId>& default_abstract_classes() {
  static const std::set<TermId> s = {TermId("entity"), TermId("continuant"),
                                     TermId("occurrent")};
  return s;
}

namespace detail {

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3
                                 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    i += len;
  }
  return true;
}

inline void require_utf8(std::string_view s, std::string_view what) {
  if (!valid_utf8(s))
    throw Error(errc::kInvalidArgument, std::string(what) + " is not valid UTF-8");
}

// Date-shaped strings are stored as dates so that the flat file format
// round-trips without a type tag.
inline Attributes normalize_attributes(Attributes attrs) {
  for (auto& [name, value] : attrs) {
    require_utf8(name, "attribute name");
    if (name.empty()) throw Error(errc::kInvalidArgument, "empty attribute name");
    if (auto* s = std::get_if<std::string>(&value)) {
      require_utf8(*s, "attribute value");
      if (auto d = Date::try_parse(*s)) value = *d;
    } else if (auto* x = std::get_if<double>(&value)) {
      if (!std::isfinite(*x))
        throw Error(errc::kInvalidArgument,
                    "attribute '" + name + "' must be a finite number");
    }
  }
  return attrs;
}

struct Store {
  std::map<EntityId, Entity> entities;
  std::map<EntityId, Assertion> assertions;
  std::map<EntityId, std::vector<EntityId>> outgoing;  // subject -> assertion ids
  std::map<EntityId, std::vector<EntityId>> incoming;  // object  -> assertion ids
};

}  // namespace detail

// Immutable snapshot of the instance graph. Copies are cheap and share
// storage; every mutating operation returns a new snapshot.
class GraphSnapshot {
 public:
  explicit GraphSnapshot(std::shared_ptr<const SchemaRegistry> schema,
                         std::set<TermId> abstract_classes = default_abstract_classes())
      : schema_(std::move(schema)),
        abstract_(std::make_shared<const std::set<TermId>>(std::move(abstract_classes))),
        store_(std::make_shared<const detail::Store>()) {}

  // Snapshot over the shared built-in schema.
  static GraphSnapshot empty() {
    static const auto schema = std::make_shared<const SchemaRegistry>(builtin_schema());
    return GraphSnapshot(schema);
  }

  const SchemaRegistry& schema() const noexcept { return *schema_; }
  const std::shared_ptr<const SchemaRegistry>& schema_ptr() const noexcept {
    return schema_;
  }
  const std::set<TermId>& abstract_classes() const noexcept { return *abstract_; }

  const std::map<EntityId, Entity>& entities() const noexcept { return store_->entities; }
  const std::map<EntityId, Assertion>& assertions() const noexcept {
    return store_->assertions;
  }

  const Entity* find_entity(const EntityId& id) const {
    auto it = store_->entities.find(id);
    return it == store_->entities.end() ? nullptr : &it->second;
  }
  const Entity& entity(const EntityId& id) const {
    if (const auto* e = find_entity(id)) return *e;
    throw Error(errc::kUnknownEntity, "unknown entity '" + id.str() + "'",
                {{"entity", id.str()}});
  }
  const Assertion* find_assertion(const EntityId& id) const {
    auto it = store_->assertions.find(id);
    return it == store_->assertions.end() ? nullptr : &it->second;
  }
  const Assertion& assertion(const EntityId& id) const {
    if (const auto* a = find_assertion(id)) return *a;
    throw Error(errc::kUnknownAssertion, "unknown assertion '" + id.str() + "'",
                {{"assertion", id.str()}});
  }
  bool contains(const EntityId& id) const {
    return store_->entities.contains(id) || store_->assertions.contains(id);
  }

  // Entity is an instance of `cls` (through the subclass closure).
  bool is_a(const EntityId& id, const TermId& cls) const {
    return schema_->is_subclass_of(entity(id).ont_class, cls);
  }

  // All assertions (any validity window) with the given subject/object,
  // optionally restricted to one relation; id-ordered.
  std::vector<const Assertion*> from(const EntityId& subject,
                                     const std::optional<TermId>& relation = {}) const {
    return collect(store_->outgoing, subject, relation);
  }
  std::vector<const Assertion*> to(const EntityId& object,
                                   const std::optional<TermId>& relation = {}) const {
    return collect(store_->incoming, object, relation);
  }

  // Structural equality: same schema content, entities and assertions.
  friend bool operator==(const GraphSnapshot& a, const GraphSnapshot& b) {
    return (a.schema_ == b.schema_ || *a.schema_ == *b.schema_) &&
           a.store_->entities == b.store_->entities &&
           a.store_->assertions == b.store_->assertions;
  }

  // Checked insertion into a private store; shared by the snapshot
  // operations and the two-pass importer.
  static void insert_entity(const SchemaRegistry& schema,
                            const std::set<TermId>& abstract_classes,
                            detail::Store& store, Entity e) {
    if (e.id.empty()) throw Error(errc::kInvalidArgument, "entity id must be nonempty");
    detail::require_utf8(e.id.str(), "entity id");
    detail::require_utf8(e.label, "entity label");
    if (store.entities.contains(e.id) || store.assertions.contains(e.id))
      throw Error(errc::kDuplicateId, "id '" + e.id.str() + "' already in use",
                  {{"entity", e.id.str()}});
    if (!schema.has_class(e.ont_class))
      throw Error(errc::kUnknownClass, "unknown class '" + e.ont_class.str() + "'",
                  {{"class", e.ont_class.str()}});
    if (abstract_classes.contains(e.ont_class))
      throw Error(errc::kAbstractClass,
                  "class '" + e.ont_class.str() + "' is abstract and cannot be instantiated",
                  {{"class", e.ont_class.str()}});
    e.attributes = detail::normalize_attributes(std::move(e.attributes));
    EntityId id = e.id;
    store.entities.emplace(std::move(id), std::move(e));
  }

  static void insert_assertion(const SchemaRegistry& schema, detail::Store& store,
                               Assertion a) {
    if (a.id.empty()) throw Error(errc::kInvalidArgument, "assertion id must be nonempty");
    detail::require_utf8(a.id.str(), "assertion id");
    detail::require_utf8(a.provenance, "provenance");
    if (store.entities.contains(a.id) || store.assertions.contains(a.id))
      throw Error(errc::kDuplicateId, "id '" + a.id.str() + "' already in use",
                  {{"assertion", a.id.str()}});
    const auto& rel = schema.get_relation(a.relation);
    auto subj = store.entities.find(a.subject);
    auto obj = store.entities.find(a.object);
    if (subj == store.entities.end() || obj == store.entities.end()) {
      const auto& missing = subj == store.entities.end() ? a.subject : a.object;
      throw Error(errc::kDanglingEndpoint,
                  "assertion '" + a.id.str() + "' references unknown entity '" +
                      missing.str() + "'",
                  {{"assertion", a.id.str()}, {"entity", missing.str()}});
    }
    if (!schema.is_subclass_of(subj->second.ont_class, rel.domain))
      throw Error(errc::kSignatureViolation,
                  "subject '" + a.subject.str() + "' of class '" +
                      subj->second.ont_class.str() + "' violates " + rel.id.str() +
                      " domain: must be " + rel.domain.str(),
                  {{"relation", rel.id.str()}, {"expected_domain", rel.domain.str()},
                   {"expected_range", rel.range.str()}, {"position", "subject"}});
    if (!schema.is_subclass_of(obj->second.ont_class, rel.range))
      throw Error(errc::kSignatureViolation,
                  "object '" + a.object.str() + "' of class '" +
                      obj->second.ont_class.str() + "' violates " + rel.id.str() +
                      " range: must be " + rel.range.str(),
                  {{"relation", rel.id.str()}, {"expected_domain", rel.domain.str()},
                   {"expected_range", rel.range.str()}, {"position", "object"}});
    if (a.valid_to && *a.valid_to < a.valid_from)
      throw Error(errc::kTemporalOrder,
                  "assertion '" + a.id.str() + "' ends before it starts",
                  {{"assertion", a.id.str()}});
    store.outgoing[a.subject].push_back(a.id);
    store.incoming[a.object].push_back(a.id);
    EntityId id = a.id;
    store.assertions.emplace(std::move(id), std::move(a));
  }

  GraphSnapshot with_store(std::shared_ptr<const detail::Store> store) const {
    GraphSnapshot g = *this;
    g.store_ = std::move(store);
    return g;
  }
  GraphSnapshot with_schema(std::shared_ptr<const SchemaRegistry> schema) const {
    GraphSnapshot g = *this;
    g.schema_ = std::move(schema);
    return g;
  }
  const detail::Store& store() const noexcept { return *store_; }

 private:
  std::vector<const Assertion*> collect(
      const std::map<EntityId, std::vector<EntityId>>& index, const EntityId& key,
      const std::optional<TermId>& relation) const {
    std::vector<const Assertion*> out;
    auto it = index.find(key);
    if (it == index.end()) return out;
    for (const auto& aid : it->second) {
      const auto& a = store_->assertions.at(aid);
      if (!relation || a.relation == *relation) out.push_back(&a);
    }
    std::sort(out.begin(), out.end(),
              [](const Assertion* x, const Assertion* y) { return x->id < y->id; });
    return out;
  }

  std::shared_ptr<const SchemaRegistry> schema_;
  std::shared_ptr<const std::set<TermId>> abstract_;
  std::shared_ptr<const detail::Store> store_;
};

inline GraphSnapshot add_entity(const GraphSnapshot& graph, Entity e) {
  auto store = std::make_shared<detail::Store>(graph.store());
  GraphSnapshot::insert_entity(graph.schema(), graph.abstract_classes(), *store,
                               std::move(e));
  return graph.with_store(std::move(store));
}

inline GraphSnapshot add_assertion(const GraphSnapshot& graph, Assertion a) {
  auto store = std::make_shared<detail::Store>(graph.store());
  GraphSnapshot::insert_assertion(graph.schema(), *store, std::move(a));
  return graph.with_store(std::move(store));
}

// Closes an assertion's validity interval at `at`.
inline GraphSnapshot revoke(const GraphSnapshot& graph, const EntityId& assertion_id,
                            const Date& at) {
  const auto& a = graph.assertion(assertion_id);
  if (a.valid_to && *a.valid_to <= at)
    throw Error(errc::kAlreadyClosed,
                "assertion '" + assertion_id.str() + "' already closed on " +
                    a.valid_to->str(),
                {{"assertion", assertion_id.str()}});
  if (at < a.valid_from)
    throw Error(errc::kTemporalOrder,
                "cannot revoke '" + assertion_id.str() + "' before it starts (" +
                    a.valid_from.str() + ")",
                {{"assertion", assertion_id.str()}});
  auto store = std::make_shared<detail::Store>(graph.store());
  store->assertions.at(assertion_id).valid_to = at;
  return graph.with_store(std::move(store));
}

// Registers a new schema class on the snapshot's private copy of the schema.
inline GraphSnapshot add_extension_class(const GraphSnapshot& graph, OntClass cls) {
  return graph.with_schema(std::make_shared<const SchemaRegistry>(
      register_extension_class(graph.schema(), std::move(cls))));
}

struct AssertionQuery {
  std::optional<EntityId> subject;
  std::optional<TermId> relation;
  std::optional<EntityId> object;
  Date at;
};

inline std::vector<Assertion> active_assertions(const GraphSnapshot& graph,
                                                const AssertionQuery& q) {
  if (q.subject) graph.entity(*q.subject);
  if (q.object) graph.entity(*q.object);
  if (q.relation) graph.schema().get_relation(*q.relation);
  std::vector<Assertion> out;
  auto keep = [&](const Assertion& a) {
    return (!q.relation || a.relation == *q.relation) &&
           (!q.object || a.object == *q.object) && a.active_at(q.at);
  };
  if (q.subject) {
    for (const auto* a : graph.from(*q.subject, q.relation))
      if (keep(*a)) out.push_back(*a);
  } else if (q.object) {
    for (const auto* a : graph.to(*q.object, q.relation))
      if (keep(*a)) out.push_back(*a);
  } else {
    for (const auto& [_, a] : graph.assertions())
      if (keep(a)) out.push_back(a);
  }
  return out;
}

}  // namespace occo
