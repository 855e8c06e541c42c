#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "occo/error.hpp"

namespace occo {

// Schema term identifier: lowercase snake form, `[a-z][a-z0-9_]*`.
class TermId {
 public:
  TermId() = default;
  explicit TermId(std::string value) : value_(std::move(value)) {
    if (!valid(value_))
      throw Error(errc::kInvalidTerm,
                  "invalid term id '" + value_ + "', expected [a-z][a-z0-9_]*",
                  {{"term", value_}});
  }

  static bool valid(std::string_view s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
      if (!ok) return false;
    }
    return true;
  }

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const TermId&, const TermId&) = default;
  friend bool operator==(const TermId&, const TermId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const TermId& t) {
    return os << t.value_;
  }

 private:
  std::string value_;
};

// Opaque instance identifier (entities and assertions share one namespace
// per graph).
class EntityId {
 public:
  EntityId() = default;
  explicit EntityId(std::string value) : value_(std::move(value)) {
    if (value_.empty())
      throw Error(errc::kInvalidArgument, "entity id must be nonempty");
  }

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const EntityId&, const EntityId&) = default;
  friend bool operator==(const EntityId&, const EntityId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const EntityId& e) {
    return os << e.value_;
  }

 private:
  std::string value_;
};

inline namespace literals {
inline TermId operator""_term(const char* s, std::size_t n) {
  return TermId(std::string(s, n));
}
inline EntityId operator""_eid(const char* s, std::size_t n) {
  return EntityId(std::string(s, n));
}
}  // namespace literals

}  // namespace occo

template <>
struct std::hash<occo::TermId> {
  std::size_t operator()(const occo::TermId& t) const noexcept {
    return std::hash<std::string>{}(t.str());
  }
};

template <>
struct std::hash<occo::EntityId> {
  std::size_t operator()(const occo::EntityId& e) const noexcept {
    return std::hash<std::string>{}(e.str());
  }
};
