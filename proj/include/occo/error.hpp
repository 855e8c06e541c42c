#pragma once

#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace occo {

// Stable error codes. Every failure raised by the library carries one of
// these; the CLI prints it and the service maps it to an HTTP status.
namespace errc {
inline constexpr std::string_view kUnknownTerm = "unknown-term";
inline constexpr std::string_view kDuplicateId = "duplicate-id";
inline constexpr std::string_view kDanglingParent = "dangling-parent";
inline constexpr std::string_view kCycleIntroduced = "cycle-introduced";
inline constexpr std::string_view kInvalidTerm = "invalid-term";
inline constexpr std::string_view kInternalConsistency =
    "internal-consistency";
inline constexpr std::string_view kUnknownClass = "unknown-class";
inline constexpr std::string_view kAbstractClass = "abstract-class";
inline constexpr std::string_view kSignatureViolation = "signature-violation";
inline constexpr std::string_view kDanglingEndpoint = "dangling-endpoint";
inline constexpr std::string_view kUnknownAssertion = "unknown-assertion";
inline constexpr std::string_view kAlreadyClosed = "already-closed";
inline constexpr std::string_view kTemporalOrder = "temporal-order";
inline constexpr std::string_view kParseError = "parse-error";
inline constexpr std::string_view kSchemaMismatch = "schema-mismatch";
inline constexpr std::string_view kUnknownEntity = "unknown-entity";
inline constexpr std::string_view kNotACredential = "not-a-credential";
inline constexpr std::string_view kWrongClass = "wrong-class";
inline constexpr std::string_view kDuplicateCtid = "duplicate-ctid";
inline constexpr std::string_view kDanglingOrganization =
    "dangling-organization";
inline constexpr std::string_view kUncoverableGap = "uncoverable-gap";
inline constexpr std::string_view kUnknownTemplate = "unknown-template";
inline constexpr std::string_view kProviderHasNoTemplates =
    "provider-has-no-templates";
inline constexpr std::string_view kInvalidArgument = "invalid-argument";
inline constexpr std::string_view kNotFound = "not-found";
inline constexpr std::string_view kIoError = "io-error";
inline constexpr std::string_view kUsage = "usage";
inline constexpr std::string_view kBindFailure = "bind-failure";
inline constexpr std::string_view kLoadFailure = "load-failure";

inline constexpr std::initializer_list<std::string_view> kAll = {
    kUnknownTerm,        kDuplicateId,          kDanglingParent,
    kCycleIntroduced,    kInvalidTerm,          kInternalConsistency,
    kUnknownClass,       kAbstractClass,        kSignatureViolation,
    kDanglingEndpoint,   kUnknownAssertion,     kAlreadyClosed,
    kTemporalOrder,      kParseError,           kSchemaMismatch,
    kUnknownEntity,      kNotACredential,       kWrongClass,
    kDuplicateCtid,      kDanglingOrganization, kUncoverableGap,
    kUnknownTemplate,    kProviderHasNoTemplates, kInvalidArgument,
    kNotFound,           kIoError,              kUsage,
    kBindFailure,        kLoadFailure};
}  // namespace errc

// Exception type used throughout. `detail` holds small structured context
// (line numbers, offending ids) as string pairs.
class Error : public std::runtime_error {
 public:
  using Detail = std::map<std::string, std::string>;

  Error(std::string_view code, const std::string& message, Detail detail = {})
      : std::runtime_error(message),
        code_(code),
        detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  const Detail& detail() const noexcept { return detail_; }

  // Re-throws with extra context merged into the detail map and prefixed
  // onto the message.
  [[noreturn]] void rethrow_with(const std::string& prefix,
                                 const Detail& extra) const {
    Detail merged = detail_;
    for (const auto& [k, v] : extra) merged.insert_or_assign(k, v);
    throw Error(code_, prefix + what(), std::move(merged));
  }

 private:
  std::string code_;
  Detail detail_;
};

}  // namespace occo
