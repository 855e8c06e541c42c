#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "occo/graph.hpp"

namespace occo {

enum class ReasonCode {
  kNoIssuance,
  kHolderMissing,
  kUnauthorizedIssuer,
  kAccreditationInactive,
  kIssuerTypeMismatch,
  kCompetenceUnsupported,
};

inline constexpr std::array<ReasonCode, 6> kAllReasonCodes = {
    ReasonCode::kNoIssuance,         ReasonCode::kHolderMissing,
    ReasonCode::kUnauthorizedIssuer, ReasonCode::kAccreditationInactive,
    ReasonCode::kIssuerTypeMismatch, ReasonCode::kCompetenceUnsupported};

inline std::string_view to_string(ReasonCode c) {
  switch (c) {
    case ReasonCode::kNoIssuance: return "NO_ISSUANCE";
    case ReasonCode::kHolderMissing: return "HOLDER_MISSING";
    case ReasonCode::kUnauthorizedIssuer: return "UNAUTHORIZED_ISSUER";
    case ReasonCode::kAccreditationInactive: return "ACCREDITATION_INACTIVE";
    case ReasonCode::kIssuerTypeMismatch: return "ISSUER_TYPE_MISMATCH";
    case ReasonCode::kCompetenceUnsupported: return "COMPETENCE_UNSUPPORTED";
  }
  return "?";
}

inline std::optional<ReasonCode> parse_reason_code(std::string_view s) {
  for (auto c : kAllReasonCodes)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

enum class ValidityStatus { kValid, kInvalid };

inline std::string_view to_string(ValidityStatus s) {
  return s == ValidityStatus::kValid ? "Valid" : "Invalid";
}

enum class RuleStatus { kPass, kFail, kSkipped };

inline std::string_view to_string(RuleStatus s) {
  switch (s) {
    case RuleStatus::kPass: return "PASS";
    case RuleStatus::kFail: return "FAIL";
    case RuleStatus::kSkipped: return "SKIPPED";
  }
  return "?";
}

struct RuleOutcome {
  std::string_view rule;  // "R1".."R5"
  std::string_view name;
  RuleStatus status = RuleStatus::kSkipped;
  std::optional<ReasonCode> code;
  std::vector<EntityId> consulted;
};

struct ValidityVerdict {
  EntityId credential;
  Date at;
  ValidityStatus status = ValidityStatus::kInvalid;
  std::vector<ReasonCode> reasons;  // empty iff status is Valid
  std::vector<EntityId> trace;      // assertion ids, rule order, no repeats
  std::array<RuleOutcome, 5> rules;

  // Resolved issuance context, when R1 / R2 succeeded.
  std::optional<EntityId> issuer;
  std::optional<EntityId> issuing_process;
  std::optional<Date> issued_on;
  std::optional<EntityId> holder;

  bool valid() const { return status == ValidityStatus::kValid; }
  bool has(ReasonCode c) const {
    return std::find(reasons.begin(), reasons.end(), c) != reasons.end();
  }
};

struct ValidityOptions {
  // When set, an accreditation revoked after issuance but before the query
  // date also invalidates the credential.
  bool strict_revocation = false;
};

namespace detail {

inline const TermId& term_credential() { static const TermId t("credential"); return t; }
inline const TermId& term_organism() { static const TermId t("organism"); return t; }
inline const TermId& term_organization() { static const TermId t("organization"); return t; }
inline const TermId& term_issuing_process() {
  static const TermId t("credential_issuing_process");
  return t;
}
inline const TermId& term_grantor_role() {
  static const TermId t("credential_grantor_role");
  return t;
}
inline const TermId& rel_has_output() { static const TermId t("has_output"); return t; }
inline const TermId& rel_has_agent() { static const TermId t("has_agent"); return t; }
inline const TermId& rel_is_about() { static const TermId t("is_about"); return t; }
inline const TermId& rel_accredited_by() { static const TermId t("accredited_by"); return t; }
inline const TermId& rel_bearer_of() { static const TermId t("bearer_of"); return t; }
inline const TermId& rel_evidence_of() { static const TermId t("evidence_of"); return t; }
inline const TermId& rel_prescribes() { static const TermId t("prescribes"); return t; }
inline const TermId& rel_produces() { static const TermId t("produces"); return t; }

struct IssuanceCandidate {
  const Assertion* output;  // has_output(process, credential)
  const Assertion* agent;   // has_agent(process, issuer)
  Date issued_on;
};

struct AuthorityCheck {
  std::optional<ReasonCode> authority;   // R3
  bool type_mismatch = false;            // R4
  std::vector<EntityId> consulted;       // R3 evidence
};

inline AuthorityCheck check_authority(const GraphSnapshot& g, const Entity& credential,
                                      const IssuanceCandidate& c, const Date& at,
                                      const ValidityOptions& opts) {
  AuthorityCheck out;
  const EntityId& issuer_id = c.agent->object;
  const Entity& issuer = g.entity(issuer_id);
  const Date& d = c.issued_on;

  // Reified deontic machinery: grantor roles borne at issuance, and the
  // regulations / declarations that prescribe and produce them.
  for (const auto* b : g.from(issuer_id, rel_bearer_of())) {
    if (!b->active_at(d) || !g.is_a(b->object, term_grantor_role())) continue;
    out.consulted.push_back(b->id);
    for (const auto* p : g.to(b->object, rel_prescribes())) {
      out.consulted.push_back(p->id);
      for (const auto* q : g.to(p->subject, rel_produces())) out.consulted.push_back(q->id);
    }
  }

  const auto accreditations = g.from(issuer_id, rel_accredited_by());
  std::vector<const Assertion*> supporting;
  for (const auto* a : accreditations) {
    const bool ok = a->active_at(d) && (!opts.strict_revocation || a->active_at(at));
    if (ok) supporting.push_back(a);
  }
  if (accreditations.empty()) {
    out.authority = ReasonCode::kUnauthorizedIssuer;
  } else if (supporting.empty()) {
    out.authority = ReasonCode::kAccreditationInactive;
    for (const auto* a : accreditations) out.consulted.push_back(a->id);
  } else {
    for (const auto* a : supporting) out.consulted.push_back(a->id);
  }

  const auto& schema = g.schema();
  for (const auto& ic : schema.issuer_constraints()) {
    if (!schema.is_subclass_of(credential.ont_class, ic.credential_class)) continue;
    const bool by_class = schema.is_subclass_of(issuer.ont_class, ic.required_issuer_class);
    const bool by_flag = ic.authorization_flag && issuer.flag(*ic.authorization_flag);
    if (!by_class && !by_flag) out.type_mismatch = true;
  }
  return out;
}

}  // namespace detail

// Decides validity of `cred` at `at`. Rules are evaluated in order and all
// failures are collected; R3-R5 are skipped without an issuance and R5 is
// skipped without a unique holder.
inline ValidityVerdict classify_credential(const GraphSnapshot& g, const EntityId& cred,
                                           const Date& at,
                                           const ValidityOptions& opts = {}) {
  using namespace detail;
  const Entity& credential = g.entity(cred);
  if (!g.schema().is_subclass_of(credential.ont_class, term_credential()))
    throw Error(errc::kNotACredential,
                "entity '" + cred.str() + "' of class '" + credential.ont_class.str() +
                    "' is not a credential",
                {{"entity", cred.str()}});

  ValidityVerdict v;
  v.credential = cred;
  v.at = at;
  auto rule = [](std::string_view id, std::string_view name) {
    RuleOutcome o;
    o.rule = id;
    o.name = name;
    return o;
  };
  v.rules = {rule("R1", "issuance"), rule("R2", "holder"), rule("R3", "issuer_authority"),
             rule("R4", "issuer_type"), rule("R5", "competence")};
  auto& r1 = v.rules[0];
  auto& r2 = v.rules[1];
  auto& r3 = v.rules[2];
  auto& r4 = v.rules[3];
  auto& r5 = v.rules[4];

  // R1: an issuing process with this credential as output and an
  // organization as agent at the issuance date, no later than `at`.
  std::vector<IssuanceCandidate> candidates;
  const auto outputs = g.to(cred, rel_has_output());
  for (const auto* o : outputs) {
    if (!g.is_a(o->subject, term_issuing_process())) continue;
    const Date d = o->valid_from;
    if (!o->active_at(d) || at < d) continue;
    for (const auto* a : g.from(o->subject, rel_has_agent()))
      if (a->active_at(d) && g.is_a(a->object, term_organization()))
        candidates.push_back({o, a, d});
  }

  std::optional<IssuanceCandidate> chosen;
  std::optional<AuthorityCheck> authority;
  if (candidates.empty()) {
    r1.status = RuleStatus::kFail;
    r1.code = ReasonCode::kNoIssuance;
    for (const auto* o : outputs) r1.consulted.push_back(o->id);
  } else {
    // Prefer the first issuance (by assertion ids) that is fully authorized.
    for (const auto& c : candidates) {
      auto check = check_authority(g, credential, c, at, opts);
      const bool clean = !check.authority && !check.type_mismatch;
      if (!chosen || clean) {
        chosen = c;
        authority = std::move(check);
      }
      if (clean) break;
    }
    r1.status = RuleStatus::kPass;
    r1.consulted = {chosen->output->id, chosen->agent->id};
    v.issuing_process = chosen->output->subject;
    v.issuer = chosen->agent->object;
    v.issued_on = chosen->issued_on;
  }

  // R2: exactly one organism the credential is about.
  std::vector<const Assertion*> holders;
  for (const auto* a : g.from(cred, rel_is_about()))
    if (a->active_at(at) && g.is_a(a->object, term_organism())) holders.push_back(a);
  for (const auto* a : holders) r2.consulted.push_back(a->id);
  if (holders.size() == 1) {
    r2.status = RuleStatus::kPass;
    v.holder = holders.front()->object;
  } else {
    r2.status = RuleStatus::kFail;
    r2.code = ReasonCode::kHolderMissing;
  }

  if (chosen) {
    r3.consulted = authority->consulted;
    r3.status = authority->authority ? RuleStatus::kFail : RuleStatus::kPass;
    r3.code = authority->authority;
    r4.status = authority->type_mismatch ? RuleStatus::kFail : RuleStatus::kPass;
    if (authority->type_mismatch) r4.code = ReasonCode::kIssuerTypeMismatch;

    // R5: every evidenced competence is borne by the holder at `at`.
    if (v.holder) {
      bool supported = true;
      const auto borne = g.from(*v.holder, rel_bearer_of());
      for (const auto* e : g.from(cred, rel_evidence_of())) {
        if (!e->active_at(at)) continue;
        r5.consulted.push_back(e->id);
        auto it = std::find_if(borne.begin(), borne.end(), [&](const Assertion* b) {
          return b->object == e->object && b->active_at(at);
        });
        if (it == borne.end()) supported = false;
        else r5.consulted.push_back((*it)->id);
      }
      r5.status = supported ? RuleStatus::kPass : RuleStatus::kFail;
      if (!supported) r5.code = ReasonCode::kCompetenceUnsupported;
    }
  }

  std::set<EntityId> seen;
  for (const auto& r : v.rules) {
    if (r.code) v.reasons.push_back(*r.code);
    for (const auto& id : r.consulted)
      if (seen.insert(id).second) v.trace.push_back(id);
  }
  v.status = v.reasons.empty() ? ValidityStatus::kValid : ValidityStatus::kInvalid;
  return v;
}

// Active accreditations of an organization at `at`, id-ordered:
// (quality assurance group, accreditation assertion).
inline std::vector<std::pair<EntityId, EntityId>> accreditation_chain(
    const GraphSnapshot& g, const EntityId& agency, const Date& at) {
  const Entity& e = g.entity(agency);
  if (!g.schema().is_subclass_of(e.ont_class, detail::term_organization()))
    throw Error(errc::kWrongClass,
                "entity '" + agency.str() + "' of class '" + e.ont_class.str() +
                    "' is not an organization",
                {{"entity", agency.str()}});
  std::vector<std::pair<EntityId, EntityId>> out;
  for (const auto* a : g.from(agency, detail::rel_accredited_by()))
    if (a->active_at(at)) out.emplace_back(a->object, a->id);
  return out;
}

inline std::string render_verdict_line(const ValidityVerdict& v) {
  std::string out = v.credential.str() + " " + std::string(to_string(v.status));
  for (auto c : v.reasons) {
    out += ' ';
    out += to_string(c);
  }
  return out;
}

// One line per rule, PASS/FAIL/SKIPPED, with the assertion ids consulted.
inline std::string explain(const GraphSnapshot& g, const EntityId& cred, const Date& at,
                           const ValidityOptions& opts = {}) {
  const auto v = classify_credential(g, cred, at, opts);
  std::string out = "explain-format 1\ncredential " + cred.str() + " at " + at.str() + "\n";
  for (const auto& r : v.rules) {
    out += std::string(r.rule) + ' ' + std::string(r.name) + ' ' +
           std::string(to_string(r.status));
    if (r.code) out += ' ' + std::string(to_string(*r.code));
    if (r.status != RuleStatus::kSkipped) {
      out += " consulted=[";
      for (std::size_t i = 0; i < r.consulted.size(); ++i) {
        if (i) out += ',';
        out += r.consulted[i].str();
      }
      out += ']';
    }
    out += '\n';
  }
  out += "verdict " + render_verdict_line(v) + "\n";
  return out;
}

}  // namespace occo
