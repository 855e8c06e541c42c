#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "occo/graph.hpp"
#include "occo/validity.hpp"

namespace occo {

struct CompetencyProfile {
  EntityId holder;
  // competence entity -> sources (credential ids and/or bearer_of assertion ids)
  std::map<EntityId, std::vector<EntityId>> held;

  friend bool operator==(const CompetencyProfile&, const CompetencyProfile&) = default;
};

struct JobDescription {
  EntityId id;
  EntityId employer;
  std::map<EntityId, double> required;  // competence entity -> weight

  friend bool operator==(const JobDescription&, const JobDescription&) = default;
};

struct MatchReport {
  EntityId job;
  EntityId holder;
  double score = 0.0;
  std::vector<EntityId> matched;
  std::vector<EntityId> missing;

  friend bool operator==(const MatchReport&, const MatchReport&) = default;
};

struct CredentialTemplate {
  EntityId id;
  std::set<EntityId> covers;
  double cost = 1.0;
};

struct Pathway {
  std::vector<EntityId> credentials;  // greedy selection order
  double total_cost = 0.0;
  std::set<EntityId> newly_covered;
};

struct WhatIfResult {
  EntityId job;
  double old_score = 0.0;
  double new_score = 0.0;

  friend bool operator==(const WhatIfResult&, const WhatIfResult&) = default;
};

struct RecruitSuggestion {
  EntityId holder;
  EntityId template_id;
  std::size_t benefiting_jobs = 0;

  friend bool operator==(const RecruitSuggestion&, const RecruitSuggestion&) = default;
};

struct ProfilePolicy {
  bool valid_only = true;
  ValidityOptions validity;
};

namespace detail {

inline const TermId& term_competence() { static const TermId t("competence"); return t; }
inline const TermId& term_job_description() { static const TermId t("job_description"); return t; }
inline const TermId& rel_requires_competence() {
  static const TermId t("requires_competence");
  return t;
}

inline void require_class(const GraphSnapshot& g, const EntityId& id, const TermId& cls) {
  const auto& e = g.entity(id);
  if (!g.schema().is_subclass_of(e.ont_class, cls))
    throw Error(errc::kWrongClass,
                "entity '" + id.str() + "' of class '" + e.ont_class.str() + "' is not a " +
                    cls.str(),
                {{"entity", id.str()}, {"expected", cls.str()}});
}

}  // namespace detail

inline CompetencyProfile infer_profile(const GraphSnapshot& g, const EntityId& holder,
                                       const Date& at, const ProfilePolicy& policy = {}) {
  using namespace detail;
  require_class(g, holder, term_organism());
  CompetencyProfile p{holder, {}};
  for (const auto* b : g.from(holder, rel_bearer_of()))
    if (b->active_at(at) && g.is_a(b->object, term_competence()))
      p.held[b->object].push_back(b->id);
  for (const auto* about : g.to(holder, rel_is_about())) {
    if (!about->active_at(at) || !g.is_a(about->subject, term_credential())) continue;
    const EntityId& cred = about->subject;
    if (policy.valid_only && !classify_credential(g, cred, at, policy.validity).valid())
      continue;
    for (const auto* e : g.from(cred, rel_evidence_of()))
      if (e->active_at(at)) p.held[e->object].push_back(cred);
  }
  for (auto& [_, sources] : p.held) {
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  }
  return p;
}

// Reads a job description entity: competences from active
// requires_competence edges, weights from `weight.<competence>` attributes
// (default 1.0), employer from the `employer` attribute.
inline JobDescription load_job(const GraphSnapshot& g, const EntityId& job, const Date& at) {
  using namespace detail;
  require_class(g, job, term_job_description());
  const auto& e = g.entity(job);
  JobDescription jd{job, {}, {}};
  auto employer = e.text("employer");
  if (!employer)
    throw Error(errc::kInvalidArgument, "job '" + job.str() + "' has no employer attribute",
                {{"entity", job.str()}});
  jd.employer = EntityId(*employer);
  require_class(g, jd.employer, term_organization());
  for (const auto* r : g.from(job, rel_requires_competence())) {
    if (!r->active_at(at)) continue;
    const double w = e.number("weight." + r->object.str()).value_or(1.0);
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(errc::kInvalidArgument,
                  "job '" + job.str() + "' has non-positive weight for '" + r->object.str() + "'",
                  {{"entity", job.str()}});
    jd.required[r->object] = w;
  }
  return jd;
}

inline std::vector<JobDescription> load_jobs(const GraphSnapshot& g, const Date& at) {
  std::vector<JobDescription> out;
  for (const auto& [id, e] : g.entities())
    if (g.schema().is_subclass_of(e.ont_class, detail::term_job_description()))
      out.push_back(load_job(g, id, at));
  return out;
}

// A held competence satisfies a required one if it is the same entity or its
// class is a proper subclass of the required competence's class. Distinct
// entities of the same class are distinct competences.
inline bool satisfies(const GraphSnapshot& g, const EntityId& held, const EntityId& required) {
  if (held == required) return true;
  const auto* h = g.find_entity(held);
  const auto* r = g.find_entity(required);
  return h && r && h->ont_class != r->ont_class &&
         g.schema().is_subclass_of(h->ont_class, r->ont_class);
}

inline bool profile_covers(const GraphSnapshot& g, const CompetencyProfile& p,
                           const EntityId& required) {
  if (p.held.contains(required)) return true;
  return std::any_of(p.held.begin(), p.held.end(),
                     [&](const auto& kv) { return satisfies(g, kv.first, required); });
}

// score = matched weight / total weight; an empty requirement scores 1.
inline MatchReport score_match(const GraphSnapshot& g, const CompetencyProfile& profile,
                               const JobDescription& job) {
  MatchReport m{job.id, profile.holder, 1.0, {}, {}};
  double total = 0.0, present = 0.0;
  for (const auto& [k, w] : job.required) {
    total += w;
    if (profile_covers(g, profile, k)) {
      present += w;
      m.matched.push_back(k);
    } else {
      m.missing.push_back(k);
    }
  }
  if (total > 0.0) m.score = m.missing.empty() ? 1.0 : present / total;
  return m;
}

inline std::set<EntityId> competency_gap(const GraphSnapshot& g,
                                         const CompetencyProfile& profile,
                                         const JobDescription& job) {
  std::set<EntityId> gap;
  for (const auto& [k, _] : job.required)
    if (!profile_covers(g, profile, k)) gap.insert(k);
  return gap;
}

inline std::vector<MatchReport> rank_jobs(const GraphSnapshot& g,
                                          const CompetencyProfile& profile,
                                          const std::vector<JobDescription>& jobs,
                                          std::size_t k) {
  std::vector<MatchReport> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) out.push_back(score_match(g, profile, j));
  std::sort(out.begin(), out.end(), [](const MatchReport& a, const MatchReport& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.job < b.job;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

inline std::vector<MatchReport> rank_candidates(const GraphSnapshot& g,
                                                const JobDescription& job,
                                                const std::vector<EntityId>& holders,
                                                const Date& at, std::size_t k) {
  std::vector<MatchReport> out;
  out.reserve(holders.size());
  for (const auto& h : holders) out.push_back(score_match(g, infer_profile(g, h, at), job));
  std::sort(out.begin(), out.end(), [](const MatchReport& a, const MatchReport& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.holder < b.holder;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

// Greedy weighted set cover: repeatedly take the template with the best
// newly-covered-per-cost ratio; ties go to lower cost, then lower id.
inline Pathway recommend_pathway(const std::set<EntityId>& gap,
                                 const std::vector<CredentialTemplate>& catalog) {
  for (const auto& t : catalog)
    if (!(t.cost > 0.0) || !std::isfinite(t.cost))
      throw Error(errc::kInvalidArgument,
                  "template '" + t.id.str() + "' must have a positive cost",
                  {{"template", t.id.str()}});

  std::set<EntityId> coverable;
  for (const auto& t : catalog)
    for (const auto& k : t.covers)
      if (gap.contains(k)) coverable.insert(k);
  if (coverable.size() != gap.size()) {
    std::string list;
    for (const auto& k : gap)
      if (!coverable.contains(k)) list += (list.empty() ? "" : ",") + k.str();
    throw Error(errc::kUncoverableGap, "no template covers: " + list, {{"uncovered", list}});
  }

  Pathway p;
  std::set<EntityId> left = gap;
  std::vector<bool> used(catalog.size(), false);
  while (!left.empty()) {
    std::optional<std::size_t> best;
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      if (used[i]) continue;
      const auto& t = catalog[i];
      std::size_t gain = 0;
      for (const auto& k : t.covers) gain += left.contains(k) ? 1 : 0;
      if (gain == 0) continue;
      bool better = !best;
      if (best) {
        const auto& b = catalog[*best];
        // gain / cost > best_gain / b.cost, compared without division
        const double lhs = static_cast<double>(gain) * b.cost;
        const double rhs = static_cast<double>(best_gain) * t.cost;
        if (lhs != rhs) better = lhs > rhs;
        else if (t.cost != b.cost) better = t.cost < b.cost;
        else better = t.id < b.id;
      }
      if (better) {
        best = i;
        best_gain = gain;
      }
    }
    // Unreachable given the coverage check above.
    if (!best) throw Error(errc::kInternalConsistency, "greedy cover stalled");
    used[*best] = true;
    const auto& t = catalog[*best];
    p.credentials.push_back(t.id);
    p.total_cost += t.cost;
    for (const auto& k : t.covers)
      if (left.erase(k)) p.newly_covered.insert(k);
  }
  return p;
}

// Competences evidenced by a credential (template) at `at`.
inline std::set<EntityId> evidenced_competences(const GraphSnapshot& g, const EntityId& cred,
                                                const Date& at) {
  std::set<EntityId> out;
  for (const auto* e : g.from(cred, detail::rel_evidence_of()))
    if (e->active_at(at)) out.insert(e->object);
  return out;
}

inline bool is_template(const GraphSnapshot& g, const EntityId& id) {
  const auto* e = g.find_entity(id);
  return e && e->flag("template") &&
         g.schema().is_subclass_of(e->ont_class, detail::term_credential());
}

// Credential templates in the graph; `covers` holds their evidenced
// competences and `cost` the cost attribute (default 1.0).
inline std::vector<CredentialTemplate> load_templates(const GraphSnapshot& g, const Date& at) {
  std::vector<CredentialTemplate> out;
  for (const auto& [id, e] : g.entities())
    if (is_template(g, id))
      out.push_back({id, evidenced_competences(g, id, at), e.number("cost").value_or(1.0)});
  return out;
}

// Re-expresses template coverage in terms of gap ids, using subclass
// satisfaction.
inline std::vector<CredentialTemplate> catalog_for_gap(
    const GraphSnapshot& g, const std::set<EntityId>& gap,
    const std::vector<CredentialTemplate>& templates) {
  std::vector<CredentialTemplate> out;
  for (const auto& t : templates) {
    CredentialTemplate m{t.id, {}, t.cost};
    for (const auto& r : gap)
      for (const auto& k : t.covers)
        if (satisfies(g, k, r)) m.covers.insert(r);
    out.push_back(std::move(m));
  }
  return out;
}

inline Pathway pathway_for(const GraphSnapshot& g, const EntityId& holder,
                           const EntityId& job, const Date& at) {
  const auto profile = infer_profile(g, holder, at);
  const auto gap = competency_gap(g, profile, load_job(g, job, at));
  return recommend_pathway(gap, catalog_for_gap(g, gap, load_templates(g, at)));
}

inline std::vector<WhatIfResult> what_if(const GraphSnapshot& g,
                                         const CompetencyProfile& profile,
                                         const EntityId& template_id,
                                         const std::vector<JobDescription>& jobs,
                                         const Date& at) {
  if (!is_template(g, template_id))
    throw Error(errc::kUnknownTemplate, "unknown credential template '" + template_id.str() + "'",
                {{"template", template_id.str()}});
  CompetencyProfile extended = profile;
  for (const auto& k : evidenced_competences(g, template_id, at)) {
    auto& sources = extended.held[k];
    if (std::find(sources.begin(), sources.end(), template_id) == sources.end())
      sources.push_back(template_id);
  }
  std::vector<WhatIfResult> out;
  for (const auto& j : jobs) {
    const double before = score_match(g, profile, j).score;
    const double after = score_match(g, extended, j).score;
    if (after > before) out.push_back({j.id, before, after});
  }
  std::sort(out.begin(), out.end(), [](const WhatIfResult& a, const WhatIfResult& b) {
    const double ga = a.new_score - a.old_score, gb = b.new_score - b.old_score;
    if (ga != gb) return ga > gb;
    return a.job < b.job;
  });
  return out;
}

inline std::vector<RecruitSuggestion> recommend_recruits(
    const GraphSnapshot& g, const EntityId& provider, const std::vector<EntityId>& holders,
    const std::vector<JobDescription>& jobs, const Date& at, std::size_t k) {
  detail::require_class(g, provider, detail::term_organization());
  std::vector<EntityId> owned;
  for (const auto& [id, e] : g.entities())
    if (is_template(g, id) && e.text("owned_by") == provider.str()) owned.push_back(id);
  if (owned.empty())
    throw Error(errc::kProviderHasNoTemplates,
                "organization '" + provider.str() + "' owns no credential templates",
                {{"entity", provider.str()}});
  std::vector<RecruitSuggestion> out;
  for (const auto& h : holders) {
    const auto profile = infer_profile(g, h, at);
    for (const auto& t : owned) {
      const auto n = what_if(g, profile, t, jobs, at).size();
      if (n > 0) out.push_back({h, t, n});
    }
  }
  std::sort(out.begin(), out.end(), [](const RecruitSuggestion& a, const RecruitSuggestion& b) {
    if (a.benefiting_jobs != b.benefiting_jobs) return a.benefiting_jobs > b.benefiting_jobs;
    if (a.holder != b.holder) return a.holder < b.holder;
    return a.template_id < b.template_id;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

// Entities that can hold credentials, id-ordered.
inline std::vector<EntityId> all_holders(const GraphSnapshot& g) {
  std::vector<EntityId> out;
  for (const auto& [id, e] : g.entities())
    if (g.schema().is_subclass_of(e.ont_class, detail::term_organism())) out.push_back(id);
  return out;
}

}  // namespace occo
