#pragma once

#include <optional>
#include <vector>

#include "ttcm/json_io.hpp"
#include "ttcm/model.hpp"

namespace ttcm {

/// Outcome of a matching-level axiom check. A failing verdict always comes
/// with a witness that replays against the raw definition; `cases` counts
/// the search space the checker covered.
template <typename W>
struct Verdict {
  bool pass = true;
  std::optional<W> witness;
  long long cases = 0;
};

// --- Pareto efficiency -----------------------------------------------------

struct ParetoWitness {
  Matching dominating;
};

/// Brute-force search over every feasible matching for a Pareto
/// improvement. Subject to the enumeration size guard.
Verdict<ParetoWitness> is_pareto_efficient(const Problem& problem, const Matching& m,
                                           int enum_guard = 7);

// --- Stability ---------------------------------------------------------------

/// occupant empty: seat at `school` is wasted (student prefers it and it is
/// not full). occupant set: justified envy against that student.
struct StabilityWitness {
  int student = -1;
  int school = -1;
  std::optional<int> occupant;
};

struct StabilityVerdict {
  bool pass = true;
  bool non_wasteful = true;
  bool fair = true;
  std::optional<StabilityWitness> witness;
  long long cases = 0;
};

StabilityVerdict is_stable(const Problem& problem, const Matching& m);

// --- Respect of quota-priorities --------------------------------------------

/// student sits within the top-capacity slice of school's priority order
/// yet strictly prefers school to their assignment. The null school's
/// unlimited capacity puts every student inside its slice.
struct QuotaPriorityWitness {
  int student = -1;
  int school = -1;
};

Verdict<QuotaPriorityWitness> respects_quota_priorities(const Problem& problem,
                                                        const Matching& m);

// --- Quota-rationality -------------------------------------------------------

/// Removing `removed` (with their seats) leaves a reduced problem whose
/// projected matching fails respect of quota-priorities at (student,
/// school), reported in parent indices.
struct RemovalWitness {
  std::vector<int> removed;
  int student = -1;
  int school = -1;
};

struct QuotaRationalityVerdict {
  bool pass = true;
  std::optional<RemovalWitness> witness;
  long long cases = 0;
  /// Set when the subset guard forced the stability fallback; the verdict
  /// then mirrors is_stable (the two axioms coincide) and carries no
  /// removal witness.
  bool via_stability_proxy = false;
  std::optional<StabilityWitness> proxy_witness;
};

/// Iterates every proper student subset (the empty set included) in
/// ascending bitmask order. Falls back to the stability check when the
/// roster exceeds `subset_guard`.
QuotaRationalityVerdict is_quota_rational(const Problem& problem, const Matching& m,
                                          int subset_guard = 12);

// --- MBG-quota-rationality ---------------------------------------------------

enum class MbgSubsets {
  all,     // every union of groups (power-set reading)
  prefix,  // prefix unions I_1 ... I_k only
};

struct MbgRemovalWitness {
  std::vector<int> group_levels;  // which groups of the sequence were removed
  std::vector<int> removed;       // their union, parent student indices
  int student = -1;
  int school = -1;
};

Verdict<MbgRemovalWitness> is_mbg_quota_rational(const Problem& problem, const Matching& m,
                                                 MbgSubsets reading = MbgSubsets::all);

// --- Respect of mutual best groups -------------------------------------------

struct MbgRespectWitness {
  int level = -1;
  std::vector<int> assigned;  // schools the group holds under m
  std::vector<int> expected;  // the group's favorite schools at its level
};

struct MbgRespectVerdict {
  bool pass = true;
  std::optional<MbgRespectWitness> witness;
  /// Stricter per-student reading: every group member holds exactly their
  /// own favorite. Informational; the verdict is the set comparison.
  bool per_student_pass = true;
  long long cases = 0;
};

MbgRespectVerdict respects_mbgs(const Problem& problem, const Matching& m);

// --- Witness replay -----------------------------------------------------------

// Each replay re-derives the violation from the stored witness and the raw
// definition, sharing no code with the search that produced it.
bool replay_pareto_witness(const Problem&, const Matching&, const ParetoWitness&);
bool replay_stability_witness(const Problem&, const Matching&, const StabilityWitness&);
bool replay_quota_priority_witness(const Problem&, const Matching&, const QuotaPriorityWitness&);
bool replay_removal_witness(const Problem&, const Matching&, const RemovalWitness&);
bool replay_mbg_removal_witness(const Problem&, const Matching&, const MbgRemovalWitness&);
bool replay_mbg_respect_witness(const Problem&, const Matching&, const MbgRespectWitness&);

// --- Report rendering ----------------------------------------------------------

Json witness_json(const Problem&, const ParetoWitness&);
Json witness_json(const Problem&, const StabilityWitness&);
Json witness_json(const Problem&, const QuotaPriorityWitness&);
Json witness_json(const Problem&, const RemovalWitness&);
Json witness_json(const Problem&, const MbgRemovalWitness&);
Json witness_json(const Problem&, const MbgRespectWitness&);

/// {"axiom": ..., "pass": ..., "witness": ..., "cases": ...}
template <typename V>
Json verdict_json(const Problem& problem, const std::string& axiom, const V& verdict) {
  Json j = Json::object();
  j["axiom"] = axiom;
  j["pass"] = verdict.pass;
  if (verdict.witness)
    j["witness"] = witness_json(problem, *verdict.witness);
  else
    j["witness"] = nullptr;
  j["cases"] = verdict.cases;
  return j;
}

}  // namespace ttcm
