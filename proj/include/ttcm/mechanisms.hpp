#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ttcm/model.hpp"

namespace ttcm {

/// A permutation of the student roster; the pick order for serial
/// dictatorship. order[0] chooses first.
struct AgentOrdering {
  std::vector<int> order;
};

AgentOrdering ordering_from_ids(const Problem& problem, const std::vector<std::string>& ids);

/// Named, deterministic map from problems to matchings. Evaluation is pure:
/// many evaluations may run in parallel on shared const problems.
struct Mechanism {
  std::string name;
  std::function<Matching(const Problem&)> eval;

  Matching operator()(const Problem& problem) const { return eval(problem); }
};

/// Top trading cycles, run round by round: students point to their favorite
/// remaining school, every school with seats left (the null school always)
/// points to its highest-priority remaining student, all cycles are cleared,
/// capacities are renewed, empty schools are dropped. The null school trades
/// like any other except that its capacity never runs out.
Matching ttc_stepwise(const Problem& problem);

/// Top trading cycles evaluated through the mutual-best-group sequence:
/// each member of group k receives their favorite school of subproblem k.
/// Independent of ttc_stepwise by construction; the two agree on every
/// problem.
Matching ttc_compact(const Problem& problem);

/// Student-proposing deferred acceptance with simultaneous proposal rounds;
/// returns the student-optimal stable matching. The null school accepts
/// every applicant.
Matching deferred_acceptance(const Problem& problem);

/// Students pick their favorite school with seats remaining, in f-order.
Matching serial_dictatorship(const Problem& problem, const AgentOrdering& f);

/// Two-case fixture mechanism on a fixed three-student roster (see
/// fixtures.hpp): one designated profile maps to (a, b, null), everything
/// else to all-null. Throws Error when the roster primitives differ.
Matching psi_fixture(const Problem& problem);

/// Serial dictatorship under f when all reported preference orders are
/// identical; top trading cycles otherwise.
Matching tilde_mechanism(const Problem& problem, const AgentOrdering& f);

/// Deferred acceptance when the priority structure is Ergin-acyclic; top
/// trading cycles otherwise.
Matching hat_mechanism(const Problem& problem);

/// A generalized priority cycle: schools a != b and distinct students
/// i, j, k with i above j above k at a and k above i at b, plus disjoint
/// filler sets N_a, N_b (sizes q_a - 1 and q_b - 1, drawn from the other
/// students) ranked above j at a and above i at b respectively.
struct ErginWitness {
  int school_a = -1;
  int school_b = -1;
  int i = -1, j = -1, k = -1;
  std::vector<int> filler_a;
  std::vector<int> filler_b;
};

/// True iff the priority structure (priorities + capacities of `problem`)
/// contains no generalized cycle. On false, fills `witness` when given.
/// Preferences play no role.
bool ergin_acyclic(const Problem& problem, ErginWitness* witness = nullptr);

// Factories with the stable names used by the CLI and the report format:
// "ttc", "ttc-compact", "da", "sd:<ids>", "psi", "tilde:<ids>", "hat".
Mechanism make_ttc();
Mechanism make_ttc_compact();
Mechanism make_da();
Mechanism make_sd(const Problem& roster, AgentOrdering f);
Mechanism make_psi();
Mechanism make_tilde(const Problem& roster, AgentOrdering f);
Mechanism make_hat();

/// Resolves a mechanism name, parsing "sd:1,2,3" style orderings against
/// the roster. Throws Error on unknown names or bad orderings.
Mechanism mechanism_by_name(const std::string& name, const Problem& roster);

}  // namespace ttcm
