#pragma once

#include <utility>
#include <vector>

#include "ttcm/model.hpp"

namespace ttcm {

/// B operator: the schools (null included) that are the favorite of at
/// least one student in `group`. Sorted, duplicate-free.
std::vector<int> best_schools(const Problem& problem, const std::vector<int>& group);

/// T operator: the students holding the highest priority at some school in
/// `school_set` (school indices may include the null school). Sorted.
std::vector<int> top_students(const Problem& problem, const std::vector<int>& school_set);

/// The maximal fixed point of I' = T(B(I')): all students lying on a cycle
/// of the pointing graph in which each student points to their favorite
/// member of schools+null and each such school points to its top-priority
/// student. Nonempty whenever the problem has students. Sorted.
std::vector<int> mutual_best_group(const Problem& problem);

/// Removes the mutual best group together with one seat at each member's
/// favorite school, drops schools left without seats and projects the
/// orders. Throws Error unless `group` is exactly mutual_best_group().
Problem subproblem_after_group(const Problem& problem, const std::vector<int>& group,
                               std::vector<int>* student_parent = nullptr,
                               std::vector<int>* school_parent = nullptr);

/// One level of the mutual-best-group decomposition.
struct MbgLevel {
  Problem subproblem;        // the problem this level's group was extracted from
  std::vector<int> group;    // members, as original-problem indices, sorted
  // (original student, original school-or-null): each member's favorite in
  // `subproblem`, re-expressed in original indices. This is also the seat
  // the member takes under the compact top-trading-cycles evaluation.
  std::vector<std::pair<int, int>> favorites;
  std::vector<int> student_origin;  // subproblem student index -> original
  std::vector<int> school_origin;   // subproblem school index -> original
};

/// The ordered partition of the students into mutual best groups plus the
/// chain of reduced subproblems. Empty problems yield an empty sequence.
struct MbgSequence {
  std::vector<MbgLevel> levels;

  int group_count() const { return static_cast<int>(levels.size()); }
  /// Union of the groups selected by `mask` (bit k = level k), sorted, in
  /// original indices.
  std::vector<int> union_of_groups(unsigned mask) const;
};

MbgSequence mbg_sequence(const Problem& problem);

/// Cycle support: for a functional graph given as a successor array
/// (out-degree one, successor(v) in [0, size)), marks every vertex that
/// lies on a cycle.
std::vector<bool> vertices_on_cycles(const std::vector<int>& successor);

}  // namespace ttcm
