#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttcm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A school-choice instance. Schools are dense indices 0..S-1 in roster
/// order; the value S names the null school, which has unlimited capacity,
/// its own priority order, and is never removed from a problem.
///
/// Instances are immutable once finalize() has run; every operation in the
/// library takes them by const reference and is safe to call from multiple
/// threads concurrently.
struct Problem {
  std::vector<std::string> students;
  std::vector<std::string> schools;
  std::vector<int> capacities;  // per real school, each >= 1

  // prefs[i]: permutation of {0..S} (S = null school), most preferred first.
  std::vector<std::vector<int>> prefs;
  // priorities[a] for a in {0..S}: permutation of students, highest first.
  std::vector<std::vector<int>> priorities;

  // Rank caches built by finalize(). pref_rank[i][a] is the position of
  // school a in student i's order (0 = favorite); prio_rank[a][i] is the
  // number of students ranked strictly above i at school a.
  std::vector<std::vector<int>> pref_rank;
  std::vector<std::vector<int>> prio_rank;

  int num_students() const { return static_cast<int>(students.size()); }
  int num_schools() const { return static_cast<int>(schools.size()); }
  int null_school() const { return num_schools(); }
  bool is_null(int a) const { return a == null_school(); }

  // a P_i b
  bool prefers(int i, int a, int b) const { return pref_rank[i][a] < pref_rank[i][b]; }
  // a R_i b
  bool weakly_prefers(int i, int a, int b) const { return pref_rank[i][a] <= pref_rank[i][b]; }
  // i has strictly higher priority than j at school a
  bool outranks(int a, int i, int j) const { return prio_rank[a][i] < prio_rank[a][j]; }

  int favorite(int i) const { return prefs[i][0]; }
  int top_student(int a) const { return priorities[a][0]; }

  const std::string& student_name(int i) const { return students[i]; }
  std::string school_name(int a) const { return is_null(a) ? "null" : schools[a]; }
  std::optional<int> student_index(const std::string& id) const;
  /// Resolves a school id; "null" names the null school.
  std::optional<int> school_index(const std::string& id) const;

  /// Builds the rank caches and checks structural invariants (orders are
  /// permutations, capacities positive). Throws Error on violation.
  void finalize();

  bool operator==(const Problem& o) const {
    return students == o.students && schools == o.schools &&
           capacities == o.capacities && prefs == o.prefs &&
           priorities == o.priorities;
  }
};

/// A total assignment student -> school-or-null. Construct through
/// make_matching so capacity feasibility is checked up front.
struct Matching {
  std::vector<int> assignment;

  int at(int i) const { return assignment[i]; }
  bool operator==(const Matching&) const = default;
};

/// Throws Error if the assignment is not total, references unknown slots,
/// or overfills a real school.
Matching make_matching(const Problem& problem, std::vector<int> assignment);
bool capacity_feasible(const Problem& problem, const std::vector<int>& assignment);

/// Renders "(1:b, 2:b, 3:null)" in student roster order.
std::string format_matching(const Problem& problem, const Matching& m);

// ---------------------------------------------------------------------------
// Validation of raw input

struct RawSchool {
  std::string id;
  int capacity = 0;
};

/// Unchecked problem data, as read from a file. Preference and priority
/// lists may be truncated or missing entirely; validate() completes them.
struct RawProblem {
  std::vector<std::string> students;
  std::vector<RawSchool> schools;
  std::vector<std::pair<std::string, std::vector<std::string>>> preferences;
  std::vector<std::pair<std::string, std::vector<std::string>>> priorities;
};

struct ValidationResult {
  std::optional<Problem> problem;  // set iff errors is empty
  std::vector<std::string> errors;

  bool ok() const { return problem.has_value(); }
};

/// Checks identifiers, capacities and list contents, then completes
/// truncated orders deterministically:
///   - a preference list gets "null" appended if absent, then every school
///     it omits, in roster order, below null;
///   - a priority list gets every student it omits appended in roster order;
///   - a missing priority list (including the null school's) defaults to
///     roster order.
ValidationResult validate(const RawProblem& raw);
Problem validate_or_throw(const RawProblem& raw);

// ---------------------------------------------------------------------------
// Reduced problems

/// The subproblem obtained from a parent by deleting a set of students
/// together with one seat per deleted student (the seat they vacate).
/// Schools whose remaining capacity hits zero are dropped and all orders
/// are projected onto the survivors.
struct ReducedProblem {
  Problem problem;
  std::vector<int> removed;         // parent student indices, ascending
  std::vector<int> student_parent;  // reduced student index -> parent index
  std::vector<int> school_parent;   // reduced school index -> parent index
  std::vector<int> seats_removed;   // per parent school

  /// Restricts a parent matching to the surviving students, re-expressed
  /// in the reduced problem's school indexing.
  Matching project_matching(const Problem& parent, const Matching& m) const;
};

/// Removes `removed` and the seats they hold under `m`. Students assigned
/// to the null school vacate nothing. Throws Error on unknown students.
ReducedProblem reduce_by_removal(const Problem& problem, const Matching& m,
                                 const std::vector<int>& removed);

/// Shared removal engine: deletes the given students, decrementing each
/// real school's capacity once per entry of `vacated_seats` naming it.
/// Output maps are optional.
Problem remove_and_project(const Problem& problem, const std::vector<int>& removed_sorted,
                           const std::vector<int>& vacated_seats,
                           std::vector<int>* student_parent = nullptr,
                           std::vector<int>* school_parent = nullptr,
                           std::vector<int>* seats_removed = nullptr);

// ---------------------------------------------------------------------------
// Exhaustive matching enumeration (oracle support)

/// Visits every capacity-feasible total assignment exactly once, in
/// lexicographic order by (student, school index). Guarded: throws Error
/// when the instance has more than `max_students` students.
void for_each_matching(const Problem& problem,
                       const std::function<void(const Matching&)>& fn,
                       int max_students = 7);

std::vector<Matching> all_matchings(const Problem& problem, int max_students = 7);

}  // namespace ttcm
