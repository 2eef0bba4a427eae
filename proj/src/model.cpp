#include "ttcm/model.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ttcm {

std::optional<int> Problem::student_index(const std::string& id) const {
  for (int i = 0; i < num_students(); ++i)
    if (students[i] == id) return i;
  return std::nullopt;
}

std::optional<int> Problem::school_index(const std::string& id) const {
  if (id == "null") return null_school();
  for (int a = 0; a < num_schools(); ++a)
    if (schools[a] == id) return a;
  return std::nullopt;
}

namespace {

bool is_permutation_of_iota(const std::vector<int>& v, int n) {
  if (static_cast<int>(v.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int x : v) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace

void Problem::finalize() {
  const int n = num_students();
  const int s = num_schools();
  if (static_cast<int>(capacities.size()) != s)
    throw Error("problem: capacity vector size mismatch");
  for (int a = 0; a < s; ++a)
    if (capacities[a] < 1) throw Error("problem: capacity of " + schools[a] + " must be >= 1");
  if (static_cast<int>(prefs.size()) != n)
    throw Error("problem: preference profile size mismatch");
  if (static_cast<int>(priorities.size()) != s + 1)
    throw Error("problem: priority profile size mismatch");
  for (int i = 0; i < n; ++i)
    if (!is_permutation_of_iota(prefs[i], s + 1))
      throw Error("problem: preference of " + students[i] + " is not a permutation of the schools");
  for (int a = 0; a <= s; ++a)
    if (!is_permutation_of_iota(priorities[a], n))
      throw Error("problem: priority of " + school_name(a) + " is not a permutation of the students");

  pref_rank.assign(n, std::vector<int>(s + 1, 0));
  for (int i = 0; i < n; ++i)
    for (int r = 0; r <= s; ++r) pref_rank[i][prefs[i][r]] = r;
  prio_rank.assign(s + 1, std::vector<int>(n, 0));
  for (int a = 0; a <= s; ++a)
    for (int r = 0; r < n; ++r) prio_rank[a][priorities[a][r]] = r;
}

bool capacity_feasible(const Problem& problem, const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != problem.num_students()) return false;
  std::vector<int> used(problem.num_schools(), 0);
  for (int a : assignment) {
    if (a < 0 || a > problem.null_school()) return false;
    if (!problem.is_null(a) && ++used[a] > problem.capacities[a]) return false;
  }
  return true;
}

Matching make_matching(const Problem& problem, std::vector<int> assignment) {
  if (!capacity_feasible(problem, assignment))
    throw Error("matching: assignment is not capacity-feasible");
  return Matching{std::move(assignment)};
}

std::string format_matching(const Problem& problem, const Matching& m) {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < problem.num_students(); ++i) {
    if (i) out << ", ";
    out << problem.student_name(i) << ":" << problem.school_name(m.at(i));
  }
  out << ")";
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

ValidationResult validate(const RawProblem& raw) {
  ValidationResult result;
  auto err = [&result](const std::string& msg) { result.errors.push_back(msg); };

  std::unordered_map<std::string, int> student_of;
  for (int i = 0; i < static_cast<int>(raw.students.size()); ++i) {
    if (!student_of.emplace(raw.students[i], i).second)
      err("students[" + std::to_string(i) + "]: duplicate id \"" + raw.students[i] + "\"");
  }
  std::unordered_map<std::string, int> school_of;
  for (int a = 0; a < static_cast<int>(raw.schools.size()); ++a) {
    const auto& sc = raw.schools[a];
    if (sc.id == "null") err("schools[" + std::to_string(a) + "]: id \"null\" is reserved");
    if (!school_of.emplace(sc.id, a).second)
      err("schools[" + std::to_string(a) + "]: duplicate id \"" + sc.id + "\"");
    if (sc.capacity < 1)
      err("schools[" + std::to_string(a) + "].capacity: must be >= 1 (got " +
          std::to_string(sc.capacity) + ")");
  }

  const int n = static_cast<int>(raw.students.size());
  const int s = static_cast<int>(raw.schools.size());
  std::vector<std::vector<int>> prefs(n);
  std::vector<std::vector<int>> priorities(s + 1);
  std::vector<bool> pref_given(n, false), prio_given(s + 1, false);

  for (const auto& [id, order] : raw.preferences) {
    auto it = student_of.find(id);
    if (it == student_of.end()) {
      err("preferences." + id + ": unknown student");
      continue;
    }
    if (pref_given[it->second]) {
      err("preferences." + id + ": duplicate entry for student");
      continue;
    }
    pref_given[it->second] = true;
    std::vector<int>& out = prefs[it->second];
    std::unordered_set<int> seen;
    for (int k = 0; k < static_cast<int>(order.size()); ++k) {
      const std::string& ref = order[k];
      int a;
      if (ref == "null") {
        a = s;
      } else {
        auto jt = school_of.find(ref);
        if (jt == school_of.end()) {
          err("preferences." + id + "[" + std::to_string(k) + "]: unknown school \"" + ref + "\"");
          continue;
        }
        a = jt->second;
      }
      if (!seen.insert(a).second)
        err("preferences." + id + "[" + std::to_string(k) + "]: duplicate school \"" + ref + "\"");
      else
        out.push_back(a);
    }
  }

  for (const auto& [id, order] : raw.priorities) {
    int a;
    if (id == "null") {
      a = s;
    } else {
      auto it = school_of.find(id);
      if (it == school_of.end()) {
        err("priorities." + id + ": unknown school");
        continue;
      }
      a = it->second;
    }
    if (prio_given[a]) {
      err("priorities." + id + ": duplicate entry for school");
      continue;
    }
    prio_given[a] = true;
    std::vector<int>& out = priorities[a];
    std::unordered_set<int> seen;
    for (int k = 0; k < static_cast<int>(order.size()); ++k) {
      auto jt = student_of.find(order[k]);
      if (jt == student_of.end()) {
        err("priorities." + id + "[" + std::to_string(k) + "]: unknown student \"" + order[k] + "\"");
        continue;
      }
      if (!seen.insert(jt->second).second)
        err("priorities." + id + "[" + std::to_string(k) + "]: duplicate student \"" + order[k] + "\"");
      else
        out.push_back(jt->second);
    }
  }

  if (!result.errors.empty()) return result;

  // Deterministic completion of truncated orders, in roster order.
  for (int i = 0; i < n; ++i) {
    std::vector<bool> listed(s + 1, false);
    for (int a : prefs[i]) listed[a] = true;
    if (!listed[s]) prefs[i].push_back(s);  // null right below the listed tail
    for (int a = 0; a < s; ++a)
      if (!listed[a]) prefs[i].push_back(a);
  }
  for (int a = 0; a <= s; ++a) {
    std::vector<bool> listed(n, false);
    for (int i : priorities[a]) listed[i] = true;
    for (int i = 0; i < n; ++i)
      if (!listed[i]) priorities[a].push_back(i);
  }

  Problem problem;
  problem.students = raw.students;
  problem.schools.reserve(s);
  problem.capacities.reserve(s);
  for (const auto& sc : raw.schools) {
    problem.schools.push_back(sc.id);
    problem.capacities.push_back(sc.capacity);
  }
  problem.prefs = std::move(prefs);
  problem.priorities = std::move(priorities);
  problem.finalize();
  result.problem = std::move(problem);
  return result;
}

Problem validate_or_throw(const RawProblem& raw) {
  ValidationResult r = validate(raw);
  if (!r.ok()) {
    std::string msg = "invalid problem:";
    for (const auto& e : r.errors) msg += "\n  " + e;
    throw Error(msg);
  }
  return *std::move(r.problem);
}

// ---------------------------------------------------------------------------
// Removal / projection

Problem remove_and_project(const Problem& problem, const std::vector<int>& removed_sorted,
                           const std::vector<int>& vacated_seats,
                           std::vector<int>* student_parent, std::vector<int>* school_parent,
                           std::vector<int>* seats_removed) {
  const int n = problem.num_students();
  const int s = problem.num_schools();
  std::vector<bool> gone(n, false);
  for (int i : removed_sorted) {
    if (i < 0 || i >= n) throw Error("removal: unknown student index " + std::to_string(i));
    if (gone[i]) throw Error("removal: student listed twice");
    gone[i] = true;
  }

  std::vector<int> taken(s, 0);
  for (int a : vacated_seats) {
    if (a < 0 || a > s) throw Error("removal: unknown school index " + std::to_string(a));
    if (a < s) ++taken[a];
  }

  std::vector<int> new_cap(s);
  std::vector<int> school_map(s, -1);  // parent -> reduced, -1 if dropped
  Problem out;
  for (int a = 0; a < s; ++a) {
    new_cap[a] = problem.capacities[a] - taken[a];
    if (new_cap[a] < 0)
      throw Error("removal: school " + problem.schools[a] + " loses more seats than it has");
    if (new_cap[a] > 0) {
      school_map[a] = out.num_schools();
      out.schools.push_back(problem.schools[a]);
      out.capacities.push_back(new_cap[a]);
    }
  }
  const int new_null = out.num_schools();

  std::vector<int> student_map(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!gone[i]) {
      student_map[i] = static_cast<int>(out.students.size());
      out.students.push_back(problem.students[i]);
    }
  }

  out.prefs.reserve(out.students.size());
  for (int i = 0; i < n; ++i) {
    if (gone[i]) continue;
    std::vector<int> order;
    order.reserve(new_null + 1);
    for (int a : problem.prefs[i]) {
      if (problem.is_null(a))
        order.push_back(new_null);
      else if (school_map[a] >= 0)
        order.push_back(school_map[a]);
    }
    out.prefs.push_back(std::move(order));
  }
  out.priorities.resize(new_null + 1);
  for (int a = 0; a <= s; ++a) {
    int na = problem.is_null(a) ? new_null : school_map[a];
    if (na < 0) continue;
    for (int i : problem.priorities[a])
      if (!gone[i]) out.priorities[na].push_back(student_map[i]);
  }
  out.finalize();

  if (student_parent) {
    student_parent->clear();
    for (int i = 0; i < n; ++i)
      if (!gone[i]) student_parent->push_back(i);
  }
  if (school_parent) {
    school_parent->clear();
    for (int a = 0; a < s; ++a)
      if (school_map[a] >= 0) school_parent->push_back(a);
  }
  if (seats_removed) *seats_removed = taken;
  return out;
}

ReducedProblem reduce_by_removal(const Problem& problem, const Matching& m,
                                 const std::vector<int>& removed) {
  std::vector<int> sorted = removed;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> seats;
  seats.reserve(sorted.size());
  for (int i : sorted) {
    if (i < 0 || i >= problem.num_students())
      throw Error("reduce_by_removal: unknown student index " + std::to_string(i));
    seats.push_back(m.at(i));
  }
  ReducedProblem red;
  red.removed = sorted;
  red.problem = remove_and_project(problem, sorted, seats, &red.student_parent,
                                   &red.school_parent, &red.seats_removed);
  return red;
}

Matching ReducedProblem::project_matching(const Problem& parent, const Matching& m) const {
  std::vector<int> inverse_school(parent.num_schools(), -1);
  for (int r = 0; r < static_cast<int>(school_parent.size()); ++r)
    inverse_school[school_parent[r]] = r;
  std::vector<int> assignment;
  assignment.reserve(student_parent.size());
  for (int pi : student_parent) {
    int a = m.at(pi);
    if (parent.is_null(a)) {
      assignment.push_back(problem.null_school());
    } else {
      int ra = inverse_school[a];
      if (ra < 0)
        throw Error("project_matching: surviving student holds a dropped school seat");
      assignment.push_back(ra);
    }
  }
  return make_matching(problem, std::move(assignment));
}

// ---------------------------------------------------------------------------
// Enumeration

void for_each_matching(const Problem& problem,
                       const std::function<void(const Matching&)>& fn, int max_students) {
  const int n = problem.num_students();
  if (n > max_students)
    throw Error("for_each_matching: instance has " + std::to_string(n) +
                " students, guard is " + std::to_string(max_students));
  std::vector<int> left = problem.capacities;
  std::vector<int> assignment(n, -1);
  const int null = problem.null_school();

  // Depth-first over students; school index order makes the stream
  // lexicographic and deterministic.
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      fn(Matching{assignment});
      return;
    }
    for (int a = 0; a <= null; ++a) {
      if (a != null) {
        if (left[a] == 0) continue;
        --left[a];
      }
      assignment[i] = a;
      rec(i + 1);
      if (a != null) ++left[a];
    }
    assignment[i] = -1;
  };
  rec(0);
}

std::vector<Matching> all_matchings(const Problem& problem, int max_students) {
  std::vector<Matching> out;
  for_each_matching(problem, [&out](const Matching& m) { out.push_back(m); }, max_students);
  return out;
}

}  // namespace ttcm
