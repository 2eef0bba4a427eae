#include "ttcm/mbg.hpp"

#include <algorithm>

namespace ttcm {

std::vector<int> best_schools(const Problem& problem, const std::vector<int>& group) {
  std::vector<bool> in(problem.num_schools() + 1, false);
  for (int i : group) {
    if (i < 0 || i >= problem.num_students())
      throw Error("best_schools: unknown student index " + std::to_string(i));
    in[problem.favorite(i)] = true;
  }
  std::vector<int> out;
  for (int a = 0; a <= problem.num_schools(); ++a)
    if (in[a]) out.push_back(a);
  return out;
}

std::vector<int> top_students(const Problem& problem, const std::vector<int>& school_set) {
  std::vector<bool> in(problem.num_students(), false);
  for (int a : school_set) {
    if (a < 0 || a > problem.num_schools())
      throw Error("top_students: unknown school index " + std::to_string(a));
    if (problem.num_students() > 0) in[problem.top_student(a)] = true;
  }
  std::vector<int> out;
  for (int i = 0; i < problem.num_students(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

std::vector<bool> vertices_on_cycles(const std::vector<int>& successor) {
  const int n = static_cast<int>(successor.size());
  std::vector<bool> on_cycle(n, false);
  // 0 = unseen, otherwise 1-based walk id; negative = finished.
  std::vector<int> mark(n, 0);
  int walk = 0;
  for (int start = 0; start < n; ++start) {
    if (mark[start] != 0) continue;
    ++walk;
    std::vector<int> path;
    int v = start;
    while (mark[v] == 0) {
      mark[v] = walk;
      path.push_back(v);
      v = successor[v];
    }
    if (mark[v] == walk) {
      // closed on the current walk: everything from v's first visit onward
      // is one cycle
      bool in_cycle = false;
      for (int u : path) {
        if (u == v) in_cycle = true;
        if (in_cycle) on_cycle[u] = true;
      }
    }
    for (int u : path) mark[u] = -1;
  }
  return on_cycle;
}

std::vector<int> mutual_best_group(const Problem& problem) {
  const int n = problem.num_students();
  if (n == 0) return {};
  const int s = problem.num_schools();
  // Vertices: students 0..n-1, then schools n..n+s (null school last).
  std::vector<int> successor(n + s + 1);
  for (int i = 0; i < n; ++i) successor[i] = n + problem.favorite(i);
  for (int a = 0; a <= s; ++a) successor[n + a] = problem.top_student(a);
  std::vector<bool> on_cycle = vertices_on_cycles(successor);
  std::vector<int> group;
  for (int i = 0; i < n; ++i)
    if (on_cycle[i]) group.push_back(i);
  return group;
}

Problem subproblem_after_group(const Problem& problem, const std::vector<int>& group,
                               std::vector<int>* student_parent,
                               std::vector<int>* school_parent) {
  std::vector<int> sorted = group;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != mutual_best_group(problem))
    throw Error("subproblem_after_group: group is not the mutual best group");
  std::vector<int> seats;
  seats.reserve(sorted.size());
  for (int i : sorted) seats.push_back(problem.favorite(i));
  return remove_and_project(problem, sorted, seats, student_parent, school_parent);
}

std::vector<int> MbgSequence::union_of_groups(unsigned mask) const {
  std::vector<int> out;
  for (int k = 0; k < group_count(); ++k)
    if (mask & (1u << k)) out.insert(out.end(), levels[k].group.begin(), levels[k].group.end());
  std::sort(out.begin(), out.end());
  return out;
}

MbgSequence mbg_sequence(const Problem& problem) {
  MbgSequence seq;
  Problem current = problem;
  std::vector<int> student_origin(current.num_students());
  std::vector<int> school_origin(current.num_schools());
  for (int i = 0; i < current.num_students(); ++i) student_origin[i] = i;
  for (int a = 0; a < current.num_schools(); ++a) school_origin[a] = a;
  const int original_null = problem.null_school();

  while (current.num_students() > 0) {
    std::vector<int> local_group = mutual_best_group(current);
    MbgLevel level;
    level.student_origin = student_origin;
    level.school_origin = school_origin;
    for (int i : local_group) {
      int fav = current.favorite(i);
      int orig_school = current.is_null(fav) ? original_null : school_origin[fav];
      level.favorites.emplace_back(student_origin[i], orig_school);
      level.group.push_back(student_origin[i]);
    }
    std::sort(level.group.begin(), level.group.end());
    std::sort(level.favorites.begin(), level.favorites.end());

    std::vector<int> next_students, next_schools;
    Problem next = subproblem_after_group(current, local_group, &next_students, &next_schools);
    level.subproblem = std::move(current);
    seq.levels.push_back(std::move(level));

    std::vector<int> new_student_origin, new_school_origin;
    for (int i : next_students) new_student_origin.push_back(student_origin[i]);
    for (int a : next_schools) new_school_origin.push_back(school_origin[a]);
    student_origin = std::move(new_student_origin);
    school_origin = std::move(new_school_origin);
    current = std::move(next);
  }
  return seq;
}

}  // namespace ttcm
