#include "ttcm/mechanisms.hpp"

#include <algorithm>

#include "ttcm/fixtures.hpp"
#include "ttcm/mbg.hpp"

namespace ttcm {

AgentOrdering ordering_from_ids(const Problem& problem, const std::vector<std::string>& ids) {
  if (static_cast<int>(ids.size()) != problem.num_students())
    throw Error("ordering: expected " + std::to_string(problem.num_students()) + " students");
  std::vector<bool> seen(problem.num_students(), false);
  AgentOrdering f;
  for (const auto& id : ids) {
    auto i = problem.student_index(id);
    if (!i) throw Error("ordering: unknown student \"" + id + "\"");
    if (seen[*i]) throw Error("ordering: student \"" + id + "\" listed twice");
    seen[*i] = true;
    f.order.push_back(*i);
  }
  return f;
}

namespace {

void check_ordering(const Problem& problem, const AgentOrdering& f) {
  const int n = problem.num_students();
  std::vector<bool> seen(n, false);
  if (static_cast<int>(f.order.size()) != n)
    throw Error("ordering: not a permutation of the students");
  for (int i : f.order) {
    if (i < 0 || i >= n || seen[i]) throw Error("ordering: not a permutation of the students");
    seen[i] = true;
  }
}

}  // namespace

Matching ttc_stepwise(const Problem& problem) {
  const int n = problem.num_students();
  const int s = problem.num_schools();
  const int null = s;
  std::vector<int> assignment(n, -1);
  std::vector<bool> student_alive(n, true);
  std::vector<int> seats = problem.capacities;
  int remaining = n;

  // Vertex layout: students 0..n-1, schools n..n+s (null last).
  std::vector<int> successor(n + s + 1, -1);
  while (remaining > 0) {
    for (int i = 0; i < n; ++i) {
      if (!student_alive[i]) continue;
      for (int a : problem.prefs[i]) {
        if (a == null || seats[a] > 0) {
          successor[i] = n + a;
          break;
        }
      }
    }
    for (int a = 0; a <= s; ++a) {
      if (a != null && seats[a] == 0) continue;
      for (int i : problem.priorities[a]) {
        if (student_alive[i]) {
          successor[n + a] = i;
          break;
        }
      }
    }
    // Dead vertices self-loop so the cycle finder can ignore them; no live
    // vertex ever points at a dead one.
    for (int i = 0; i < n; ++i)
      if (!student_alive[i]) successor[i] = i;
    for (int a = 0; a < s; ++a)
      if (seats[a] == 0) successor[n + a] = n + a;

    std::vector<bool> on_cycle = vertices_on_cycles(successor);
    int cleared = 0;
    for (int i = 0; i < n; ++i) {
      if (!student_alive[i] || !on_cycle[i]) continue;
      int a = successor[i] - n;
      assignment[i] = a;
      student_alive[i] = false;
      if (a != null) --seats[a];
      ++cleared;
    }
    if (cleared == 0) throw Error("ttc: no cycle found, graph corrupt");
    remaining -= cleared;
  }
  return make_matching(problem, std::move(assignment));
}

Matching ttc_compact(const Problem& problem) {
  MbgSequence seq = mbg_sequence(problem);
  std::vector<int> assignment(problem.num_students(), -1);
  for (const MbgLevel& level : seq.levels)
    for (const auto& [student, school] : level.favorites) assignment[student] = school;
  return make_matching(problem, std::move(assignment));
}

Matching deferred_acceptance(const Problem& problem) {
  const int n = problem.num_students();
  const int s = problem.num_schools();
  const int null = s;
  // next[i]: position on i's list to propose to when unheld
  std::vector<int> next(n, 0);
  std::vector<int> held_at(n, -1);  // school currently holding i, -1 if none
  std::vector<std::vector<int>> held(s + 1);

  bool moved = true;
  while (moved) {
    moved = false;
    std::vector<std::vector<int>> applicants(s + 1);
    for (int i = 0; i < n; ++i) {
      if (held_at[i] != -1) continue;
      applicants[problem.prefs[i][next[i]]].push_back(i);
      moved = true;
    }
    if (!moved) break;
    for (int a = 0; a <= s; ++a) {
      if (applicants[a].empty()) continue;
      std::vector<int>& pool = held[a];
      pool.insert(pool.end(), applicants[a].begin(), applicants[a].end());
      if (a != null && static_cast<int>(pool.size()) > problem.capacities[a]) {
        std::sort(pool.begin(), pool.end(),
                  [&](int x, int y) { return problem.outranks(a, x, y); });
        for (int r = problem.capacities[a]; r < static_cast<int>(pool.size()); ++r) {
          int rejected = pool[r];
          held_at[rejected] = -1;
          ++next[rejected];  // move past the rejecting school
        }
        pool.resize(problem.capacities[a]);
      }
      for (int i : pool) held_at[i] = a;
    }
  }
  std::vector<int> assignment(n, -1);
  for (int i = 0; i < n; ++i) assignment[i] = held_at[i];
  return make_matching(problem, std::move(assignment));
}

Matching serial_dictatorship(const Problem& problem, const AgentOrdering& f) {
  check_ordering(problem, f);
  std::vector<int> seats = problem.capacities;
  std::vector<int> assignment(problem.num_students(), -1);
  for (int i : f.order) {
    for (int a : problem.prefs[i]) {
      if (problem.is_null(a) || seats[a] > 0) {
        assignment[i] = a;
        if (!problem.is_null(a)) --seats[a];
        break;
      }
    }
  }
  return make_matching(problem, std::move(assignment));
}

Matching psi_fixture(const Problem& problem) {
  const Problem reference = fixtures::example4_problem();
  if (problem.students != reference.students || problem.schools != reference.schools ||
      problem.capacities != reference.capacities || problem.priorities != reference.priorities)
    throw Error("psi: roster primitives differ from the fixture domain");
  const int null = problem.null_school();
  // designated profile: 1:(a,b,null), 2:(b,a,null), 3:(a,b,null)
  const std::vector<std::vector<int>> designated = {{0, 1, null}, {1, 0, null}, {0, 1, null}};
  if (problem.prefs == designated)
    return make_matching(problem, {0, 1, null});
  return make_matching(problem, {null, null, null});
}

Matching tilde_mechanism(const Problem& problem, const AgentOrdering& f) {
  check_ordering(problem, f);
  bool identical = true;
  for (int i = 1; i < problem.num_students(); ++i)
    if (problem.prefs[i] != problem.prefs[0]) {
      identical = false;
      break;
    }
  if (identical && problem.num_students() > 0) return serial_dictatorship(problem, f);
  return ttc_stepwise(problem);
}

Matching hat_mechanism(const Problem& problem) {
  return ergin_acyclic(problem) ? deferred_acceptance(problem) : ttc_stepwise(problem);
}

bool ergin_acyclic(const Problem& problem, ErginWitness* witness) {
  const int n = problem.num_students();
  const int s = problem.num_schools();
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      if (b == a) continue;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          for (int k = 0; k < n; ++k) {
            if (k == i || k == j) continue;
            if (!(problem.outranks(a, i, j) && problem.outranks(a, j, k) &&
                  problem.outranks(b, k, i)))
              continue;
            // scarcity: disjoint filler sets above j at a / above i at b
            std::vector<int> above_a, above_b;
            std::vector<bool> in_a(n, false);
            for (int x = 0; x < n; ++x) {
              if (x == i || x == j || x == k) continue;
              if (problem.outranks(a, x, j)) {
                above_a.push_back(x);
                in_a[x] = true;
              }
              if (problem.outranks(b, x, i)) above_b.push_back(x);
            }
            const int need_a = problem.capacities[a] - 1;
            const int need_b = problem.capacities[b] - 1;
            if (static_cast<int>(above_a.size()) < need_a) continue;
            if (static_cast<int>(above_b.size()) < need_b) continue;
            std::vector<int> union_ab = above_a;
            for (int x : above_b)
              if (!in_a[x]) union_ab.push_back(x);
            if (static_cast<int>(union_ab.size()) < need_a + need_b) continue;

            if (witness) {
              // greedy transversal: fill N_a preferring students unusable
              // for N_b, then N_b from what is left
              std::vector<bool> in_b(n, false);
              for (int x : above_b) in_b[x] = true;
              std::vector<int> fill_a;
              for (int x : above_a)
                if (!in_b[x] && static_cast<int>(fill_a.size()) < need_a) fill_a.push_back(x);
              for (int x : above_a)
                if (in_b[x] && static_cast<int>(fill_a.size()) < need_a) fill_a.push_back(x);
              std::vector<bool> used(n, false);
              for (int x : fill_a) used[x] = true;
              std::vector<int> fill_b;
              for (int x : above_b)
                if (!used[x] && static_cast<int>(fill_b.size()) < need_b) fill_b.push_back(x);
              std::sort(fill_a.begin(), fill_a.end());
              std::sort(fill_b.begin(), fill_b.end());
              *witness = ErginWitness{a, b, i, j, k, std::move(fill_a), std::move(fill_b)};
            }
            return false;
          }
        }
      }
    }
  }
  return true;
}

Mechanism make_ttc() { return {"ttc", [](const Problem& p) { return ttc_stepwise(p); }}; }

Mechanism make_ttc_compact() {
  return {"ttc-compact", [](const Problem& p) { return ttc_compact(p); }};
}

Mechanism make_da() { return {"da", [](const Problem& p) { return deferred_acceptance(p); }}; }

namespace {

std::string ordering_suffix(const Problem& roster, const AgentOrdering& f) {
  std::string out;
  for (size_t k = 0; k < f.order.size(); ++k) {
    if (k) out += ",";
    out += roster.students[f.order[k]];
  }
  return out;
}

}  // namespace

Mechanism make_sd(const Problem& roster, AgentOrdering f) {
  check_ordering(roster, f);
  std::string name = "sd:" + ordering_suffix(roster, f);
  return {std::move(name),
          [f = std::move(f)](const Problem& p) { return serial_dictatorship(p, f); }};
}

Mechanism make_psi() { return {"psi", [](const Problem& p) { return psi_fixture(p); }}; }

Mechanism make_tilde(const Problem& roster, AgentOrdering f) {
  check_ordering(roster, f);
  std::string name = "tilde:" + ordering_suffix(roster, f);
  return {std::move(name),
          [f = std::move(f)](const Problem& p) { return tilde_mechanism(p, f); }};
}

Mechanism make_hat() { return {"hat", [](const Problem& p) { return hat_mechanism(p); }}; }

Mechanism mechanism_by_name(const std::string& name, const Problem& roster) {
  auto split_ids = [](const std::string& csv) {
    std::vector<std::string> ids;
    std::string cur;
    for (char c : csv) {
      if (c == ',') {
        ids.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    ids.push_back(cur);
    return ids;
  };
  if (name == "ttc") return make_ttc();
  if (name == "ttc-compact") return make_ttc_compact();
  if (name == "da") return make_da();
  if (name == "psi") return make_psi();
  if (name == "hat") return make_hat();
  if (name.rfind("sd:", 0) == 0)
    return make_sd(roster, ordering_from_ids(roster, split_ids(name.substr(3))));
  if (name.rfind("tilde:", 0) == 0)
    return make_tilde(roster, ordering_from_ids(roster, split_ids(name.substr(6))));
  throw Error("unknown mechanism \"" + name +
              "\" (expected ttc, ttc-compact, da, sd:<ids>, psi, tilde:<ids>, hat)");
}

}  // namespace ttcm
