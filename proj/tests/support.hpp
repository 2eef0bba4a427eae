#pragma once

// Shared test helpers: deterministic instance generators and independent
// oracles. The oracles deliberately take the dumbest defensible route
// (subset enumeration, multinomial counting) so they share no code with the
// library paths they check.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ttcm/mbg.hpp"
#include "ttcm/model.hpp"

namespace ttcm::testing {

inline Problem build_problem(std::vector<std::string> students, std::vector<std::string> schools,
                             std::vector<int> capacities, std::vector<std::vector<int>> prefs,
                             std::vector<std::vector<int>> priorities) {
  Problem p;
  p.students = std::move(students);
  p.schools = std::move(schools);
  p.capacities = std::move(capacities);
  p.prefs = std::move(prefs);
  p.priorities = std::move(priorities);
  p.finalize();
  return p;
}

inline Problem random_problem(std::mt19937& rng, int max_students = 6, int max_schools = 4,
                              int max_capacity = 3) {
  const int n = 1 + static_cast<int>(rng() % max_students);
  const int s = 1 + static_cast<int>(rng() % max_schools);
  Problem p;
  for (int i = 0; i < n; ++i) p.students.push_back(std::to_string(i + 1));
  for (int a = 0; a < s; ++a) {
    p.schools.push_back(std::string(1, static_cast<char>('a' + a)));
    p.capacities.push_back(1 + static_cast<int>(rng() % max_capacity));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> order(s + 1);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    p.prefs.push_back(std::move(order));
  }
  for (int a = 0; a <= s; ++a) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    p.priorities.push_back(std::move(order));
  }
  p.finalize();
  return p;
}

/// Largest fixed point of I' = T(B(I')) by enumerating every student
/// subset. Fixed points are closed under union, so the union of all of
/// them is the maximum.
inline std::vector<int> mbg_fixed_point_oracle(const Problem& p) {
  const int n = p.num_students();
  std::vector<bool> in_union(n, false);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    // B: favorites of members; T: top-priority students of those schools
    std::vector<bool> school_hit(p.num_schools() + 1, false);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) school_hit[p.favorite(i)] = true;
    std::vector<bool> t_set(n, false);
    for (int a = 0; a <= p.num_schools(); ++a)
      if (school_hit[a]) t_set[p.top_student(a)] = true;
    bool fixed = true;
    for (int i = 0; i < n; ++i)
      if (t_set[i] != ((mask >> i) & 1u)) {
        fixed = false;
        break;
      }
    if (fixed)
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) in_union[i] = true;
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (in_union[i]) out.push_back(i);
  return out;
}

/// Generalized-priority-cycle test by exhausting every pair of disjoint
/// filler sets.
inline bool ergin_acyclic_oracle(const Problem& p) {
  const int n = p.num_students();
  const int s = p.num_schools();
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      if (a == b) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            if (i == j || i == k || j == k) continue;
            if (!(p.outranks(a, i, j) && p.outranks(a, j, k) && p.outranks(b, k, i))) continue;
            std::vector<int> rest;
            for (int x = 0; x < n; ++x)
              if (x != i && x != j && x != k) rest.push_back(x);
            const int m = static_cast<int>(rest.size());
            for (unsigned ma = 0; ma < (1u << m); ++ma)
              for (unsigned mb = 0; mb < (1u << m); ++mb) {
                if (ma & mb) continue;  // disjoint
                int ca = 0, cb = 0;
                bool ok = true;
                for (int t = 0; t < m && ok; ++t) {
                  if (ma & (1u << t)) {
                    ++ca;
                    if (!p.outranks(a, rest[t], j)) ok = false;
                  }
                  if (mb & (1u << t)) {
                    ++cb;
                    if (!p.outranks(b, rest[t], i)) ok = false;
                  }
                }
                if (ok && ca == p.capacities[a] - 1 && cb == p.capacities[b] - 1) return false;
              }
          }
    }
  return true;
}

/// Number of capacity-feasible matchings by summing multinomials over all
/// per-school occupancy vectors.
inline long long matching_count_oracle(const Problem& p) {
  const int n = p.num_students();
  const int s = p.num_schools();
  std::vector<long long> fact(n + 1, 1);
  for (int t = 1; t <= n; ++t) fact[t] = fact[t - 1] * t;
  long long total = 0;
  std::vector<int> occupancy(s, 0);
  std::function<void(int, int)> rec = [&](int a, int used) {
    if (a == s) {
      long long ways = fact[n];
      for (int t = 0; t < s; ++t) ways /= fact[occupancy[t]];
      ways /= fact[n - used];
      total += ways;
      return;
    }
    for (int c = 0; c <= std::min(p.capacities[a], n - used); ++c) {
      occupancy[a] = c;
      rec(a + 1, used + c);
    }
    occupancy[a] = 0;
  };
  rec(0, 0);
  return total;
}

inline bool pareto_dominates(const Problem& p, const Matching& nu, const Matching& mu) {
  bool strict = false;
  for (int i = 0; i < p.num_students(); ++i) {
    if (!p.weakly_prefers(i, nu.at(i), mu.at(i))) return false;
    if (p.prefers(i, nu.at(i), mu.at(i))) strict = true;
  }
  return strict;
}

/// The shortcut top-trading-cycles variant that hands the null school to
/// any student pointing at it before clearing cycles, instead of letting
/// the null school trade through its priority order.
inline Matching ttc_absorbing_variant(const Problem& p) {
  const int n = p.num_students();
  const int s = p.num_schools();
  const int null = s;
  std::vector<int> assignment(n, -1);
  std::vector<bool> alive(n, true);
  std::vector<int> seats = p.capacities;
  int remaining = n;
  while (remaining > 0) {
    bool absorbed = false;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      int fav = -1;
      for (int a : p.prefs[i])
        if (a == null || seats[a] > 0) {
          fav = a;
          break;
        }
      if (fav == null) {
        assignment[i] = null;
        alive[i] = false;
        --remaining;
        absorbed = true;
      }
    }
    if (remaining == 0) break;
    if (absorbed) continue;  // repoint after removals
    std::vector<int> successor(n + s, -1);
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) {
        successor[i] = i;
        continue;
      }
      for (int a : p.prefs[i])
        if (a != null && seats[a] > 0) {
          successor[i] = n + a;
          break;
        }
    }
    for (int a = 0; a < s; ++a) {
      successor[n + a] = n + a;
      if (seats[a] == 0) continue;
      for (int i : p.priorities[a])
        if (alive[i]) {
          successor[n + a] = i;
          break;
        }
    }
    std::vector<bool> on_cycle = vertices_on_cycles(successor);
    int cleared = 0;
    for (int i = 0; i < n; ++i) {
      if (!alive[i] || !on_cycle[i]) continue;
      int a = successor[i] - n;
      assignment[i] = a;
      alive[i] = false;
      --seats[a];
      ++cleared;
    }
    remaining -= cleared;
    if (cleared == 0) throw Error("absorbing variant: stuck");
  }
  return make_matching(p, std::move(assignment));
}

}  // namespace ttcm::testing
